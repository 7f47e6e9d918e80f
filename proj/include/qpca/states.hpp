// Copyright 2026 The qpca-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "qpca/linalg.hpp"

namespace qpca {

// Validation tolerances. Floating-point eigensolvers leave -1e-15 artifacts
// on exactly-PSD matrices, hence the looser PSD bound.
namespace tol {
inline constexpr double kHermitian = 1e-9;
inline constexpr double kTrace = 1e-9;
inline constexpr double kNorm = 1e-9;
inline constexpr double kPsd = 1e-8;
inline constexpr double kOrthonormal = 1e-8;
inline constexpr double kReconstruction = 1e-8;
inline constexpr double kDegenerateGap = 1e-10;
}  // namespace tol

/// Unit-norm complex vector.
class PureState {
 public:
  explicit PureState(ComplexVector amplitudes)
      : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() < 1) {
      throw ValidationError("PureState: empty amplitude vector");
    }
    if (!all_finite(amplitudes_)) {
      throw ValidationError("PureState: non-finite amplitude");
    }
    const double norm = amplitudes_.norm();
    if (std::abs(norm - 1.0) > tol::kNorm) {
      throw ValidationError("PureState: norm deviates from 1 by " +
                            std::to_string(std::abs(norm - 1.0)));
    }
  }

  /// Computational basis state |k> in dimension d.
  static PureState basis(long d, long k) {
    ComplexVector v = ComplexVector::Zero(d);
    v(k) = 1.0;
    return PureState(std::move(v));
  }

  /// Normalizes an arbitrary nonzero vector.
  static PureState normalized(ComplexVector v) {
    const double norm = v.norm();
    if (!(norm > 0.0)) {
      throw ValidationError("PureState: cannot normalize a zero vector");
    }
    return PureState(v / norm);
  }

  long dim() const { return amplitudes_.size(); }
  const ComplexVector& amplitudes() const { return amplitudes_; }

  ComplexMatrix projector() const {
    return amplitudes_ * amplitudes_.adjoint();
  }

 private:
  ComplexVector amplitudes_;
};

/// d x d complex Hermitian PSD trace-1 operator.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m) : matrix_(std::move(m)) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 1) {
      throw ShapeError("DensityMatrix: matrix must be square and nonempty");
    }
    if (!all_finite(matrix_)) {
      throw ValidationError("DensityMatrix: non-finite entry");
    }
    const double herm = max_abs(ComplexMatrix(matrix_ - matrix_.adjoint()));
    if (herm > tol::kHermitian) {
      throw ValidationError("DensityMatrix: Hermiticity violated by " +
                            std::to_string(herm));
    }
    const double tr_dev = std::abs(matrix_.trace() - cxd(1.0));
    if (tr_dev > tol::kTrace) {
      throw ValidationError("DensityMatrix: trace deviates from 1 by " +
                            std::to_string(tr_dev));
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(
        matrix_, Eigen::EigenvaluesOnly);
    const double min_eig = solver.eigenvalues().minCoeff();
    if (min_eig < -tol::kPsd) {
      throw ValidationError("DensityMatrix: negative eigenvalue " +
                            std::to_string(min_eig));
    }
  }

  static DensityMatrix pure(const PureState& state) {
    return DensityMatrix(state.projector());
  }

  static DensityMatrix maximally_mixed(long d) {
    return DensityMatrix(ComplexMatrix(identity(d) / double(d)));
  }

  /// Diagonal density matrix from a probability vector.
  static DensityMatrix diagonal(const std::vector<double>& probabilities) {
    const long d = long(probabilities.size());
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    for (long i = 0; i < d; ++i) m(i, i) = probabilities[size_t(i)];
    return DensityMatrix(std::move(m));
  }

  /// Uniform mixture (1/m) sum_i |v_i><v_i|.
  static DensityMatrix uniform_mixture(const std::vector<PureState>& states) {
    if (states.empty()) {
      throw ValidationError("uniform_mixture: empty state list");
    }
    const long d = states.front().dim();
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    for (const auto& s : states) {
      if (s.dim() != d) {
        throw ShapeError("uniform_mixture: mixed state dimensions");
      }
      m += s.projector();
    }
    m /= double(states.size());
    return DensityMatrix(std::move(m));
  }

  long dim() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }

 private:
  ComplexMatrix matrix_;
};

/// Eigenvalue/eigenvector pairs of a Hermitian operator, eigenvalues sorted
/// descending. Within a degenerate cluster (gap below tol::kDegenerateGap)
/// the reported vectors are an arbitrary orthonormal basis of the eigenspace;
/// compare projectors, not individual vectors, across such clusters.
struct SpectralDecomposition {
  RealVector eigenvalues;  // descending
  std::vector<PureState> eigenvectors;
  long dim = 0;

  /// Projector onto the eigenspaces of eigenvalues with indices [begin, end).
  ComplexMatrix eigenspace_projector(long begin, long end) const {
    ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
    for (long i = begin; i < end; ++i) {
      p += eigenvectors[size_t(i)].projector();
    }
    return p;
  }

  ComplexMatrix reconstruct() const {
    ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
    for (long i = 0; i < long(eigenvectors.size()); ++i) {
      m += eigenvalues(i) * eigenvectors[size_t(i)].projector();
    }
    return m;
  }
};

namespace detail {

// Deterministic eigenvector phase: the largest-magnitude component is made
// real positive (lowest index wins ties).
inline ComplexVector fix_phase(ComplexVector v) {
  long pivot = 0;
  double best = -1.0;
  for (long i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > best + 1e-15) {
      best = mag;
      pivot = i;
    }
  }
  if (best > 0.0) {
    v *= std::conj(v(pivot)) / std::abs(v(pivot));
  }
  return v;
}

}  // namespace detail

/// Full eigendecomposition of a Hermitian matrix: descending eigenvalues,
/// orthonormal phase-fixed eigenvectors, reconstruction checked.
inline SpectralDecomposition hermitian_eig(const ComplexMatrix& h) {
  require_hermitian(h, tol::kHermitian, "hermitian_eig");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw InternalError("hermitian_eig: eigensolver failed to converge");
  }
  const long d = h.rows();
  SpectralDecomposition out;
  out.dim = d;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors.reserve(size_t(d));
  for (long i = 0; i < d; ++i) {
    ComplexVector v = solver.eigenvectors().col(d - 1 - i);
    out.eigenvectors.emplace_back(detail::fix_phase(std::move(v)));
  }
  const double residual = max_abs(ComplexMatrix(out.reconstruct() - h));
  if (residual > tol::kReconstruction) {
    throw InternalError("hermitian_eig: reconstruction residual " +
                        std::to_string(residual));
  }
  return out;
}

/// Unitary e^{-i h t} for Hermitian h, via full eigendecomposition.
inline ComplexMatrix matrix_exponential(const ComplexMatrix& h, double t) {
  require_hermitian(h, tol::kHermitian, "matrix_exponential");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw InternalError("matrix_exponential: eigensolver failed");
  }
  const long d = h.rows();
  ComplexVector phases(d);
  for (long i = 0; i < d; ++i) {
    phases(i) = std::exp(cxd(0.0, -solver.eigenvalues()(i) * t));
  }
  ComplexMatrix u =
      solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
  const double unitarity = max_abs(ComplexMatrix(u * u.adjoint() - identity(d)));
  if (unitarity > 1e-10) {
    throw InternalError("matrix_exponential: unitarity violated by " +
                        std::to_string(unitarity));
  }
  return u;
}

/// Sum of absolute eigenvalues of a Hermitian matrix (the trace norm).
inline double trace_norm_hermitian(const ComplexMatrix& m) {
  require_hermitian(m, tol::kHermitian, "trace_norm_hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().sum();
}

/// Trace distance (1/2)||a - b||_1, clamped to [0, 1].
inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) {
    throw ShapeError("trace_distance: dimension mismatch " +
                     std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
  const double dist = 0.5 * trace_norm_hermitian(a.matrix() - b.matrix());
  return std::clamp(dist, 0.0, 1.0);
}

/// |<u|v>|^2 for pure states.
inline double state_fidelity(const PureState& u, const PureState& v) {
  if (u.dim() != v.dim()) {
    throw ShapeError("state_fidelity: dimension mismatch");
  }
  const cxd overlap = u.amplitudes().adjoint() * v.amplitudes();
  return std::norm(overlap);
}

/// <v|rho|v> for a pure state against a density matrix.
inline double fidelity(const PureState& v, const DensityMatrix& rho) {
  if (v.dim() != rho.dim()) {
    throw ShapeError("fidelity: dimension mismatch");
  }
  const cxd val = v.amplitudes().adjoint() * rho.matrix() * v.amplitudes();
  return std::clamp(val.real(), 0.0, 1.0);
}

}  // namespace qpca
