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

#include <atomic>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "qpca/errors.hpp"

namespace qpca {

using cxd = std::complex<double>;

// Dense row-major storage throughout; entries are dimensionless amplitudes.
using ComplexMatrix =
    Eigen::Matrix<cxd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::Matrix<cxd, Eigen::Dynamic, 1>;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Hard upper bound on the configurable Hilbert-dimension cap.
inline constexpr long kMaxDimension = 4096;

namespace detail {
inline std::atomic<long>& dimension_cap_storage() {
  static std::atomic<long> cap{kMaxDimension};
  return cap;
}
}  // namespace detail

/// Currently configured total-Hilbert-dimension cap (default 4096).
inline long dimension_cap() { return detail::dimension_cap_storage().load(); }

/// Set the dimension cap. Values outside [1, 4096] are rejected.
inline void set_dimension_cap(long cap) {
  if (cap < 1 || cap > kMaxDimension) {
    throw ValidationError("dimension cap must lie in [1, " +
                          std::to_string(kMaxDimension) + "], got " +
                          std::to_string(cap));
  }
  detail::dimension_cap_storage().store(cap);
}

inline void check_dimension(long dim, const char* context) {
  if (dim > dimension_cap()) {
    throw DimensionLimitError(std::string(context) + ": dimension " +
                              std::to_string(dim) + " exceeds cap " +
                              std::to_string(dimension_cap()));
  }
}

/// RAII guard that swaps the dimension cap and restores it on scope exit.
class ScopedDimensionCap {
 public:
  explicit ScopedDimensionCap(long cap) : previous_(dimension_cap()) {
    set_dimension_cap(cap);
  }
  ~ScopedDimensionCap() { detail::dimension_cap_storage().store(previous_); }
  ScopedDimensionCap(const ScopedDimensionCap&) = delete;
  ScopedDimensionCap& operator=(const ScopedDimensionCap&) = delete;

 private:
  long previous_;
};

inline ComplexMatrix identity(long d) {
  return ComplexMatrix::Identity(d, d);
}

/// Largest entrywise absolute value (the max norm).
inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool all_finite(const ComplexMatrix& m) {
  for (long i = 0; i < m.rows(); ++i) {
    for (long j = 0; j < m.cols(); ++j) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) {
        return false;
      }
    }
  }
  return true;
}

inline bool is_hermitian(const ComplexMatrix& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) <= tolerance;
}

inline void require_hermitian(const ComplexMatrix& m, double tolerance,
                              const char* context) {
  if (m.rows() != m.cols()) {
    throw ShapeError(std::string(context) + ": matrix is not square (" +
                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                     ")");
  }
  const double dev = max_abs(m - m.adjoint());
  if (dev > tolerance) {
    throw ValidationError(std::string(context) +
                          ": matrix is not Hermitian (max deviation " +
                          std::to_string(dev) + ")");
  }
}

/// Kronecker product a (x) b. Dimensions multiply and are checked against
/// the configured cap.
inline ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  check_dimension(a.rows() * b.rows(), "tensor");
  check_dimension(a.cols() * b.cols(), "tensor");
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  out = Eigen::kroneckerProduct(a, b);
  return out;
}

inline ComplexVector tensor(const ComplexVector& a, const ComplexVector& b) {
  check_dimension(a.size() * b.size(), "tensor");
  ComplexVector out(a.size() * b.size());
  for (long i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

enum class Subsystem { first, second };

/// Partial trace of a (d_a*d_b) x (d_a*d_b) matrix over one tensor factor.
/// Tracing the first factor returns a d_b x d_b matrix and vice versa.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, Subsystem traced,
                                   long d_a, long d_b) {
  const long d = d_a * d_b;
  if (m.rows() != d || m.cols() != d) {
    throw ShapeError("partial_trace: matrix is " + std::to_string(m.rows()) +
                     "x" + std::to_string(m.cols()) + ", expected " +
                     std::to_string(d) + "x" + std::to_string(d));
  }
  if (traced == Subsystem::first) {
    ComplexMatrix out = ComplexMatrix::Zero(d_b, d_b);
    for (long i = 0; i < d_b; ++i) {
      for (long j = 0; j < d_b; ++j) {
        cxd sum = 0.0;
        for (long k = 0; k < d_a; ++k) {
          sum += m(k * d_b + i, k * d_b + j);
        }
        out(i, j) = sum;
      }
    }
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(d_a, d_a);
  for (long i = 0; i < d_a; ++i) {
    for (long j = 0; j < d_a; ++j) {
      cxd sum = 0.0;
      for (long k = 0; k < d_b; ++k) {
        sum += m(i * d_b + k, j * d_b + k);
      }
      out(i, j) = sum;
    }
  }
  return out;
}

/// Swap operator on two d-dimensional factors: S|i>|j> = |j>|i>.
/// S is a Hermitian permutation matrix with S^2 = I.
inline ComplexMatrix swap_operator(long d) {
  if (d < 1) throw ValidationError("swap_operator: dimension must be >= 1");
  check_dimension(d * d, "swap_operator");
  ComplexMatrix s = ComplexMatrix::Zero(d * d, d * d);
  for (long i = 0; i < d; ++i) {
    for (long j = 0; j < d; ++j) {
      s(j * d + i, i * d + j) = 1.0;
    }
  }
  return s;
}

}  // namespace qpca
