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

// Process self-tomography support: completely positive trace-preserving maps
// as Kraus lists, and their Choi states
//   C = (1/d) sum_ij |i><j| (x) S(|i><j|),
// i.e. half of a maximally entangled pair sent through the channel (the
// channel acts on the second register).

#include <string>
#include <utility>
#include <vector>

#include "qpca/io.hpp"
#include "qpca/phase_estimation.hpp"
#include "qpca/states.hpp"

namespace qpca {

class QuantumChannel {
 public:
  explicit QuantumChannel(std::vector<ComplexMatrix> kraus_ops)
      : kraus_(std::move(kraus_ops)) {
    if (kraus_.empty()) {
      throw ValidationError("QuantumChannel: empty Kraus list");
    }
    dim_ = kraus_.front().rows();
    if (dim_ < 1) {
      throw ValidationError("QuantumChannel: empty Kraus operator");
    }
    ComplexMatrix completeness = ComplexMatrix::Zero(dim_, dim_);
    for (const auto& k : kraus_) {
      if (k.rows() != dim_ || k.cols() != dim_) {
        throw ShapeError("QuantumChannel: Kraus operators must all be d x d");
      }
      if (!all_finite(k)) {
        throw ValidationError("QuantumChannel: non-finite Kraus entry");
      }
      completeness += k.adjoint() * k;
    }
    const double dev = max_abs(ComplexMatrix(completeness - identity(dim_)));
    if (dev > 1e-9) {
      throw ValidationError(
          "QuantumChannel: completeness sum_k K^dag K deviates from I by " +
          std::to_string(dev));
    }
  }

  long dim() const { return dim_; }
  const std::vector<ComplexMatrix>& kraus() const { return kraus_; }

  /// sum_k K X K^dag (X need not be a state).
  ComplexMatrix apply(const ComplexMatrix& x) const {
    if (x.rows() != dim_ || x.cols() != dim_) {
      throw ShapeError("QuantumChannel::apply: dimension mismatch");
    }
    ComplexMatrix out = ComplexMatrix::Zero(dim_, dim_);
    for (const auto& k : kraus_) {
      out += k * x * k.adjoint();
    }
    return out;
  }

 private:
  std::vector<ComplexMatrix> kraus_;
  long dim_ = 0;
};

/// Choi state of a channel, built by applying the channel to each matrix unit
/// |i><j| and assembling the d^2 x d^2 block matrix.
inline DensityMatrix choi_state(const QuantumChannel& channel) {
  const long d = channel.dim();
  check_dimension(d * d, "choi_state");
  ComplexMatrix choi = ComplexMatrix::Zero(d * d, d * d);
  ComplexMatrix unit = ComplexMatrix::Zero(d, d);
  for (long i = 0; i < d; ++i) {
    for (long j = 0; j < d; ++j) {
      unit(i, j) = 1.0;
      choi.block(i * d, j * d, d, d) = channel.apply(unit) / double(d);
      unit(i, j) = 0.0;
    }
  }
  return DensityMatrix(std::move(choi));
}

/// Principal components of the Choi state: the channel's dominant
/// eigen-operators in vectorized form.
inline PrincipalComponents channel_principal_components(
    const QuantumChannel& channel, const QpeConfig& cfg, long top_k) {
  return principal_components(choi_state(channel), cfg, top_k);
}

// ---------------------------------------------------------------------------
// conversions

/// Extracts a Kraus list from a Choi state via its eigendecomposition.
/// Requires the trace-preserving marginal tr_2 C = I/d.
inline QuantumChannel channel_from_choi(const DensityMatrix& choi, long d) {
  if (choi.dim() != d * d) {
    throw ShapeError("channel_from_choi: Choi dimension must be d^2");
  }
  const ComplexMatrix marginal =
      partial_trace(choi.matrix(), Subsystem::second, d, d);
  if (max_abs(ComplexMatrix(marginal - identity(d) / double(d))) > 1e-9) {
    throw ValidationError(
        "channel_from_choi: state is not the Choi state of a trace-preserving "
        "map");
  }
  const SpectralDecomposition eig = hermitian_eig(choi.matrix());
  std::vector<ComplexMatrix> kraus;
  for (long n = 0; n < eig.eigenvalues.size(); ++n) {
    const double lambda = eig.eigenvalues(n);
    if (lambda <= 1e-12) continue;
    const ComplexVector& v = eig.eigenvectors[size_t(n)].amplitudes();
    ComplexMatrix k(d, d);
    const double scale = std::sqrt(lambda * double(d));
    for (long i = 0; i < d; ++i) {
      for (long m = 0; m < d; ++m) {
        k(m, i) = scale * v(i * d + m);
      }
    }
    kraus.push_back(std::move(k));
  }
  return QuantumChannel(std::move(kraus));
}

/// d^2 x d^2 superoperator matrix acting on row-major vec(X).
inline ComplexMatrix superoperator_matrix(const QuantumChannel& channel) {
  const long d = channel.dim();
  ComplexMatrix superop = ComplexMatrix::Zero(d * d, d * d);
  ComplexMatrix unit = ComplexMatrix::Zero(d, d);
  for (long k = 0; k < d; ++k) {
    for (long l = 0; l < d; ++l) {
      unit(k, l) = 1.0;
      const ComplexMatrix image = channel.apply(unit);
      unit(k, l) = 0.0;
      for (long i = 0; i < d; ++i) {
        for (long j = 0; j < d; ++j) {
          superop(i * d + j, k * d + l) = image(i, j);
        }
      }
    }
  }
  return superop;
}

/// Kraus extraction for a superoperator given as a matrix on row-major
/// vec(X), routed through the Choi eigendecomposition.
inline QuantumChannel channel_from_superoperator(const ComplexMatrix& superop,
                                                 long d) {
  if (superop.rows() != d * d || superop.cols() != d * d) {
    throw ShapeError("channel_from_superoperator: matrix must be d^2 x d^2");
  }
  ComplexMatrix choi = ComplexMatrix::Zero(d * d, d * d);
  for (long k = 0; k < d; ++k) {
    for (long l = 0; l < d; ++l) {
      const ComplexVector column = superop.col(k * d + l);
      for (long i = 0; i < d; ++i) {
        for (long j = 0; j < d; ++j) {
          choi(k * d + i, l * d + j) = column(i * d + j) / double(d);
        }
      }
    }
  }
  return channel_from_choi(DensityMatrix(std::move(choi)), d);
}

// ---------------------------------------------------------------------------
// stock channels

inline QuantumChannel identity_channel(long d) {
  return QuantumChannel({identity(d)});
}

/// Fully depolarizing map X -> tr(X) I/d, matrix-unit Kraus form.
inline QuantumChannel completely_depolarizing_channel(long d) {
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(size_t(d * d));
  const double scale = 1.0 / std::sqrt(double(d));
  for (long i = 0; i < d; ++i) {
    for (long j = 0; j < d; ++j) {
      ComplexMatrix k = ComplexMatrix::Zero(d, d);
      k(i, j) = scale;
      kraus.push_back(std::move(k));
    }
  }
  return QuantumChannel(std::move(kraus));
}

/// Qubit depolarizing channel in the Pauli Kraus form {I, X, Y, Z}/2.
inline QuantumChannel pauli_depolarizing_channel() {
  ComplexMatrix x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << 0, cxd(0, -1), cxd(0, 1), 0;
  z << 1, 0, 0, -1;
  return QuantumChannel({ComplexMatrix(identity(2) / 2.0),
                         ComplexMatrix(x / 2.0), ComplexMatrix(y / 2.0),
                         ComplexMatrix(z / 2.0)});
}

inline QuantumChannel amplitude_damping_channel(double gamma) {
  if (gamma < 0.0 || gamma > 1.0) {
    throw ValidationError("amplitude_damping_channel: gamma must be in [0, 1]");
  }
  ComplexMatrix k0(2, 2), k1(2, 2);
  k0 << 1, 0, 0, std::sqrt(1.0 - gamma);
  k1 << 0, std::sqrt(gamma), 0, 0;
  return QuantumChannel({k0, k1});
}

inline QuantumChannel dephasing_channel(double p) {
  if (p < 0.0 || p > 1.0) {
    throw ValidationError("dephasing_channel: p must be in [0, 1]");
  }
  ComplexMatrix z(2, 2);
  z << 1, 0, 0, -1;
  return QuantumChannel({ComplexMatrix(std::sqrt(1.0 - p) * identity(2)),
                         ComplexMatrix(std::sqrt(p) * z)});
}

/// Convex mixture: applies a with probability w, b with probability 1-w.
inline QuantumChannel mix_channels(const QuantumChannel& a,
                                   const QuantumChannel& b, double w) {
  if (a.dim() != b.dim()) {
    throw ShapeError("mix_channels: dimension mismatch");
  }
  if (w < 0.0 || w > 1.0) {
    throw ValidationError("mix_channels: weight must be in [0, 1]");
  }
  std::vector<ComplexMatrix> kraus;
  for (const auto& k : a.kraus()) kraus.push_back(std::sqrt(w) * k);
  for (const auto& k : b.kraus()) kraus.push_back(std::sqrt(1.0 - w) * k);
  return QuantumChannel(std::move(kraus));
}

// ---------------------------------------------------------------------------
// file I/O: {"dim": d, "kraus": [matrix, ...]} with repo-wide matrix format

inline json channel_to_json(const QuantumChannel& channel) {
  json kraus = json::array();
  for (const auto& k : channel.kraus()) kraus.push_back(matrix_to_json(k));
  return json{{"dim", channel.dim()}, {"kraus", std::move(kraus)}};
}

inline QuantumChannel json_to_channel(const json& j, const std::string& what) {
  const long d = detail::json_dim(j, what);
  if (!j.contains("kraus") || !j["kraus"].is_array() || j["kraus"].empty()) {
    throw FormatError(what + ": expected a nonempty kraus array");
  }
  std::vector<ComplexMatrix> kraus;
  for (const auto& kj : j["kraus"]) {
    ComplexMatrix k = json_to_matrix(kj, what);
    if (k.rows() != d) {
      throw FormatError(what + ": Kraus operator dimension mismatch");
    }
    kraus.push_back(std::move(k));
  }
  return QuantumChannel(std::move(kraus));
}

inline QuantumChannel load_channel(const std::filesystem::path& path) {
  return json_to_channel(parse_json(read_file(path), path.string()),
                         path.string());
}

inline void save_channel(const std::filesystem::path& path,
                         const QuantumChannel& channel) {
  write_file(path, channel_to_json(channel).dump(2) + "\n");
}

}  // namespace qpca
