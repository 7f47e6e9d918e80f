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

// Phase-estimation self-tomography. A b-qubit ancilla register controls
// powers of exp(-i rho t0) applied to a target register; a Fourier transform
// on the ancilla then concentrates each eigencomponent of the target onto the
// outcome k nearest N r t0 / (2 pi), N = 2^b. Outcomes decode directly as
// r_estimate(k) = 2 pi k / (N t0). With the default t0 = pi, eigenvalues in
// [0, 1] map to phases in [0, 1/2], so no outcome is aliased.
//
// Two backends produce the controlled evolution:
//   exact        - controlled matrix exponentials from the eigendecomposition
//   swap_channel - repeated controlled partial-swap steps, each consuming one
//                  fresh copy of rho that is traced out immediately
//
// Bin k's mass is the ancilla outcome probability; the conditional target
// state given outcome k is the post-selected state of that bin.

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qpca/dmexp.hpp"
#include "qpca/rng.hpp"
#include "qpca/states.hpp"

namespace qpca {

enum class QpeBackend { exact, swap_channel };

struct QpeConfig {
  int ancilla_bits = 4;
  double base_time = kPi;  // t0
  QpeBackend backend = QpeBackend::exact;
  long swap_steps_per_unit_time = 512;  // swap_channel backend only

  long ancilla_dim() const { return 1L << ancilla_bits; }

  double bin_width() const {
    return 2.0 * kPi / (double(ancilla_dim()) * base_time);
  }

  double r_estimate_of(long k) const {
    return 2.0 * kPi * double(k) / (double(ancilla_dim()) * base_time);
  }

  /// Outcome index whose decoded eigenvalue is nearest r.
  long nearest_bin(double r) const {
    const long n = ancilla_dim();
    long k = std::llround(r * double(n) * base_time / (2.0 * kPi));
    return std::clamp(k, 0L, n - 1);
  }

  void validate() const {
    if (ancilla_bits < 1 || ancilla_bits > 12) {
      throw ValidationError("QpeConfig: ancilla_bits must lie in [1, 12]");
    }
    if (!(base_time > 0.0) || base_time > kPi + 1e-12) {
      throw ValidationError(
          "QpeConfig: base_time must lie in (0, pi] to avoid phase aliasing");
    }
    if (backend == QpeBackend::swap_channel && swap_steps_per_unit_time < 1) {
      throw ValidationError(
          "QpeConfig: swap_steps_per_unit_time must be >= 1");
    }
  }
};

struct QpeBin {
  long k = 0;
  double r_estimate = 0.0;
  double mass = 0.0;
  DensityMatrix post_selected_state;
};

struct SpectralEstimate {
  std::vector<QpeBin> bins;  // ascending k, numerically empty bins omitted
  int ancilla_bits = 0;
  double base_time = 0.0;
  long swap_steps = 0;  // partial-swap steps performed (0 for exact backend)

  double total_mass() const {
    double sum = 0.0;
    for (const auto& bin : bins) sum += bin.mass;
    return sum;
  }

  const QpeBin* find_bin(long k) const {
    for (const auto& bin : bins) {
      if (bin.k == k) return &bin;
    }
    return nullptr;
  }
};

namespace detail {

// Outcome masses below this are numerical zeros and get no bin.
inline constexpr double kBinMassFloor = 1e-12;

/// Ancilla Fourier transform F[k][j] = exp(2 pi i j k / N) / sqrt(N). The
/// sign convention pairs with the exp(-iHt) controlled powers so that outcome
/// k estimates the eigenvalue directly (this is the inverse transform under
/// the exp(-2 pi i / N)-kernel convention).
inline ComplexMatrix inverse_qft_matrix(long n) {
  ComplexMatrix f(n, n);
  const double scale = 1.0 / std::sqrt(double(n));
  for (long k = 0; k < n; ++k) {
    for (long j = 0; j < n; ++j) {
      const double angle = 2.0 * kPi * double(j) * double(k) / double(n);
      f(k, j) = scale * std::exp(cxd(0.0, angle));
    }
  }
  return f;
}

/// Reads outcome bins from the final joint (ancilla (x) target) state.
inline SpectralEstimate read_bins(const ComplexMatrix& joint, long n, long d,
                                  const QpeConfig& cfg) {
  SpectralEstimate estimate;
  estimate.ancilla_bits = cfg.ancilla_bits;
  estimate.base_time = cfg.base_time;
  double total = 0.0;
  for (long k = 0; k < n; ++k) {
    ComplexMatrix block = joint.block(k * d, k * d, d, d);
    const double mass = block.trace().real();
    total += mass;
    if (mass <= kBinMassFloor) continue;
    block /= mass;
    block = 0.5 * (block + block.adjoint().eval());  // scrub fp drift
    estimate.bins.push_back(
        {k, cfg.r_estimate_of(k), mass, DensityMatrix(std::move(block))});
  }
  if (std::abs(total - 1.0) > 1e-8) {
    throw InternalError("qpe: outcome masses sum to " + std::to_string(total));
  }
  return estimate;
}

/// Uniform-ancilla (x) input joint state on dimension n*d.
inline ComplexMatrix qpe_initial_joint(const ComplexMatrix& input, long n) {
  ComplexMatrix anc = ComplexMatrix::Constant(n, n, cxd(1.0 / double(n), 0.0));
  return tensor(anc, input);
}

/// Exact-backend phase estimation of a Hermitian generator whose eigenvalues
/// lie in [0, 1]. Controlled powers are exact matrix exponentials.
inline SpectralEstimate qpe_exact(const ComplexMatrix& generator,
                                  const DensityMatrix& input,
                                  const QpeConfig& cfg) {
  cfg.validate();
  const long d = input.dim();
  if (generator.rows() != d || generator.cols() != d) {
    throw ShapeError("qpe_exact: generator/input dimension mismatch");
  }
  const long n = cfg.ancilla_dim();
  check_dimension(n * d, "qpe_exact");

  const SpectralDecomposition eig = hermitian_eig(generator);
  if (eig.eigenvalues.minCoeff() < -tol::kPsd ||
      eig.eigenvalues.maxCoeff() > 1.0 + tol::kPsd) {
    throw ValidationError(
        "qpe_exact: generator eigenvalues must lie in [0, 1] for alias-free "
        "estimation");
  }

  ComplexMatrix joint = qpe_initial_joint(input.matrix(), n);
  // Controlled powers: ancilla basis state |j> applies exp(-i H j t0).
  for (long j = 1; j < n; ++j) {
    ComplexVector phases(d);
    for (long i = 0; i < d; ++i) {
      phases(i) = std::exp(cxd(0.0, -eig.eigenvalues(i) * double(j) *
                                         cfg.base_time));
    }
    ComplexMatrix u = ComplexMatrix::Zero(d, d);
    for (long i = 0; i < d; ++i) {
      u += phases(i) * eig.eigenvectors[size_t(i)].projector();
    }
    // Row/column block j of the joint state picks up U_j / U_j^dag.
    for (long jc = 0; jc < n; ++jc) {
      joint.block(j * d, jc * d, d, d) =
          (u * joint.block(j * d, jc * d, d, d)).eval();
      joint.block(jc * d, j * d, d, d) =
          (joint.block(jc * d, j * d, d, d) * u.adjoint()).eval();
    }
  }

  const ComplexMatrix f = tensor(inverse_qft_matrix(n), identity(d));
  joint = f * joint * f.adjoint();
  return read_bins(joint, n, d, cfg);
}

/// Controlled partial-swap unitary on (ancilla (x) target (x) copy): applies
/// exp(-i S dt) to the last two factors when ancilla bit `qubit` is set.
inline ComplexMatrix controlled_swap_unitary(long n, long d, int qubit,
                                             double dt) {
  const ComplexMatrix v = partial_swap_unitary(d, dt);
  const ComplexMatrix eye = identity(d * d);
  ComplexMatrix cv = ComplexMatrix::Zero(n * d * d, n * d * d);
  for (long j = 0; j < n; ++j) {
    const bool on = (j >> qubit) & 1;
    cv.block(j * d * d, j * d * d, d * d, d * d) = on ? v : eye;
  }
  return cv;
}

/// Number of partial-swap steps the swap_channel backend performs for the
/// controlled power on ancilla qubit `qubit` (duration 2^qubit * t0).
inline long swap_steps_for_qubit(const QpeConfig& cfg, int qubit) {
  const double duration = double(1L << qubit) * cfg.base_time;
  const double raw = std::ceil(duration * double(cfg.swap_steps_per_unit_time) -
                               1e-9);
  return raw < 1.0 ? 1 : long(raw);
}

/// Total copies the swap_channel backend consumes across all controlled
/// powers; equals (2^b - 1) * t0 * steps_per_unit_time when those products
/// are integers, with per-power ceilings otherwise.
inline long predicted_swap_steps(const QpeConfig& cfg) {
  long total = 0;
  for (int q = 0; q < cfg.ancilla_bits; ++q) {
    total += swap_steps_for_qubit(cfg, q);
  }
  return total;
}

/// One controlled channel step: adjoin a copy, conjugate by the controlled
/// partial swap, trace the copy back out.
inline ComplexMatrix controlled_swap_step(const ComplexMatrix& joint,
                                          const ComplexMatrix& copy,
                                          const ComplexMatrix& cv) {
  const long nd = joint.rows();
  const long d = copy.rows();
  const ComplexMatrix with_copy = cv * tensor(joint, copy) * cv.adjoint();
  return partial_trace(with_copy, Subsystem::second, nd, d);
}

struct SwapQpeSource {
  const DensityMatrix* rho = nullptr;
  const DensityMatrix* sigma = nullptr;  // difference evolution when set
};

/// Swap-channel phase estimation. With only rho set, ancilla qubit q controls
/// 2^q * t0 worth of plain swap-channel evolution (generator rho). With sigma
/// also set, each step alternates a rho copy at +dt/2 with a sigma copy at
/// -dt/2 and a deterministic ancilla phase supplies the identity part, so the
/// effective generator is (rho - sigma + I)/2.
inline SpectralEstimate qpe_swap(const SwapQpeSource& source,
                                 const DensityMatrix& input,
                                 const QpeConfig& cfg) {
  cfg.validate();
  const DensityMatrix& rho = *source.rho;
  const long d = input.dim();
  if (rho.dim() != d || (source.sigma && source.sigma->dim() != d)) {
    throw ShapeError("qpe_swap: dimension mismatch");
  }
  const long n = cfg.ancilla_dim();
  check_dimension(n * d * d, "qpe_swap");

  ComplexMatrix joint = qpe_initial_joint(input.matrix(), n);
  long steps_performed = 0;
  for (int q = 0; q < cfg.ancilla_bits; ++q) {
    const double duration = double(1L << q) * cfg.base_time;
    const long steps = swap_steps_for_qubit(cfg, q);
    const double dt = duration / double(steps);
    if (!source.sigma) {
      const ComplexMatrix cv = controlled_swap_unitary(n, d, q, dt);
      for (long s = 0; s < steps; ++s) {
        joint = controlled_swap_step(joint, rho.matrix(), cv);
        ++steps_performed;
      }
    } else {
      const ComplexMatrix cv_rho = controlled_swap_unitary(n, d, q, dt / 2.0);
      const ComplexMatrix cv_sigma =
          controlled_swap_unitary(n, d, q, -dt / 2.0);
      for (long s = 0; s < steps; ++s) {
        joint = controlled_swap_step(joint, rho.matrix(), cv_rho);
        joint = controlled_swap_step(joint, source.sigma->matrix(), cv_sigma);
        steps_performed += 2;
      }
      // Identity part of (rho - sigma + I)/2: phase exp(-i duration / 2) on
      // the branches with this ancilla bit set.
      const cxd phase = std::exp(cxd(0.0, -duration / 2.0));
      for (long jr = 0; jr < n; ++jr) {
        for (long jc = 0; jc < n; ++jc) {
          cxd factor(1.0, 0.0);
          if ((jr >> q) & 1) factor *= phase;
          if ((jc >> q) & 1) factor *= std::conj(phase);
          if (factor != cxd(1.0, 0.0)) {
            joint.block(jr * d, jc * d, d, d) *= factor;
          }
        }
      }
    }
  }

  const ComplexMatrix f = tensor(inverse_qft_matrix(n), identity(d));
  joint = f * joint * f.adjoint();
  SpectralEstimate estimate = read_bins(joint, n, d, cfg);
  estimate.swap_steps = steps_performed;
  return estimate;
}

}  // namespace detail

/// Simulates b-qubit phase estimation of rho applied to `input`, returning
/// the outcome bins: estimated eigenvalue, probability mass and conditional
/// target state per outcome. With input = rho this is the self-tomography
/// mixture whose bin masses are the eigenvalues themselves.
inline SpectralEstimate qpe_decompose(const DensityMatrix& rho,
                                      const DensityMatrix& input,
                                      const QpeConfig& cfg) {
  cfg.validate();
  if (rho.dim() != input.dim()) {
    throw ShapeError("qpe_decompose: rho/input dimension mismatch");
  }
  if (cfg.backend == QpeBackend::exact) {
    return detail::qpe_exact(rho.matrix(), input, cfg);
  }
  detail::SwapQpeSource source;
  source.rho = &rho;
  return detail::qpe_swap(source, input, cfg);
}

// ---------------------------------------------------------------------------
// sampling

struct SampleRecord {
  long trials = 0;
  std::map<long, long> counts;  // ancilla outcome k -> occurrences
  std::uint64_t seed = 0;
};

namespace detail {

inline long sample_bin(const SpectralEstimate& estimate, std::uint64_t seed,
                       std::uint64_t trial) {
  std::vector<double> weights;
  weights.reserve(estimate.bins.size());
  for (const auto& bin : estimate.bins) weights.push_back(bin.mass);
  Rng rng(derive_seed(seed, trial));
  return estimate.bins[rng.categorical(weights)].k;
}

}  // namespace detail

/// m independent draws from the self-tomography bin distribution of rho.
/// Per-trial seeds derive from (seed, trial index), so the counts are
/// reproducible and independent of execution order.
inline SampleRecord sample_decomposition(const DensityMatrix& rho,
                                         const QpeConfig& cfg, long m,
                                         std::uint64_t seed) {
  if (m < 1) {
    throw ValidationError("sample_decomposition: trial count must be >= 1");
  }
  const SpectralEstimate estimate = qpe_decompose(rho, rho, cfg);
  SampleRecord record;
  record.trials = m;
  record.seed = seed;
  for (long i = 0; i < m; ++i) {
    record.counts[detail::sample_bin(estimate, seed, std::uint64_t(i))]++;
  }
  return record;
}

inline SampleRecord merge_records(const SampleRecord& a,
                                  const SampleRecord& b) {
  SampleRecord merged = a;
  merged.trials += b.trials;
  for (const auto& [k, count] : b.counts) merged.counts[k] += count;
  return merged;
}

struct SpectrumPoint {
  double r_estimate = 0.0;
  double frequency = 0.0;
};

/// Empirical eigenvalue histogram from a sample record, decoded on the QPE
/// grid of cfg and sorted by descending eigenvalue estimate.
inline std::vector<SpectrumPoint> estimate_spectrum(const SampleRecord& record,
                                                    const QpeConfig& cfg) {
  cfg.validate();
  long total = 0;
  for (const auto& [k, count] : record.counts) {
    if (k < 0 || k >= cfg.ancilla_dim()) {
      throw ValidationError("estimate_spectrum: outcome " + std::to_string(k) +
                            " outside the ancilla range of the config");
    }
    total += count;
  }
  if (total != record.trials) {
    throw ValidationError("estimate_spectrum: counts do not sum to trials");
  }
  std::vector<SpectrumPoint> points;
  points.reserve(record.counts.size());
  for (const auto& [k, count] : record.counts) {
    points.push_back(
        {cfg.r_estimate_of(k), double(count) / double(record.trials)});
  }
  std::sort(points.begin(), points.end(),
            [](const SpectrumPoint& a, const SpectrumPoint& b) {
              return a.r_estimate > b.r_estimate;
            });
  return points;
}

// ---------------------------------------------------------------------------
// principal components

struct PrincipalComponent {
  long k = 0;
  double r_estimate = 0.0;
  double mass = 0.0;
  PureState eigenvector;
  DensityMatrix post_selected_state;
  bool degenerate = false;
};

struct PrincipalComponents {
  std::vector<PrincipalComponent> components;  // by descending mass
  std::vector<std::string> warnings;
};

/// Top-k outcome bins by probability mass; each component's eigenvector is
/// the dominant eigenvector of the bin's conditional state. At finite ancilla
/// resolution neighboring eigenvectors leak into a bin, so a bin whose
/// conditional state has no dominant-eigenvalue gap is flagged degenerate.
inline PrincipalComponents principal_components(const DensityMatrix& rho,
                                                const QpeConfig& cfg,
                                                long top_k) {
  if (top_k < 1 || top_k > rho.dim()) {
    throw ValidationError("principal_components: top_k must lie in [1, dim]");
  }
  const SpectralEstimate estimate = qpe_decompose(rho, rho, cfg);
  std::vector<const QpeBin*> order;
  order.reserve(estimate.bins.size());
  for (const auto& bin : estimate.bins) order.push_back(&bin);
  std::sort(order.begin(), order.end(), [](const QpeBin* a, const QpeBin* b) {
    if (a->mass != b->mass) return a->mass > b->mass;
    return a->k < b->k;
  });
  if (long(order.size()) > top_k) order.resize(size_t(top_k));

  PrincipalComponents result;
  for (const QpeBin* bin : order) {
    const SpectralDecomposition eig =
        hermitian_eig(bin->post_selected_state.matrix());
    bool degenerate = false;
    if (eig.eigenvalues.size() > 1) {
      const double gap = eig.eigenvalues(0) - eig.eigenvalues(1);
      degenerate = gap <= 1e-8 * std::max(1.0, eig.eigenvalues(0));
    }
    if (degenerate) {
      result.warnings.push_back(
          "bin k=" + std::to_string(bin->k) +
          ": conditional state is degenerate; eigenvector is not unique");
    }
    result.components.push_back({bin->k, bin->r_estimate, bin->mass,
                                 eig.eigenvectors.front(),
                                 bin->post_selected_state, degenerate});
  }
  for (size_t i = 0; i < result.components.size(); ++i) {
    for (size_t j = i + 1; j < result.components.size(); ++j) {
      if (std::abs(result.components[i].k - result.components[j].k) <= 1) {
        result.warnings.push_back(
            "bins k=" + std::to_string(result.components[i].k) + " and k=" +
            std::to_string(result.components[j].k) +
            " are within one bin width; eigenvalues may be unresolved");
      }
    }
  }
  return result;
}

/// tr(post_selected_state(bin) * M) for Hermitian M on the bin whose decoded
/// eigenvalue is nearest bin_value.
inline double observable_on_component(const DensityMatrix& rho,
                                      const QpeConfig& cfg, double bin_value,
                                      const ComplexMatrix& m_obs) {
  require_hermitian(m_obs, tol::kHermitian, "observable_on_component");
  if (m_obs.rows() != rho.dim()) {
    throw ShapeError("observable_on_component: observable dimension mismatch");
  }
  const SpectralEstimate estimate = qpe_decompose(rho, rho, cfg);
  const long k = cfg.nearest_bin(bin_value);
  const QpeBin* bin = estimate.find_bin(k);
  if (bin == nullptr) {
    throw EmptyBinError("observable_on_component: bin near r=" +
                        std::to_string(bin_value) + " (k=" + std::to_string(k) +
                        ") carries no probability mass");
  }
  const cxd value = (bin->post_selected_state.matrix() * m_obs).trace();
  if (std::abs(value.imag()) > 1e-10) {
    throw InternalError("observable_on_component: non-real expectation");
  }
  return value.real();
}

/// 1-norm of rho - P rho P with P the projector onto the top-r eigenspace;
/// equals the total discarded eigenvalue mass.
inline double low_rank_projection_error(const DensityMatrix& rho, long r) {
  if (r < 1 || r > rho.dim()) {
    throw ValidationError("low_rank_projection_error: rank must lie in [1, dim]");
  }
  const SpectralDecomposition eig = hermitian_eig(rho.matrix());
  const ComplexMatrix p = eig.eigenspace_projector(0, r);
  const ComplexMatrix truncated = p * rho.matrix() * p;
  return trace_norm_hermitian(rho.matrix() - truncated);
}

}  // namespace qpca
