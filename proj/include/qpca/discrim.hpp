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

// Two-set state discrimination. Each set of sample states defines a uniform
// mixture; a new state is expanded in the eigenbasis of rho - sigma, one
// eigenvalue x_j is sampled with probability |<xi_j|chi>|^2, and the sign of
// x_j picks the set. |x_j| is the confidence; a (numerically) zero eigenvalue
// abstains, since the sign rule is undefined there.

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qpca/phase_estimation.hpp"
#include "qpca/rng.hpp"
#include "qpca/states.hpp"

namespace qpca {

// Eigenvalues closer to zero than this count as zero for the sign rule.
inline constexpr double kSignZeroTolerance = 1e-12;

struct ClusterPair {
  DensityMatrix rho;    // uniform mixture of the first set
  DensityMatrix sigma;  // uniform mixture of the second set
  SpectralDecomposition difference_spectrum;  // of rho - sigma
};

inline ClusterPair build_clusters(const std::vector<PureState>& set_a,
                                  const std::vector<PureState>& set_b) {
  if (set_a.empty() || set_b.empty()) {
    throw ValidationError("build_clusters: both sets must be nonempty");
  }
  if (set_a.front().dim() != set_b.front().dim()) {
    throw ShapeError("build_clusters: set dimensions differ");
  }
  DensityMatrix rho = DensityMatrix::uniform_mixture(set_a);
  DensityMatrix sigma = DensityMatrix::uniform_mixture(set_b);
  SpectralDecomposition spectrum =
      hermitian_eig(rho.matrix() - sigma.matrix());
  if (std::abs(spectrum.eigenvalues.sum()) > 1e-9 ||
      spectrum.eigenvalues.maxCoeff() > 1.0 + 1e-9 ||
      spectrum.eigenvalues.minCoeff() < -1.0 - 1e-9) {
    throw InternalError("build_clusters: difference spectrum out of range");
  }
  return ClusterPair{std::move(rho), std::move(sigma), std::move(spectrum)};
}

enum class SetLabel { first, second, abstain };

inline const char* to_string(SetLabel label) {
  switch (label) {
    case SetLabel::first: return "first";
    case SetLabel::second: return "second";
    default: return "abstain";
  }
}

struct Assignment {
  SetLabel label = SetLabel::abstain;
  double eigenvalue = 0.0;
  double confidence = 0.0;  // |eigenvalue|
  std::vector<std::pair<double, double>> outcome_distribution;  // (x, prob)
};

namespace detail {

inline SetLabel label_of(double eigenvalue) {
  if (std::abs(eigenvalue) <= kSignZeroTolerance) return SetLabel::abstain;
  return eigenvalue > 0.0 ? SetLabel::first : SetLabel::second;
}

inline Assignment assignment_from_distribution(
    std::vector<std::pair<double, double>> distribution, std::uint64_t seed) {
  std::vector<double> weights;
  weights.reserve(distribution.size());
  for (const auto& [x, p] : distribution) weights.push_back(p);
  Rng rng(seed);
  const double x = distribution[rng.categorical(weights)].first;
  Assignment out;
  out.label = label_of(x);
  out.eigenvalue = out.label == SetLabel::abstain ? 0.0 : x;
  out.confidence = std::abs(out.eigenvalue);
  out.outcome_distribution = std::move(distribution);
  return out;
}

}  // namespace detail

/// Exact-spectrum assignment: sample an eigenvalue of rho - sigma with
/// probability given by chi's overlap with its eigenvector. Deterministic
/// given the seed.
inline Assignment assign(const PureState& chi, const ClusterPair& clusters,
                         std::uint64_t seed) {
  if (chi.dim() != clusters.rho.dim()) {
    throw ShapeError("assign: state dimension does not match clusters");
  }
  const SpectralDecomposition& spectrum = clusters.difference_spectrum;
  std::vector<std::pair<double, double>> distribution;
  distribution.reserve(size_t(chi.dim()));
  for (long j = 0; j < chi.dim(); ++j) {
    const cxd overlap =
        spectrum.eigenvectors[size_t(j)].amplitudes().adjoint() *
        chi.amplitudes();
    distribution.emplace_back(spectrum.eigenvalues(j), std::norm(overlap));
  }
  return detail::assignment_from_distribution(std::move(distribution), seed);
}

/// Phase-estimation assignment. Eigenvalues of rho - sigma fill [-1, 1], so
/// estimation runs on the shifted generator H' = (rho - sigma + I)/2 whose
/// spectrum lies in [0, 1]; outcomes decode affinely as x = 2 r' - 1. The
/// swap_channel backend realizes the controlled evolution as alternating
/// partial-swap steps with rho and sigma copies.
inline Assignment assign_via_qpe(const PureState& chi,
                                 const ClusterPair& clusters,
                                 const QpeConfig& cfg, std::uint64_t seed) {
  if (chi.dim() != clusters.rho.dim()) {
    throw ShapeError("assign_via_qpe: state dimension does not match clusters");
  }
  cfg.validate();
  const DensityMatrix input = DensityMatrix::pure(chi);
  SpectralEstimate estimate;
  if (cfg.backend == QpeBackend::exact) {
    const ComplexMatrix shifted =
        0.5 * (clusters.rho.matrix() - clusters.sigma.matrix() +
               identity(chi.dim()));
    estimate = detail::qpe_exact(shifted, input, cfg);
  } else {
    detail::SwapQpeSource source;
    source.rho = &clusters.rho;
    source.sigma = &clusters.sigma;
    estimate = detail::qpe_swap(source, input, cfg);
  }
  std::vector<std::pair<double, double>> distribution;
  distribution.reserve(estimate.bins.size());
  for (const auto& bin : estimate.bins) {
    distribution.emplace_back(2.0 * bin.r_estimate - 1.0, bin.mass);
  }
  return detail::assignment_from_distribution(std::move(distribution), seed);
}

/// Minimum achievable error probability for equiprobable discrimination of
/// the two cluster mixtures: (1/2)(1 - (1/2)||rho - sigma||_1).
inline double helstrom_error_bound(const ClusterPair& clusters) {
  const double td = trace_distance(clusters.rho, clusters.sigma);
  return 0.5 * (1.0 - td);
}

}  // namespace qpca
