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

// Density-matrix exponentiation. One copy of rho at a time interacts with the
// target through the partial-swap unitary exp(-i S dt) and is traced out;
// composing n such steps drives the target toward the conjugation
// sigma -> exp(-i rho t) sigma exp(+i rho t) with error O(t^2 / n).

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include "qpca/states.hpp"

namespace qpca {

/// Step plan for the repeated-swap channel: n steps of size dt = t/n.
/// A single step must stay in the small-angle regime |dt| < pi/2.
struct SwapSchedule {
  double total_time = 0.0;
  long steps = 1;
  double step_size = 0.0;

  static SwapSchedule from_steps(double t, long n) {
    if (n < 1) {
      throw ValidationError("SwapSchedule: step count must be >= 1");
    }
    SwapSchedule s;
    s.total_time = t;
    s.steps = n;
    s.step_size = t / double(n);
    if (std::abs(s.step_size) >= kPi / 2.0) {
      throw ValidationError("SwapSchedule: |dt| = " +
                            std::to_string(std::abs(s.step_size)) +
                            " leaves the small-angle regime (< pi/2)");
    }
    return s;
  }

  /// Chooses n = ceil(2 t^2 / epsilon), the measured-constant version of the
  /// quadratic copy-count law.
  static SwapSchedule for_accuracy(double t, double epsilon) {
    if (!(epsilon > 0.0)) {
      throw ValidationError("SwapSchedule: accuracy must be positive");
    }
    const double raw = std::ceil(2.0 * t * t / epsilon);
    const long n = raw < 1.0 ? 1 : long(raw);
    return from_steps(t, n);
  }
};

struct ErrorCurveRow {
  long steps = 0;
  double trace_distance = 0.0;
  double wall_seconds = 0.0;
};

struct ErrorCurve {
  std::vector<ErrorCurveRow> rows;
};

namespace detail {

/// exp(-i S dt) on d tensor d; exact since S^2 = I.
inline ComplexMatrix partial_swap_unitary(long d, double dt) {
  return std::cos(dt) * identity(d * d) +
         cxd(0.0, -std::sin(dt)) * swap_operator(d);
}

/// One channel step on raw matrices: trace out the fresh copy after
/// conjugating copy (x) target by a precomputed partial-swap unitary.
inline ComplexMatrix swap_step_raw(const ComplexMatrix& swap_unitary,
                                   const ComplexMatrix& copy,
                                   const ComplexMatrix& target) {
  const long d = target.rows();
  const ComplexMatrix joint = swap_unitary * tensor(copy, target) *
                              swap_unitary.adjoint();
  return partial_trace(joint, Subsystem::first, d, d);
}

}  // namespace detail

/// Which source state a swap step consumes a copy of.
enum class CopySource { rho, sigma };

struct SwapStep {
  CopySource source = CopySource::rho;
  double dt = 0.0;

  bool operator==(const SwapStep&) const = default;
};

/// Step sequence realizing evolve_swap_channel: n copies of rho at +dt.
inline std::vector<SwapStep> swap_channel_plan(const SwapSchedule& schedule) {
  std::vector<SwapStep> plan;
  plan.reserve(size_t(schedule.steps));
  for (long i = 0; i < schedule.steps; ++i) {
    plan.push_back({CopySource::rho, schedule.step_size});
  }
  return plan;
}

/// Step sequence realizing evolve_difference: per schedule step, one rho copy
/// at +dt then one sigma copy at -sigma_scale*dt. Zero-size steps are exact
/// no-ops and are omitted, so sigma_scale = 0 degenerates to
/// swap_channel_plan.
inline std::vector<SwapStep> difference_plan(const SwapSchedule& schedule,
                                             double sigma_scale = 1.0) {
  std::vector<SwapStep> plan;
  plan.reserve(size_t(2 * schedule.steps));
  for (long i = 0; i < schedule.steps; ++i) {
    if (schedule.step_size != 0.0) {
      plan.push_back({CopySource::rho, schedule.step_size});
    }
    if (sigma_scale * schedule.step_size != 0.0) {
      plan.push_back({CopySource::sigma, -sigma_scale * schedule.step_size});
    }
  }
  return plan;
}

/// Executes a swap-step plan on the target, consuming one copy of the named
/// source per step. Partial-swap unitaries are cached per step size.
inline DensityMatrix run_swap_plan(const std::vector<SwapStep>& plan,
                                   const DensityMatrix& rho,
                                   const DensityMatrix& sigma,
                                   const DensityMatrix& target) {
  if (rho.dim() != sigma.dim() || rho.dim() != target.dim()) {
    throw ShapeError("run_swap_plan: dimension mismatch");
  }
  const long d = target.dim();
  check_dimension(d * d, "run_swap_plan");
  std::map<double, ComplexMatrix> unitaries;
  ComplexMatrix state = target.matrix();
  for (const SwapStep& step : plan) {
    if (std::abs(step.dt) >= kPi / 2.0) {
      throw ValidationError("run_swap_plan: step size leaves small-angle regime");
    }
    auto it = unitaries.find(step.dt);
    if (it == unitaries.end()) {
      it = unitaries.emplace(step.dt, detail::partial_swap_unitary(d, step.dt))
               .first;
    }
    const ComplexMatrix& copy =
        step.source == CopySource::rho ? rho.matrix() : sigma.matrix();
    state = detail::swap_step_raw(it->second, copy, state);
  }
  return DensityMatrix(std::move(state));
}

/// One partial-swap step: trace over the copy register of
/// exp(-iS dt) (rho (x) sigma) exp(+iS dt), computed by explicit conjugation
/// and partial trace. Equals cos^2(dt) sigma + sin^2(dt) rho
/// - i cos(dt) sin(dt) [rho, sigma].
inline DensityMatrix partial_swap_step(const DensityMatrix& rho,
                                       const DensityMatrix& sigma, double dt) {
  if (rho.dim() != sigma.dim()) {
    throw ShapeError("partial_swap_step: dimension mismatch " +
                     std::to_string(rho.dim()) + " vs " +
                     std::to_string(sigma.dim()));
  }
  if (std::abs(dt) >= kPi / 2.0) {
    throw ValidationError("partial_swap_step: |dt| must be < pi/2");
  }
  const long d = rho.dim();
  check_dimension(d * d, "partial_swap_step");
  const ComplexMatrix unitary = detail::partial_swap_unitary(d, dt);
  return DensityMatrix(
      detail::swap_step_raw(unitary, rho.matrix(), sigma.matrix()));
}

/// n-fold composition of partial_swap_step, consuming a fresh copy of rho at
/// each step and discarding it.
inline DensityMatrix evolve_swap_channel(const DensityMatrix& rho,
                                         const DensityMatrix& sigma,
                                         const SwapSchedule& schedule) {
  return run_swap_plan(swap_channel_plan(schedule), rho, rho, sigma);
}

/// Exact reference: U sigma U^dag with U = exp(-i rho t).
inline DensityMatrix exact_conjugation(const DensityMatrix& rho,
                                       const DensityMatrix& sigma, double t) {
  if (rho.dim() != sigma.dim()) {
    throw ShapeError("exact_conjugation: dimension mismatch");
  }
  const ComplexMatrix u = matrix_exponential(rho.matrix(), t);
  return DensityMatrix(ComplexMatrix(u * sigma.matrix() * u.adjoint()));
}

/// Convergence study: trace distance between the n-step channel and the exact
/// conjugation, for each requested step count.
inline ErrorCurve measure_error_scaling(const DensityMatrix& rho,
                                        const DensityMatrix& sigma, double t,
                                        const std::vector<long>& step_counts) {
  if (step_counts.empty()) {
    throw ValidationError("measure_error_scaling: empty step-count list");
  }
  for (size_t i = 1; i < step_counts.size(); ++i) {
    if (step_counts[i] <= step_counts[i - 1]) {
      throw ValidationError(
          "measure_error_scaling: step counts must be strictly increasing");
    }
  }
  const DensityMatrix exact = exact_conjugation(rho, sigma, t);
  ErrorCurve curve;
  curve.rows.reserve(step_counts.size());
  for (long n : step_counts) {
    const auto start = std::chrono::steady_clock::now();
    const DensityMatrix approx =
        evolve_swap_channel(rho, sigma, SwapSchedule::from_steps(t, n));
    const double dist = trace_distance(approx, exact);
    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - start;
    curve.rows.push_back({n, dist, elapsed.count()});
  }
  return curve;
}

/// Approximates conjugation by exp(-i (rho - sigma) t): each schedule step is
/// one rho copy at +dt followed by one sigma copy at -dt (first-order
/// alternation, O(dt^2) error per step).
inline DensityMatrix evolve_difference(const DensityMatrix& rho,
                                       const DensityMatrix& sigma,
                                       const DensityMatrix& target,
                                       const SwapSchedule& schedule) {
  return run_swap_plan(difference_plan(schedule), rho, sigma, target);
}

/// Exact backend for spectral functions of a state: eigendecomposes rho, forms
/// H = sum_i g(r_i) |chi_i><chi_i| and returns exp(-iHt) target exp(+iHt).
inline DensityMatrix apply_spectral_function(
    const DensityMatrix& rho, const std::function<double(double)>& g, double t,
    const DensityMatrix& target) {
  if (rho.dim() != target.dim()) {
    throw ShapeError("apply_spectral_function: dimension mismatch");
  }
  const SpectralDecomposition eig = hermitian_eig(rho.matrix());
  ComplexMatrix h = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (long i = 0; i < rho.dim(); ++i) {
    const double value = g(eig.eigenvalues(i));
    if (!std::isfinite(value)) {
      throw DomainError("apply_spectral_function: g produced a non-finite "
                        "value at eigenvalue " +
                        std::to_string(eig.eigenvalues(i)));
    }
    h += value * eig.eigenvectors[size_t(i)].projector();
  }
  const ComplexMatrix u = matrix_exponential(h, t);
  return DensityMatrix(ComplexMatrix(u * target.matrix() * u.adjoint()));
}

}  // namespace qpca
