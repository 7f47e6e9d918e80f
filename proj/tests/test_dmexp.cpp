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

#include <catch2/catch.hpp>
#include <cmath>

#include "helpers.hpp"
#include "qpca/dmexp.hpp"

using namespace qpca;
using namespace qpca::testing;

namespace {

// Closed form of one channel step, derived from exp(-iS dt) = cos I - i sin S:
// cos^2(dt) sigma + sin^2(dt) rho - i cos(dt) sin(dt) [rho, sigma].
ComplexMatrix step_closed_form(const ComplexMatrix& copy,
                               const ComplexMatrix& target, double dt) {
  const double c = std::cos(dt), s = std::sin(dt);
  const ComplexMatrix commutator = copy * target - target * copy;
  return c * c * target + s * s * copy + cxd(0.0, -c * s) * commutator;
}

}  // namespace

TEST_CASE("swap schedule validation", "[dmexp]") {
  CHECK_THROWS_AS(SwapSchedule::from_steps(1.0, 0), ValidationError);
  CHECK_THROWS_AS(SwapSchedule::from_steps(2.0, 1), ValidationError);  // dt >= pi/2
  CHECK_THROWS_AS(SwapSchedule::for_accuracy(1.0, 0.0), ValidationError);

  const SwapSchedule s = SwapSchedule::from_steps(1.0, 8);
  CHECK(s.step_size * double(s.steps) == Approx(1.0).margin(1e-12));

  // n = ceil(2 t^2 / eps)
  CHECK(SwapSchedule::for_accuracy(1.0, 0.01).steps == 200);
  CHECK(SwapSchedule::for_accuracy(0.5, 0.01).steps == 50);
}

TEST_CASE("partial swap step fixes rho = sigma", "[dmexp]") {
  Rng rng(50);
  const DensityMatrix rho = random_density(rng, 2);
  CHECK(trace_distance(partial_swap_step(rho, rho, 0.4), rho) <= 1e-12);
}

TEST_CASE("partial swap step in the commuting case", "[dmexp]") {
  const DensityMatrix rho = DensityMatrix::maximally_mixed(2);
  const DensityMatrix sigma = DensityMatrix::pure(PureState::basis(2, 0));
  const double dt = 0.3;
  const DensityMatrix out = partial_swap_step(rho, sigma, dt);
  const ComplexMatrix expected = std::cos(dt) * std::cos(dt) * sigma.matrix() +
                                 std::sin(dt) * std::sin(dt) * rho.matrix();
  CHECK(max_abs(ComplexMatrix(out.matrix() - expected)) <= 1e-12);
}

TEST_CASE("partial swap step matches the closed-form oracle", "[dmexp]") {
  Rng rng(51);
  const DensityMatrix rho = random_density(rng, 2);
  const DensityMatrix sigma = random_density(rng, 2);
  const DensityMatrix out = partial_swap_step(rho, sigma, 0.05);
  CHECK(max_abs(ComplexMatrix(
            out.matrix() - step_closed_form(rho.matrix(), sigma.matrix(),
                                            0.05))) <= 1e-10);
}

TEST_CASE("partial swap step validates inputs", "[dmexp]") {
  Rng rng(52);
  const DensityMatrix rho2 = random_density(rng, 2);
  const DensityMatrix rho3 = random_density(rng, 3);
  CHECK_THROWS_AS(partial_swap_step(rho2, rho3, 0.1), ShapeError);
  CHECK_THROWS_AS(partial_swap_step(rho2, rho2, 1.6), ValidationError);
}

TEST_CASE("first-order remainder scales as dt^2", "[dmexp]") {
  Rng rng(53);
  const DensityMatrix rho = random_density(rng, 2);
  const DensityMatrix sigma = random_density(rng, 2);
  const ComplexMatrix commutator =
      rho.matrix() * sigma.matrix() - sigma.matrix() * rho.matrix();
  auto remainder = [&](double dt) {
    const ComplexMatrix first_order =
        sigma.matrix() - cxd(0.0, dt) * commutator;
    return max_abs(
        ComplexMatrix(partial_swap_step(rho, sigma, dt).matrix() - first_order));
  };
  double previous = remainder(0.2);
  for (double dt : {0.1, 0.05}) {
    const double current = remainder(dt);
    const double ratio = previous / current;
    CHECK(ratio >= 3.4);
    CHECK(ratio <= 4.6);
    previous = current;
  }
}

TEST_CASE("evolve with one step equals a single partial swap", "[dmexp]") {
  Rng rng(54);
  const DensityMatrix rho = random_density(rng, 2);
  const DensityMatrix sigma = random_density(rng, 2);
  const DensityMatrix via_channel =
      evolve_swap_channel(rho, sigma, SwapSchedule::from_steps(0.2, 1));
  const DensityMatrix via_step = partial_swap_step(rho, sigma, 0.2);
  CHECK(max_abs(ComplexMatrix(via_channel.matrix() - via_step.matrix())) <=
        1e-14);
}

TEST_CASE("evolve fixes rho = sigma for any schedule", "[dmexp]") {
  Rng rng(55);
  const DensityMatrix rho = random_density(rng, 2);
  CHECK(trace_distance(
            evolve_swap_channel(rho, rho, SwapSchedule::from_steps(1.0, 64)),
            rho) <= 1e-10);
}

TEST_CASE("evolve approaches the exact conjugation", "[dmexp]") {
  Rng rng(56);
  const DensityMatrix rho = random_density(rng, 2);
  const DensityMatrix sigma = random_density(rng, 2);
  const DensityMatrix approx =
      evolve_swap_channel(rho, sigma, SwapSchedule::from_steps(1.0, 256));
  const DensityMatrix exact = exact_conjugation(rho, sigma, 1.0);
  CHECK(trace_distance(approx, exact) <= 0.01);
  CHECK(std::abs(approx.matrix().trace() - cxd(1.0)) <= 1e-10);
}

TEST_CASE("channel output is a valid density matrix", "[dmexp]") {
  Rng rng(57);
  for (int trial = 0; trial < 3; ++trial) {
    const DensityMatrix rho = random_density(rng, 3);
    const DensityMatrix sigma = random_density(rng, 3);
    // DensityMatrix construction revalidates Hermiticity/trace/PSD.
    const DensityMatrix out =
        evolve_swap_channel(rho, sigma, SwapSchedule::from_steps(0.7, 32));
    CHECK(out.dim() == 3);
  }
}

TEST_CASE("exact conjugation special cases", "[dmexp]") {
  Rng rng(58);
  const DensityMatrix rho = random_density(rng, 2);
  const DensityMatrix sigma = random_density(rng, 2);
  CHECK(trace_distance(exact_conjugation(rho, sigma, 0.0), sigma) <= 1e-12);
  CHECK(trace_distance(
            exact_conjugation(DensityMatrix::maximally_mixed(2), sigma, 1.3),
            sigma) <= 1e-12);

  // rho = diag(1, 0), sigma = |+><+|, t = pi: phase flip onto |-><-|.
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 0) = 1.0;
  ComplexVector plus(2);
  plus << cxd(1.0, 0.0), cxd(1.0, 0.0);
  const DensityMatrix plus_state = DensityMatrix::pure(
      PureState::normalized(plus));
  ComplexVector minus(2);
  minus << cxd(1.0, 0.0), cxd(-1.0, 0.0);
  const DensityMatrix minus_state =
      DensityMatrix::pure(PureState::normalized(minus));
  CHECK(trace_distance(exact_conjugation(DensityMatrix(h), plus_state, kPi),
                       minus_state) <= 1e-12);
}

TEST_CASE("error scaling degenerate cases", "[dmexp]") {
  Rng rng(59);
  const DensityMatrix rho = random_density(rng, 2);
  const DensityMatrix sigma = random_density(rng, 2);

  const ErrorCurve same = measure_error_scaling(rho, rho, 1.0, {4, 8});
  for (const auto& row : same.rows) CHECK(row.trace_distance <= 1e-10);

  const ErrorCurve zero_t = measure_error_scaling(rho, sigma, 0.0, {4, 8});
  for (const auto& row : zero_t.rows) CHECK(row.trace_distance <= 1e-10);

  CHECK_THROWS_AS(measure_error_scaling(rho, sigma, 1.0, {}), ValidationError);
  CHECK_THROWS_AS(measure_error_scaling(rho, sigma, 1.0, {8, 8}),
                  ValidationError);
}

TEST_CASE("error halves per step-count doubling at fixed t", "[dmexp]") {
  Rng rng(60);
  const DensityMatrix rho = random_density(rng, 2);
  const DensityMatrix sigma = random_density(rng, 2);
  const ErrorCurve curve =
      measure_error_scaling(rho, sigma, 1.0, {32, 64, 128, 256});
  REQUIRE(curve.rows.size() == 4);
  for (size_t i = 1; i < curve.rows.size(); ++i) {
    CHECK(curve.rows[i].steps == 2 * curve.rows[i - 1].steps);
    const double ratio =
        curve.rows[i - 1].trace_distance / curve.rows[i].trace_distance;
    CHECK(ratio >= 1.6);
    CHECK(ratio <= 2.4);
  }
}

TEST_CASE("error grows quadratically in t at fixed step count", "[dmexp]") {
  Rng rng(61);
  const DensityMatrix rho = random_density(rng, 2);
  const DensityMatrix sigma = random_density(rng, 2);
  std::vector<double> errors;
  for (double t : {0.25, 0.5, 1.0}) {
    errors.push_back(trace_distance(
        evolve_swap_channel(rho, sigma, SwapSchedule::from_steps(t, 128)),
        exact_conjugation(rho, sigma, t)));
  }
  for (size_t i = 1; i < errors.size(); ++i) {
    const double slope = std::log2(errors[i] / errors[i - 1]);
    CHECK(slope >= 1.8);
    CHECK(slope <= 2.2);
  }
}

TEST_CASE("difference evolution of identical states is the identity",
          "[dmexp]") {
  Rng rng(62);
  const DensityMatrix rho = random_density(rng, 2);
  const DensityMatrix target = random_density(rng, 2);
  const DensityMatrix out =
      evolve_difference(rho, rho, target, SwapSchedule::from_steps(1.0, 256));
  CHECK(trace_distance(out, target) <= 0.01);
}

TEST_CASE("difference evolution matches the stepwise closed forms", "[dmexp]") {
  Rng rng(63);
  const DensityMatrix rho = random_density(rng, 2);
  const DensityMatrix sigma = DensityMatrix::maximally_mixed(2);
  const DensityMatrix target = random_density(rng, 2);
  const SwapSchedule schedule = SwapSchedule::from_steps(0.8, 16);

  ComplexMatrix oracle = target.matrix();
  for (long i = 0; i < schedule.steps; ++i) {
    oracle = step_closed_form(rho.matrix(), oracle, schedule.step_size);
    oracle = step_closed_form(sigma.matrix(), oracle, -schedule.step_size);
  }
  const DensityMatrix out = evolve_difference(rho, sigma, target, schedule);
  CHECK(max_abs(ComplexMatrix(out.matrix() - oracle)) <= 1e-10);
}

TEST_CASE("difference evolution approaches conjugation by rho - sigma",
          "[dmexp]") {
  Rng rng(64);
  const DensityMatrix rho = random_density(rng, 2);
  const DensityMatrix sigma = random_density(rng, 2);
  const DensityMatrix target = random_density(rng, 2);
  const ComplexMatrix u =
      matrix_exponential(ComplexMatrix(rho.matrix() - sigma.matrix()), 1.0);
  const DensityMatrix exact(
      ComplexMatrix(u * target.matrix() * u.adjoint()));
  const DensityMatrix out =
      evolve_difference(rho, sigma, target, SwapSchedule::from_steps(1.0, 256));
  CHECK(trace_distance(out, exact) <= 0.02);
}

TEST_CASE("zero-weighted sigma degenerates to the plain swap channel",
          "[dmexp]") {
  Rng rng(65);
  const DensityMatrix rho = random_density(rng, 2);
  const DensityMatrix sigma = random_density(rng, 2);
  const DensityMatrix target = random_density(rng, 2);
  const SwapSchedule schedule = SwapSchedule::from_steps(0.5, 32);

  CHECK(difference_plan(schedule, 0.0) == swap_channel_plan(schedule));

  const DensityMatrix via_difference =
      run_swap_plan(difference_plan(schedule, 0.0), rho, sigma, target);
  const DensityMatrix via_channel = evolve_swap_channel(rho, target, schedule);
  CHECK(max_abs(ComplexMatrix(via_difference.matrix() -
                              via_channel.matrix())) == 0.0);
}

TEST_CASE("spectral function reductions", "[dmexp]") {
  Rng rng(66);
  const DensityMatrix rho = random_density(rng, 2);
  const DensityMatrix target = random_density(rng, 2);

  const DensityMatrix via_g =
      apply_spectral_function(rho, [](double x) { return x; }, 0.9, target);
  const DensityMatrix via_exact = exact_conjugation(rho, target, 0.9);
  CHECK(max_abs(ComplexMatrix(via_g.matrix() - via_exact.matrix())) <= 1e-10);

  const DensityMatrix constant =
      apply_spectral_function(rho, [](double) { return 2.5; }, 1.3, target);
  CHECK(max_abs(ComplexMatrix(constant.matrix() - target.matrix())) <= 1e-12);
}

TEST_CASE("spectral function g(x) = x^2 puts the squared phase on the "
          "off-diagonal", "[dmexp]") {
  const DensityMatrix rho = DensityMatrix::diagonal({0.75, 0.25});
  ComplexVector plus(2);
  plus << cxd(1.0, 0.0), cxd(1.0, 0.0);
  const DensityMatrix target = DensityMatrix::pure(PureState::normalized(plus));
  const DensityMatrix out = apply_spectral_function(
      rho, [](double x) { return x * x; }, kPi, target);
  // relative phase exp(-i pi (0.5625 - 0.0625)) = exp(-i pi / 2) = -i
  ComplexMatrix expected(2, 2);
  expected << cxd(0.5, 0.0), cxd(0.0, -0.5), cxd(0.0, 0.5), cxd(0.5, 0.0);
  CHECK(max_abs(ComplexMatrix(out.matrix() - expected)) <= 1e-10);
}

TEST_CASE("spectral function rejects non-finite g", "[dmexp]") {
  Rng rng(67);
  const DensityMatrix rho = random_density(rng, 2);
  CHECK_THROWS_AS(
      apply_spectral_function(
          rho, [](double) { return std::numeric_limits<double>::quiet_NaN(); },
          1.0, rho),
      DomainError);
}
