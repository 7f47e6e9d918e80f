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

#include "helpers.hpp"
#include "qpca/linalg.hpp"
#include "qpca/states.hpp"

using namespace qpca;
using namespace qpca::testing;

TEST_CASE("tensor product basics", "[linalg]") {
  CHECK(max_abs(ComplexMatrix(tensor(identity(2), identity(2)) - identity(4))) ==
        0.0);

  ComplexMatrix p0 = ComplexMatrix::Zero(2, 2), p1 = ComplexMatrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  const ComplexMatrix prod = tensor(p0, p1);
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(1, 1) = 1.0;
  CHECK(max_abs(ComplexMatrix(prod - expected)) == 0.0);
}

TEST_CASE("tensor product matches the index-loop oracle", "[linalg]") {
  Rng rng(31);
  const ComplexMatrix a = random_matrix(rng, 2, 2);
  const ComplexMatrix b = random_matrix(rng, 2, 2);
  const ComplexMatrix prod = tensor(a, b);
  for (long i = 0; i < 2; ++i) {
    for (long j = 0; j < 2; ++j) {
      for (long k = 0; k < 2; ++k) {
        for (long l = 0; l < 2; ++l) {
          CHECK(prod(i * 2 + k, j * 2 + l) == a(i, j) * b(k, l));
        }
      }
    }
  }
}

TEST_CASE("tensor respects the dimension cap", "[linalg]") {
  ScopedDimensionCap guard(3);
  CHECK_THROWS_AS(tensor(identity(2), identity(2)), DimensionLimitError);
}

TEST_CASE("partial trace factorizes product states", "[linalg]") {
  Rng rng(32);
  const DensityMatrix rho = random_density(rng, 2);
  const DensityMatrix sigma = random_density(rng, 2);
  const ComplexMatrix joint = tensor(rho.matrix(), sigma.matrix());

  CHECK(max_abs(ComplexMatrix(partial_trace(joint, Subsystem::first, 2, 2) -
                              sigma.matrix())) < 1e-14);
  CHECK(max_abs(ComplexMatrix(partial_trace(joint, Subsystem::second, 2, 2) -
                              rho.matrix())) < 1e-14);
}

TEST_CASE("partial trace of the swapped product recovers rho", "[linalg]") {
  Rng rng(33);
  const DensityMatrix rho = random_density(rng, 2);
  const DensityMatrix sigma = random_density(rng, 2);
  const ComplexMatrix s = swap_operator(2);
  const ComplexMatrix conjugated = s * tensor(rho.matrix(), sigma.matrix()) * s;
  CHECK(max_abs(ComplexMatrix(partial_trace(conjugated, Subsystem::first, 2, 2) -
                              rho.matrix())) < 1e-14);
}

TEST_CASE("partial trace preserves trace and is linear", "[linalg]") {
  Rng rng(34);
  const ComplexMatrix a = random_matrix(rng, 6, 6);
  const ComplexMatrix b = random_matrix(rng, 6, 6);
  const cxd alpha(0.3, -1.2), beta(-0.7, 0.4);

  for (auto sub : {Subsystem::first, Subsystem::second}) {
    const ComplexMatrix ta = partial_trace(a, sub, 2, 3);
    CHECK(std::abs(ta.trace() - a.trace()) < 1e-12);
    const ComplexMatrix combined =
        partial_trace(ComplexMatrix(alpha * a + beta * b), sub, 2, 3);
    const ComplexMatrix separate =
        alpha * ta + beta * partial_trace(b, sub, 2, 3);
    CHECK(max_abs(ComplexMatrix(combined - separate)) < 1e-12);
  }

  CHECK_THROWS_AS(partial_trace(a, Subsystem::first, 2, 2), ShapeError);
}

TEST_CASE("swap operator on small dimensions", "[linalg]") {
  CHECK(swap_operator(1)(0, 0) == cxd(1.0, 0.0));

  const ComplexMatrix s = swap_operator(2);
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(0, 0) = expected(3, 3) = 1.0;
  expected(1, 2) = expected(2, 1) = 1.0;
  CHECK(max_abs(ComplexMatrix(s - expected)) == 0.0);
}

TEST_CASE("swap operator exchanges tensor factors", "[linalg]") {
  Rng rng(35);
  const ComplexVector v = random_vector(rng, 3);
  const ComplexVector w = random_vector(rng, 3);
  const ComplexVector swapped = swap_operator(3) * tensor(v, w);
  CHECK((swapped - tensor(w, v)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("swap operator is a Hermitian involution", "[linalg]") {
  for (long d : {1L, 2L, 3L, 4L}) {
    const ComplexMatrix s = swap_operator(d);
    CHECK(max_abs(ComplexMatrix(s * s - identity(d * d))) <= 1e-12);
    CHECK(max_abs(ComplexMatrix(s - s.adjoint())) <= 1e-12);
  }
}

TEST_CASE("matrix exponential special cases", "[linalg]") {
  CHECK(max_abs(ComplexMatrix(
            matrix_exponential(ComplexMatrix::Zero(3, 3), 1.7) - identity(3))) <
        1e-12);

  // exp(-i S dt) = cos(dt) I - i sin(dt) S since S^2 = I.
  const double dt = 0.37;
  const ComplexMatrix s = swap_operator(2);
  const ComplexMatrix closed_form =
      std::cos(dt) * identity(4) + cxd(0.0, -std::sin(dt)) * s;
  CHECK(max_abs(ComplexMatrix(matrix_exponential(s, dt) - closed_form)) <=
        1e-12);

  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 0) = 1.0;
  ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
  expected(0, 0) = -1.0;
  expected(1, 1) = 1.0;
  CHECK(max_abs(ComplexMatrix(matrix_exponential(h, kPi) - expected)) < 1e-12);
}

TEST_CASE("matrix exponential is unitary and obeys the group law", "[linalg]") {
  Rng rng(36);
  for (int trial = 0; trial < 4; ++trial) {
    const ComplexMatrix h = random_hermitian(rng, 4);
    const double t1 = rng.uniform(-2.0, 2.0), t2 = rng.uniform(-2.0, 2.0);
    const ComplexMatrix u1 = matrix_exponential(h, t1);
    CHECK(max_abs(ComplexMatrix(u1 * u1.adjoint() - identity(4))) <= 1e-10);
    CHECK(max_abs(ComplexMatrix(u1 * matrix_exponential(h, t2) -
                                matrix_exponential(h, t1 + t2))) <= 1e-9);
  }

  Rng rng2(37);
  CHECK_THROWS_AS(matrix_exponential(random_matrix(rng2, 3, 3), 1.0),
                  ValidationError);
}

TEST_CASE("hermitian_eig on known spectra", "[linalg]") {
  const SpectralDecomposition half = hermitian_eig(identity(2) / 2.0);
  CHECK(half.eigenvalues(0) == Approx(0.5).margin(1e-14));
  CHECK(half.eigenvalues(1) == Approx(0.5).margin(1e-14));

  ComplexMatrix diag = ComplexMatrix::Zero(2, 2);
  diag(0, 0) = 0.75;
  diag(1, 1) = 0.25;
  const SpectralDecomposition eig = hermitian_eig(diag);
  CHECK(eig.eigenvalues(0) == Approx(0.75).margin(1e-14));
  CHECK(eig.eigenvalues(1) == Approx(0.25).margin(1e-14));
  CHECK(std::abs(eig.eigenvectors[0].amplitudes()(0) - cxd(1.0, 0.0)) < 1e-12);
  CHECK(std::abs(eig.eigenvectors[1].amplitudes()(1) - cxd(1.0, 0.0)) < 1e-12);
}

TEST_CASE("hermitian_eig reconstruction and orthonormality", "[linalg]") {
  Rng rng(38);
  const ComplexMatrix h = random_hermitian(rng, 8);
  const SpectralDecomposition eig = hermitian_eig(h);
  CHECK(max_abs(ComplexMatrix(eig.reconstruct() - h)) <= 1e-10);
  for (long i = 0; i < 8; ++i) {
    CHECK(eig.eigenvalues(i) <= eig.eigenvalues(std::max(0L, i - 1)) + 1e-12);
    for (long j = 0; j < 8; ++j) {
      const cxd overlap = eig.eigenvectors[size_t(i)].amplitudes().adjoint() *
                          eig.eigenvectors[size_t(j)].amplitudes();
      CHECK(std::abs(overlap - (i == j ? cxd(1.0, 0.0) : cxd(0.0, 0.0))) <=
            tol::kOrthonormal);
    }
  }
}

TEST_CASE("hermitian_eig matches the 2x2 characteristic polynomial",
          "[linalg]") {
  Rng rng(39);
  for (int trial = 0; trial < 8; ++trial) {
    const ComplexMatrix h = random_hermitian(rng, 2);
    const double tr = h.trace().real();
    const double det = (h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0)).real();
    const double disc = std::sqrt(tr * tr / 4.0 - det);
    const SpectralDecomposition eig = hermitian_eig(h);
    CHECK(eig.eigenvalues(0) == Approx(tr / 2.0 + disc).margin(1e-10));
    CHECK(eig.eigenvalues(1) == Approx(tr / 2.0 - disc).margin(1e-10));
  }
}

TEST_CASE("trace distance basics", "[linalg]") {
  Rng rng(40);
  const DensityMatrix rho = random_density(rng, 3);
  CHECK(trace_distance(rho, rho) == 0.0);

  const DensityMatrix zero = DensityMatrix::pure(PureState::basis(2, 0));
  const DensityMatrix one = DensityMatrix::pure(PureState::basis(2, 1));
  CHECK(trace_distance(zero, one) == Approx(1.0).margin(1e-12));

  // eigenvalues of |0><0| - I/2 are +-1/2
  CHECK(trace_distance(zero, DensityMatrix::maximally_mixed(2)) ==
        Approx(0.5).margin(1e-12));

  CHECK_THROWS_AS(trace_distance(rho, zero), ShapeError);
}

TEST_CASE("trace distance is symmetric and satisfies the triangle inequality",
          "[linalg]") {
  Rng rng(41);
  for (int trial = 0; trial < 6; ++trial) {
    const DensityMatrix a = random_density(rng, 3);
    const DensityMatrix b = random_density(rng, 3);
    const DensityMatrix c = random_density(rng, 3);
    CHECK(trace_distance(a, b) == Approx(trace_distance(b, a)).margin(1e-12));
    CHECK(trace_distance(a, c) <=
          trace_distance(a, b) + trace_distance(b, c) + 1e-12);
  }
}

TEST_CASE("density matrix validation rejects bad inputs", "[linalg]") {
  ComplexMatrix non_hermitian = ComplexMatrix::Zero(2, 2);
  non_hermitian(0, 1) = cxd(0.3, 0.0);
  non_hermitian(0, 0) = non_hermitian(1, 1) = 0.5;
  CHECK_THROWS_AS(DensityMatrix(non_hermitian), ValidationError);

  CHECK_THROWS_AS(DensityMatrix(ComplexMatrix(2.0 * identity(2))),
                  ValidationError);

  ComplexMatrix indefinite = ComplexMatrix::Zero(2, 2);
  indefinite(0, 0) = 1.5;
  indefinite(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix(indefinite), ValidationError);

  ComplexVector long_vec = ComplexVector::Constant(4, cxd(1.0, 0.0));
  CHECK_THROWS_AS(PureState(long_vec), ValidationError);
}

TEST_CASE("scoped dimension cap validates its argument", "[linalg]") {
  CHECK_THROWS_AS(set_dimension_cap(0), ValidationError);
  CHECK_THROWS_AS(set_dimension_cap(kMaxDimension + 1), ValidationError);
  {
    ScopedDimensionCap guard(16);
    CHECK(dimension_cap() == 16);
  }
  CHECK(dimension_cap() == kMaxDimension);
}
