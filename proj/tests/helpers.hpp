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

// Seeded random fixtures shared by the unit and acceptance suites.

#include <vector>

#include "qpca/rng.hpp"
#include "qpca/states.hpp"

namespace qpca::testing {

inline ComplexMatrix random_matrix(Rng& rng, long rows, long cols) {
  ComplexMatrix m(rows, cols);
  for (long i = 0; i < rows; ++i) {
    for (long j = 0; j < cols; ++j) {
      m(i, j) = cxd(rng.gaussian(), rng.gaussian());
    }
  }
  return m;
}

inline ComplexVector random_vector(Rng& rng, long d) {
  ComplexVector v(d);
  for (long i = 0; i < d; ++i) v(i) = cxd(rng.gaussian(), rng.gaussian());
  return v;
}

inline PureState random_pure(Rng& rng, long d) {
  return PureState::normalized(random_vector(rng, d));
}

inline ComplexMatrix random_hermitian(Rng& rng, long d) {
  const ComplexMatrix g = random_matrix(rng, d, d);
  return 0.5 * (g + g.adjoint());
}

/// Full-rank Ginibre density matrix G G^dag / tr.
inline DensityMatrix random_density(Rng& rng, long d) {
  const ComplexMatrix g = random_matrix(rng, d, d);
  ComplexMatrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix(std::move(m));
}

/// Haar-ish random unitary via Gram-Schmidt on a Ginibre matrix.
inline ComplexMatrix random_unitary(Rng& rng, long d) {
  ComplexMatrix g = random_matrix(rng, d, d);
  for (long j = 0; j < d; ++j) {
    for (long k = 0; k < j; ++k) {
      const cxd overlap = g.col(k).adjoint() * g.col(j);
      g.col(j) -= overlap * g.col(k);
    }
    g.col(j).normalize();
  }
  return g;
}

/// Density matrix with the given spectrum in a seeded random eigenbasis.
inline DensityMatrix random_density_with_spectrum(
    Rng& rng, const std::vector<double>& eigenvalues) {
  const long d = long(eigenvalues.size());
  const ComplexMatrix u = random_unitary(rng, d);
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (long i = 0; i < d; ++i) {
    m += eigenvalues[size_t(i)] * (u.col(i) * u.col(i).adjoint());
  }
  return DensityMatrix(std::move(m));
}

}  // namespace qpca::testing
