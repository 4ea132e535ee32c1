// Copyright 2026 The rlq Authors
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

// Random generators shared by the property tests. These use std::mt19937_64
// on purpose so that test inputs do not depend on the library's RNG.

#pragma once

#include <cstddef>
#include <random>

#include "rlq/matrix.hpp"
#include "rlq/qmatrix.hpp"

namespace rlq::testing {

inline Matrix random_matrix(std::mt19937_64& gen, std::size_t rows, std::size_t cols,
                            double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  Matrix m(rows, cols);
  for (double& v : m.data()) v = nd(gen);
  return m;
}

inline SymMatrix random_symmetric(std::mt19937_64& gen, std::size_t n, double scale = 1.0) {
  return SymMatrix(random_matrix(gen, n, n, scale));
}

/// G G^T with G of the given inner rank; rank < n gives a singular matrix.
inline SymMatrix random_psd(std::mt19937_64& gen, std::size_t n, std::size_t rank) {
  const Matrix g = random_matrix(gen, n, rank);
  return SymMatrix(g * g.transposed());
}

inline SymMatrix random_pd(std::mt19937_64& gen, std::size_t n) {
  return SymMatrix(random_psd(gen, n, n).matrix() + 0.1 * Matrix::identity(n));
}

inline Vector random_vector(std::mt19937_64& gen, std::size_t n, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  Vector v(n);
  for (double& x : v) x = nd(gen);
  return v;
}

/// Largest |entry| of a - b.
inline double max_diff(const Matrix& a, const Matrix& b) { return max_abs_entry(a - b); }
inline double max_diff(const SymMatrix& a, const SymMatrix& b) {
  return max_diff(a.matrix(), b.matrix());
}

}  // namespace rlq::testing
