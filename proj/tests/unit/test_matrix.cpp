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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rlq/matrix.hpp"
#include "test_support.hpp"

namespace rlq {
namespace {

using testing::max_diff;

TEST(SymMatrix, SymmetrizesOnConstruction) {
  const SymMatrix s(Matrix{{1.0, 2.0}, {4.0, 3.0}});
  EXPECT_EQ(s(0, 1), 3.0);
  EXPECT_EQ(s(1, 0), 3.0);
}

TEST(SymMatrix, RejectsNonSquareAndNonFinite) {
  EXPECT_THROW(SymMatrix(Matrix(2, 3)), DimensionMismatch);
  EXPECT_THROW(SymMatrix(Matrix{{1.0, NAN}, {0.0, 1.0}}), NonFiniteValue);
}

TEST(SymEig, Identity) {
  const auto e = sym_eig(SymMatrix::identity(3));
  for (double l : e.values) EXPECT_DOUBLE_EQ(l, 1.0);
}

TEST(SymEig, DiagonalSortedAscending) {
  const auto e = sym_eig(SymMatrix{{2.0, 0.0}, {0.0, -1.0}});
  EXPECT_DOUBLE_EQ(e.values[0], -1.0);
  EXPECT_DOUBLE_EQ(e.values[1], 2.0);
}

TEST(SymEig, TwoByTwoFromCharacteristicPolynomial) {
  // λ² - 4λ + 3 = 0
  const auto e = sym_eig(SymMatrix{{2.0, 1.0}, {1.0, 2.0}});
  EXPECT_NEAR(e.values[0], 1.0, 1e-14);
  EXPECT_NEAR(e.values[1], 3.0, 1e-14);
}

TEST(SymEig, ReconstructionAndOrthonormalityOnRandomMatrices) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 12;
    const SymMatrix m = testing::random_symmetric(gen, n, std::pow(10.0, trial % 7 - 3));
    const auto e = sym_eig(m);
    const SymMatrix rebuilt = spectral_map(e, [](double l) { return l; });
    const double scale = std::max(1.0, matrix_norm(m, Norm::two));
    EXPECT_LE(matrix_norm(rebuilt - m, Norm::two), 1e-10 * scale);
    const SymMatrix gram(e.vectors.transposed() * e.vectors);
    EXPECT_LE(matrix_norm(gram - SymMatrix::identity(n), Norm::two), 1e-10);
    for (std::size_t k = 1; k < n; ++k) EXPECT_LE(e.values[k - 1], e.values[k]);
  }
}

TEST(SymEig, HandlesLargerDimension) {
  std::mt19937_64 gen(5);
  const SymMatrix m = testing::random_symmetric(gen, 64);
  const auto e = sym_eig(m);
  const SymMatrix rebuilt = spectral_map(e, [](double l) { return l; });
  EXPECT_LE(matrix_norm(rebuilt - m, Norm::two), 1e-10 * std::max(1.0, matrix_norm(m, Norm::two)));
}

TEST(PinvPsd, RankDeficientDiagonal) {
  const SymMatrix p = pinv_psd(SymMatrix{{2.0, 0.0}, {0.0, 0.0}});
  EXPECT_LE(max_diff(p, SymMatrix{{0.5, 0.0}, {0.0, 0.0}}), 1e-15);
}

TEST(PinvPsd, Identity) {
  EXPECT_LE(max_diff(pinv_psd(SymMatrix::identity(4)), SymMatrix::identity(4)), 1e-15);
}

TEST(PinvPsd, RankOneOuterProduct) {
  // (a a^T)^+ = a a^T / |a|^4 with a = (2, 1).
  const SymMatrix p = pinv_psd(SymMatrix{{4.0, 2.0}, {2.0, 1.0}});
  const SymMatrix expected = (1.0 / 25.0) * SymMatrix{{4.0, 2.0}, {2.0, 1.0}};
  EXPECT_LE(max_diff(p, expected), 1e-15);
}

TEST(PinvPsd, ZeroMatrix) {
  EXPECT_EQ(pinv_psd(SymMatrix(3)), SymMatrix(3));
}

TEST(PinvPsd, TinyNegativeRoundOffIsDropped) {
  const SymMatrix p = pinv_psd(SymMatrix{{1.0, 0.0}, {0.0, -1e-16}});
  EXPECT_EQ(p(1, 1), 0.0);
  EXPECT_DOUBLE_EQ(p(0, 0), 1.0);
}

TEST(PinvPsd, PenroseIdentitiesOnSingularPsd) {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 6;
    const SymMatrix m = testing::random_psd(gen, n, 1 + trial % n);
    const Matrix& a = m.matrix();
    const Matrix p = pinv_psd(m).matrix();
    const double s = std::max(1.0, max_abs_entry(a)) * std::max(1.0, max_abs_entry(p));
    EXPECT_LE(max_diff(a * p * a, a), 1e-8 * s);
    EXPECT_LE(max_diff(p * a * p, p), 1e-8 * s * std::max(1.0, max_abs_entry(p)));
    EXPECT_LE(max_diff(a * p, (a * p).transposed()), 1e-8 * s);
    EXPECT_LE(max_diff(p * a, (p * a).transposed()), 1e-8 * s);
  }
}

TEST(PinvPsd, IsAnInvolutionOnWellConditionedPsd) {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 6;
    const SymMatrix m = testing::random_pd(gen, n);
    EXPECT_LE(max_diff(pinv_psd(pinv_psd(m)), m), 1e-8 * std::max(1.0, max_abs_entry(m.matrix())));
  }
}

TEST(MatrixNorm, Examples) {
  EXPECT_DOUBLE_EQ(matrix_norm(SymMatrix::identity(3), Norm::two), 1.0);
  EXPECT_DOUBLE_EQ(matrix_norm(SymMatrix{{1.0, -2.0}, {-2.0, 1.0}}, Norm::one), 3.0);
  EXPECT_NEAR(matrix_norm(SymMatrix{{2.0, 1.0}, {1.0, 2.0}}, Norm::two), 3.0, 1e-14);
}

TEST(MatrixNorm, TwoNormIsEvenInSign) {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 100; ++trial) {
    const SymMatrix m = testing::random_symmetric(gen, 1 + trial % 7);
    EXPECT_DOUBLE_EQ(matrix_norm(m, Norm::two), matrix_norm(-m, Norm::two));
  }
}

TEST(IsPsd, Examples) {
  EXPECT_TRUE(is_psd(SymMatrix::identity(2)));
  EXPECT_FALSE(is_psd(SymMatrix{{1.0, 0.0}, {0.0, -1.0}}));
  EXPECT_TRUE(is_psd(SymMatrix{{1.0, 0.0}, {0.0, -1e-12}}));
  EXPECT_TRUE(is_psd(SymMatrix(2)));
}

TEST(Matrix, ProductShapeChecked) {
  EXPECT_THROW(Matrix(2, 3) * Matrix(2, 3), DimensionMismatch);
  const Matrix a{{1.0, 2.0}, {3.0, 4.0}};
  const Matrix b{{0.0, 1.0}, {1.0, 0.0}};
  EXPECT_EQ(a * b, (Matrix{{2.0, 1.0}, {4.0, 3.0}}));
}

}  // namespace
}  // namespace rlq
