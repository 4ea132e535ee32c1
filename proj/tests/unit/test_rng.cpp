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
#include <set>

#include "rlq/rng.hpp"

namespace rlq {
namespace {

TEST(RngStream, ReplaysBitExactly) {
  RngStream a(42, 7);
  RngStream b(42, 7);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(a.next_u64(), b.next_u64());
  }
  RngStream c(42, 7);
  RngStream d(42, 7);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(c.normal(), d.normal());
}

TEST(RngStream, StreamsAndSeedsDiffer) {
  RngStream a(42, 0);
  RngStream b(42, 1);
  RngStream c(43, 0);
  int same_ab = 0;
  int same_ac = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.next_u64();
    same_ab += x == b.next_u64();
    same_ac += x == c.next_u64();
  }
  EXPECT_EQ(same_ab, 0);
  EXPECT_EQ(same_ac, 0);
}

TEST(RngStream, CounterAdvancesPerWord) {
  RngStream r(1);
  EXPECT_EQ(r.counter(), 0u);
  r.next_u64();
  r.uniform();
  EXPECT_EQ(r.counter(), 2u);
}

TEST(RngStream, UniformStaysInOpenInterval) {
  RngStream r(9);
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(RngStream, MomentsOfNoiseLaws) {
  constexpr int kDraws = 200000;
  RngStream r(123);
  double sn = 0, sn2 = 0, sc = 0, sc2 = 0;
  for (int i = 0; i < kDraws; ++i) {
    const double z = r.normal();
    const double c = r.centered_uniform();
    sn += z;
    sn2 += z * z;
    sc += c;
    sc2 += c * c;
    ASSERT_LE(std::abs(c), std::sqrt(3.0));
  }
  // 5 standard errors: mean se = 1/sqrt(N); variance se ~ sqrt(2/N) (normal), sqrt(0.8/N) (uniform).
  const double n = kDraws;
  EXPECT_NEAR(sn / n, 0.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(sn2 / n, 1.0, 5.0 * std::sqrt(2.0 / n));
  EXPECT_NEAR(sc / n, 0.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(sc2 / n, 1.0, 5.0 * std::sqrt(0.8 / n));
}

TEST(RngStream, NormalTailsAreFinite) {
  RngStream r(77);
  for (int i = 0; i < 100000; ++i) ASSERT_TRUE(std::isfinite(r.normal()));
}

}  // namespace
}  // namespace rlq
