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

#include <algorithm>
#include <cmath>
#include <random>

#include "rlq/presets.hpp"
#include "rlq/qlearning.hpp"
#include "test_support.hpp"

namespace rlq {
namespace {

using testing::max_diff;

const Dims kDims{2, 1};

TEST(Schedule, RationalRates) {
  EXPECT_EQ(LearningSchedule::rational(1).alpha(0), 1.0);
  EXPECT_EQ(LearningSchedule::rational(2).alpha(2), 0.5);
  EXPECT_EQ(LearningSchedule::rational(10).alpha(0), 1.0);
  EXPECT_DOUBLE_EQ(alpha(LearningSchedule::rational(10), 90), 0.1);
}

TEST(Schedule, RatesStayInUnitInterval) {
  for (const double c : {0.25, 1.0, 2.0, 10.0, 1e6}) {
    const auto s = LearningSchedule::rational(c);
    for (std::size_t t : {0u, 1u, 7u, 1000u, 4000000000u}) {
      EXPECT_GE(s.alpha(t), 0.0);
      EXPECT_LE(s.alpha(t), 1.0);
    }
  }
}

TEST(Schedule, Labels) {
  EXPECT_EQ(LearningSchedule::rational(2).label(), "2/(t+2)");
  EXPECT_EQ(LearningSchedule::rational(0.5).label(), "0.5/(t+0.5)");
  EXPECT_EQ(LearningSchedule::custom({0.5}).label(), "custom");
  EXPECT_EQ(LearningSchedule::rational(10).rational_c(), 10.0);
  EXPECT_FALSE(LearningSchedule::custom({}).rational_c());
}

TEST(Schedule, Rejections) {
  EXPECT_THROW(LearningSchedule::rational(0), Error);
  EXPECT_THROW(LearningSchedule::rational(-1), Error);
  EXPECT_THROW(LearningSchedule::custom({0.5, 1.5}), Error);
  EXPECT_THROW(LearningSchedule::custom({0.5}).alpha(1), Error);
}

ParameterSample deterministic_eg1() { return {presets::eg1_a0(), presets::eg1_n()}; }

TEST(QStep, ZeroRateKeepsQ) {
  const QLearnState s{4, presets::eg1_q_star()};
  const auto next = q_step(s, deterministic_eg1(), LearningSchedule::custom({1, 1, 1, 1, 0}));
  EXPECT_EQ(next.t, 5u);
  EXPECT_EQ(next.q.mat(), s.q.mat());
}

TEST(QStep, UnitRateTakesTarget) {
  const QLearnState s{0, presets::eg1_q_star()};
  const auto next = q_step(s, deterministic_eg1(), LearningSchedule::rational(1));
  EXPECT_EQ(next.q.mat(), phi_sample(s.q, deterministic_eg1()).mat());
}

TEST(QStep, HalfRateIsMidpoint) {
  const SymMatrix phi{{4.47, 1.8426, -0.0198}, {1.8426, 1.916175, -0.971425},
                      {-0.0198, -0.971425, 0.96585}};
  const SymMatrix mid = 0.5 * (presets::eg1_q_star().mat() + phi);
  const auto next = q_step({0, presets::eg1_q_star()}, deterministic_eg1(),
                           LearningSchedule::custom({0.5}));
  EXPECT_LE(max_diff(next.q.mat(), mid), 1e-13);
}

TEST(QStep, NonFiniteTargetIsBlowUp) {
  const ParameterSample huge{Matrix{{1e200, 0.0, 0.0}, {0.0, 1e200, 0.0}},
                             SymMatrix::identity(3)};
  try {
    q_step({3, QMatrix(kDims, SymMatrix::identity(3))}, huge, LearningSchedule::rational(2));
    FAIL() << "expected blow-up";
  } catch (const QLearningBlowUp& e) {
    EXPECT_EQ(e.t(), 3u);
    EXPECT_EQ(e.norm(), 1.0);
  }
}

TEST(QRun, Eg1ErrorDecreases) {
  RngStream rng(1, streams::kParameters);
  const auto rep = q_run(presets::eg1(), LearningSchedule::rational(2), QMatrix::zero(kDims),
                         2000, rng, presets::eg1_q_star());
  ASSERT_EQ(rep.errors.size(), 2000u);
  EXPECT_TRUE(rep.bounded);
  EXPECT_LT(rep.errors.back(), *rep.initial_error);
  // Coarse trend: mean error over the last 500 steps is below that of the first 500.
  const auto mean = [](auto b, auto e) {
    double s = 0.0;
    for (auto it = b; it != e; ++it) s += *it;
    return s / static_cast<double>(e - b);
  };
  EXPECT_LT(mean(rep.errors.end() - 500, rep.errors.end()),
            mean(rep.errors.begin(), rep.errors.begin() + 500));
}

TEST(QRun, CostOnlyModelDecaysAsProduct) {
  // With A = O every target is N, so Q_t - N = prod_{s<t} (1 - a_s) (Q_0 - N).
  // For a_s = 2/(s+3) the product telescopes to 2/((t+1)(t+2)).
  const SymMatrix n{{2.0, 0.5, 0.3}, {0.5, 1.0, 0.2}, {0.3, 0.2, 1.5}};
  const NoiseAffineModel model(kDims, Matrix(2, 3), {}, n);
  std::vector<double> rates;
  for (std::size_t s = 0; s < 400; ++s) rates.push_back(2.0 / (static_cast<double>(s) + 3.0));
  RngStream rng(5, streams::kParameters);
  const auto rep = q_run(model, LearningSchedule::custom(rates), QMatrix::zero(kDims), 400, rng,
                         QMatrix(kDims, n));
  const double e0 = *rep.initial_error;
  for (std::size_t t = 1; t <= 400; ++t) {
    const double expected = e0 * 2.0 / (static_cast<double>(t + 1) * static_cast<double>(t + 2));
    EXPECT_NEAR(rep.errors[t - 1], expected, 1e-12 * e0) << "t = " << t;
  }
}

TEST(QRun, CostOnlyModelRationalTwoReachesNAtOnce) {
  // a_0 = 1 for 2/(t+2), so Q_1 = N exactly.
  const SymMatrix n = SymMatrix::diagonal(Vector{3.0, 1.0, 2.0});
  const NoiseAffineModel model(kDims, Matrix(2, 3), {}, n);
  RngStream rng(5, streams::kParameters);
  const auto rep = q_run(model, LearningSchedule::rational(2), QMatrix::zero(kDims), 5, rng,
                         QMatrix(kDims, n));
  for (double e : rep.errors) EXPECT_EQ(e, 0.0);
}

TEST(QRun, Deterministic) {
  const auto run = [](std::uint64_t seed) {
    RngStream rng(seed, streams::kParameters);
    return q_run(presets::eg1(), LearningSchedule::rational(10), QMatrix::zero(kDims), 300, rng,
                 presets::eg1_q_star());
  };
  const auto a = run(7), b = run(7), c = run(8);
  EXPECT_EQ(a.final_q.mat(), b.final_q.mat());
  EXPECT_EQ(a.errors, b.errors);
  EXPECT_EQ(a.max_norm, b.max_norm);
  EXPECT_FALSE(a.final_q.mat() == c.final_q.mat());
}

TEST(QRun, ConvexCombinationBound) {
  RngStream rng(11, streams::kParameters);
  const ParameterModel model = presets::eg1();
  const auto schedule = LearningSchedule::rational(1);
  QLearnState state{0, QMatrix::zero(kDims)};
  for (int t = 0; t < 1000; ++t) {
    const ParameterSample s = sample(model, rng);
    const double bound = std::max(matrix_norm(state.q.mat(), Norm::two),
                                  matrix_norm(phi_sample(state.q, s).mat(), Norm::two));
    state = q_step(state, s, schedule);
    ASSERT_LE(matrix_norm(state.q.mat(), Norm::two), bound + 1e-10) << "t = " << t;
    ASSERT_TRUE(is_psd(state.q.mat()));
  }
}

TEST(QRun, BoundedAtUnitDiscount) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RngStream rng(seed, streams::kParameters);
    const auto rep =
        q_run(presets::eg1(), LearningSchedule::rational(2), QMatrix::zero(kDims), 2000, rng);
    EXPECT_TRUE(rep.bounded) << "seed " << seed;
    EXPECT_LT(rep.max_norm, 1e3) << "seed " << seed;
  }
}

TEST(QRun, ThresholdCrossingStopsRun) {
  // Far above the critical discount the iterates grow quickly.
  RngStream rng(1, streams::kParameters);
  const auto rep =
      q_run(presets::eg1(6.0), LearningSchedule::rational(2), QMatrix::zero(kDims), 20000, rng);
  EXPECT_FALSE(rep.bounded);
  ASSERT_TRUE(rep.diverged_at);
  EXPECT_EQ(*rep.diverged_at, rep.steps);
  EXPECT_LT(rep.steps, 20000u);
  EXPECT_GT(matrix_norm(rep.final_q.mat(), Norm::two), kDivergenceThreshold);
}

TEST(QRun, BlowUpCarriesPartialReport) {
  const NoiseAffineModel model(kDims, Matrix{{1e200, 0.0, 0.0}, {0.0, 1e200, 0.0}}, {},
                               SymMatrix::identity(3));
  RngStream rng(1, streams::kParameters);
  try {
    q_run(model, LearningSchedule::rational(2), QMatrix::zero(kDims), 10, rng, std::nullopt,
          {INFINITY, 0.0, 100});
    FAIL() << "expected blow-up";
  } catch (const QLearningBlowUp& e) {
    EXPECT_FALSE(e.partial().bounded);
    EXPECT_EQ(e.partial().steps, e.t());
    EXPECT_TRUE(e.partial().final_q.mat().matrix().all_finite());
  }
}

TEST(QRun, EarlyStopOnStationaryIterates) {
  const SymMatrix n = SymMatrix::identity(3);
  const NoiseAffineModel model(kDims, Matrix(2, 3), {}, n);
  RngStream rng(1, streams::kParameters);
  const auto rep = q_run(model, LearningSchedule::rational(2), QMatrix::zero(kDims), 1000, rng,
                         std::nullopt, {kDivergenceThreshold, 1e-12, 10});
  EXPECT_TRUE(rep.early_stopped);
  EXPECT_LT(rep.steps, 20u);
}

TEST(QRun, RejectsBadArguments) {
  RngStream rng(1, streams::kParameters);
  EXPECT_THROW(q_run(presets::eg1(), LearningSchedule::rational(2), QMatrix::zero(kDims), 0, rng),
               Error);
  EXPECT_THROW(q_run(presets::eg1(), LearningSchedule::rational(2), QMatrix::zero({1, 1}), 5, rng),
               DimensionMismatch);
}

double median_pairwise_distance(std::size_t steps) {
  std::vector<SymMatrix> finals;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RngStream rng(seed, streams::kParameters);
    finals.push_back(q_run(presets::eg1(), LearningSchedule::rational(2), QMatrix::zero(kDims),
                           steps, rng)
                         .final_q.mat());
  }
  std::vector<double> d;
  for (std::size_t i = 0; i < finals.size(); ++i) {
    for (std::size_t j = i + 1; j < finals.size(); ++j) d.push_back(one_norm(finals[i] - finals[j]));
  }
  std::nth_element(d.begin(), d.begin() + d.size() / 2, d.end());
  return d[d.size() / 2];
}

TEST(QRun, DispersionShrinksWithSteps) {
  EXPECT_LT(median_pairwise_distance(20000), median_pairwise_distance(2000));
}

}  // namespace
}  // namespace rlq
