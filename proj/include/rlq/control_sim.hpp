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

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rlq/errors.hpp"
#include "rlq/matrix.hpp"
#include "rlq/param_model.hpp"
#include "rlq/qlearning.hpp"
#include "rlq/qmatrix.hpp"
#include "rlq/rng.hpp"

namespace rlq {

struct ZeroPolicy {};

struct FixedGainPolicy {
  Matrix gain;  // m x n
};

/// u_t = Gamma(Q_t) x_t with Q_t learned online from the same samples that
/// drive the plant.
struct AdaptivePolicy {
  LearningSchedule schedule = LearningSchedule::rational(2.0);
  std::optional<QMatrix> q0;  // defaults to O
};

using Policy = std::variant<ZeroPolicy, FixedGainPolicy, AdaptivePolicy>;

inline std::string policy_name(const Policy& p) {
  struct Visitor {
    std::string operator()(const ZeroPolicy&) const { return "zero"; }
    std::string operator()(const FixedGainPolicy&) const { return "fixed"; }
    std::string operator()(const AdaptivePolicy&) const { return "adaptive"; }
  };
  return std::visit(Visitor{}, p);
}

struct StepRecord {
  std::size_t t = 0;
  Vector x;
  Vector u;
  double stage_cost = 0.0;  // [x; u]^T N_{t+1} [x; u]
  double x_sq = 0.0;
  double u_sq = 0.0;
  Matrix gain;
};

struct TrajectoryLog {
  std::vector<StepRecord> records;  // t = 0 .. T-1
  Vector final_state;               // x_T
  double cumulative_cost = 0.0;
  std::uint64_t seed = 0;
  bool unstable = false;  // |x| overflowed and the log was truncated
  std::optional<QMatrix> learner_q;
};

inline Vector stack(std::span<const double> x, std::span<const double> u) {
  Vector xu(x.begin(), x.end());
  xu.insert(xu.end(), u.begin(), u.end());
  return xu;
}

/// x_{t+1} = A_{t+1} [x_t; u_t].
inline Vector step_dynamics(std::span<const double> x, std::span<const double> u,
                            const ParameterSample& s) {
  if (s.a.rows() != x.size() || s.a.cols() != x.size() + u.size()) {
    throw DimensionMismatch("state/control sizes do not match A of shape " + s.a.shape());
  }
  return s.a * std::span<const double>(stack(x, u));
}

inline constexpr double kOverflowNorm = 1e12;

inline TrajectoryLog simulate(const ParameterModel& model, const Policy& policy,
                              std::span<const double> x0, std::size_t steps, RngStream& rng,
                              double overflow_norm = kOverflowNorm) {
  if (steps < 1) throw Error("simulate: steps must be >= 1");
  const Dims dm = dims(model);
  if (x0.size() != dm.n) throw DimensionMismatch("x0 must have n entries");

  TrajectoryLog log;
  log.seed = rng.seed();
  log.records.reserve(steps);

  const auto* adaptive = std::get_if<AdaptivePolicy>(&policy);
  std::optional<QLearnState> learner;
  if (adaptive) learner = QLearnState{0, adaptive->q0.value_or(QMatrix::zero(dm))};

  Vector x(x0.begin(), x0.end());
  for (std::size_t t = 0; t < steps; ++t) {
    Matrix gain;
    if (std::holds_alternative<ZeroPolicy>(policy)) {
      gain = Matrix(dm.m, dm.n);
    } else if (const auto* f = std::get_if<FixedGainPolicy>(&policy)) {
      gain = f->gain;
    } else {
      gain = gamma_op(learner->q);
    }
    if (gain.rows() != dm.m || gain.cols() != dm.n) {
      throw DimensionMismatch("feedback gain must be m x n, got " + gain.shape());
    }
    Vector u = gain * std::span<const double>(x);

    const ParameterSample s = sample(model, rng);
    const Vector xu = stack(x, u);
    StepRecord rec;
    rec.t = t;
    rec.stage_cost = s.n_cost.quadratic_form(xu);
    rec.x_sq = dot(x, x);
    rec.u_sq = dot(u, u);
    log.cumulative_cost += rec.stage_cost;

    Vector next = s.a * std::span<const double>(xu);
    if (learner) *learner = q_step(*learner, s, adaptive->schedule);

    rec.x = std::move(x);
    rec.u = std::move(u);
    rec.gain = std::move(gain);
    log.records.push_back(std::move(rec));

    const double size = norm2(next);
    x = std::move(next);
    if (!(size <= overflow_norm)) {
      log.unstable = true;
      break;
    }
  }
  log.final_state = std::move(x);
  if (learner) log.learner_q = learner->q;
  return log;
}

struct StabilizationMetrics {
  double sum_x_sq = 0.0;
  double sum_u_sq = 0.0;
  double cumulative_cost = 0.0;
  double tail_norm = 0.0;  // |x_T|
  /// Share of sum |x_t|^2 contributed by the last quarter of the log.
  double plateau = 0.0;
};

inline StabilizationMetrics stabilization_metrics(const TrajectoryLog& log) {
  if (log.records.empty()) throw Error("stabilization_metrics: empty trajectory log");
  StabilizationMetrics m;
  const std::size_t total = log.records.size();
  const std::size_t tail_start = total - total / 4;
  double tail = 0.0;
  for (std::size_t k = 0; k < total; ++k) {
    const auto& r = log.records[k];
    m.sum_x_sq += r.x_sq;
    m.sum_u_sq += r.u_sq;
    m.cumulative_cost += r.stage_cost;
    if (k >= tail_start) tail += r.x_sq;
  }
  m.tail_norm = norm2(log.final_state);
  m.plateau = m.sum_x_sq > 0.0 ? tail / m.sum_x_sq : 0.0;
  return m;
}

}  // namespace rlq
