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

// Online Q-learning for the random-parameter LQ problem:
//
//   Q_{t+1} = (1 - a_t) Q_t + a_t (N_{t+1} + A_{t+1}^T Pi(Q_t) A_{t+1})
//
// with one fresh parameter sample per step.

#pragma once

#include <cmath>
#include <cstddef>
#include <deque>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rlq/errors.hpp"
#include "rlq/matrix.hpp"
#include "rlq/param_model.hpp"
#include "rlq/qmatrix.hpp"
#include "rlq/riccati.hpp"
#include "rlq/rng.hpp"

namespace rlq {

/// Learning rates a_t in [0, 1]. The rational family c / (t + c) satisfies
/// sum a_t = inf and sum a_t^2 < inf for every c > 0.
class LearningSchedule {
 public:
  static LearningSchedule rational(double c) {
    if (!(c > 0.0) || !std::isfinite(c)) {
      throw Error("rational schedule needs c > 0, got " + std::to_string(c));
    }
    LearningSchedule s;
    s.kind_ = Rational{c};
    return s;
  }

  static LearningSchedule custom(std::vector<double> rates) {
    for (double a : rates) {
      if (!(a >= 0.0 && a <= 1.0)) {
        throw Error("learning rates must lie in [0, 1], got " + std::to_string(a));
      }
    }
    LearningSchedule s;
    s.kind_ = std::move(rates);
    return s;
  }

  double alpha(std::size_t t) const {
    if (const auto* r = std::get_if<Rational>(&kind_)) {
      return r->c / (static_cast<double>(t) + r->c);
    }
    const auto& rates = std::get<std::vector<double>>(kind_);
    if (t >= rates.size()) {
      throw Error("custom schedule exhausted at t = " + std::to_string(t));
    }
    return rates[t];
  }

  /// "2/(t+2)" for rational(2), "custom" otherwise.
  std::string label() const {
    if (const auto* r = std::get_if<Rational>(&kind_)) {
      std::string c = format_c(r->c);
      return c + "/(t+" + c + ")";
    }
    return "custom";
  }

  std::optional<double> rational_c() const {
    if (const auto* r = std::get_if<Rational>(&kind_)) return r->c;
    return std::nullopt;
  }

 private:
  struct Rational {
    double c;
  };

  static std::string format_c(double c) {
    if (c == std::floor(c) && c < 1e15) return std::to_string(static_cast<long long>(c));
    std::string s = std::to_string(c);
    while (!s.empty() && s.back() == '0') s.pop_back();
    return s;
  }

  std::variant<Rational, std::vector<double>> kind_ = Rational{1.0};
};

inline double alpha(const LearningSchedule& schedule, std::size_t t) {
  return schedule.alpha(t);
}

struct QLearnState {
  std::size_t t = 0;
  QMatrix q;
};

struct QRunReport {
  QMatrix final_q;
  std::size_t steps = 0;  // updates performed
  double max_norm = 0.0;  // max_t |Q_t|_2
  bool bounded = true;    // never exceeded the divergence threshold
  std::optional<std::size_t> diverged_at;
  bool early_stopped = false;
  std::optional<double> initial_error;  // |Q_0 - reference|_1
  std::vector<double> errors;           // errors[t-1] = |Q_t - reference|_1
  std::uint64_t seed = 0;
};

class QLearningBlowUp : public Error {
 public:
  QLearningBlowUp(std::size_t t, double norm, QRunReport partial = {})
      : Error("q-learning blow-up at t = " + std::to_string(t) +
              " (|Q_t|_2 = " + std::to_string(norm) + ")"),
        t_(t),
        norm_(norm),
        partial_(std::move(partial)) {}
  std::size_t t() const { return t_; }
  double norm() const { return norm_; }
  const QRunReport& partial() const { return partial_; }

 private:
  std::size_t t_;
  double norm_;
  QRunReport partial_;
};

/// One update with the sample that arrives between t and t+1.
inline QLearnState q_step(const QLearnState& state, const ParameterSample& sample,
                          const LearningSchedule& schedule) {
  const double a = schedule.alpha(state.t);
  const Matrix& q = state.q.mat().matrix();
  Matrix target;
  try {
    target = phi_sample(state.q, sample).mat().matrix();
  } catch (const NonFiniteValue&) {
    throw QLearningBlowUp(state.t, max_abs_entry(q));
  }
  Matrix next = (1.0 - a) * q + a * target;
  if (!next.all_finite()) {
    throw QLearningBlowUp(state.t, max_abs_entry(q));
  }
  return {state.t + 1, QMatrix(state.q.dims(), SymMatrix(next))};
}

struct QRunOptions {
  double divergence_threshold = kDivergenceThreshold;
  /// Stop once the trailing-window mean of |Q_{t+1} - Q_t|_1 / a_t falls
  /// below this value; 0 disables early stopping.
  double early_stop_tol = 0.0;
  std::size_t early_stop_window = 100;
};

inline QRunReport q_run(const ParameterModel& model, const LearningSchedule& schedule,
                        const QMatrix& q0, std::size_t steps, RngStream& rng,
                        const std::optional<QMatrix>& reference = std::nullopt,
                        const QRunOptions& opt = {}) {
  if (steps < 1) throw Error("q_run: steps must be >= 1");
  if (!(q0.dims() == dims(model))) throw DimensionMismatch("q0 and model dimensions differ");
  QRunReport rep;
  rep.seed = rng.seed();
  if (reference) {
    rep.initial_error = one_norm(q0.mat() - reference->mat());
    rep.errors.reserve(steps);
  }
  QLearnState state{0, q0};
  rep.max_norm = matrix_norm(q0.mat(), Norm::two);
  std::deque<double> window;
  double window_sum = 0.0;

  for (std::size_t i = 0; i < steps; ++i) {
    const ParameterSample s = sample(model, rng);
    QLearnState next;
    try {
      next = q_step(state, s, schedule);
    } catch (const QLearningBlowUp& e) {
      rep.final_q = state.q;
      rep.steps = state.t;
      rep.bounded = false;
      rep.diverged_at = state.t;
      throw QLearningBlowUp(e.t(), e.norm(), rep);
    }
    const double a = schedule.alpha(state.t);
    const double moved = one_norm(next.q.mat() - state.q.mat());
    state = std::move(next);
    const double size = matrix_norm(state.q.mat(), Norm::two);
    rep.max_norm = std::max(rep.max_norm, size);
    if (reference) rep.errors.push_back(one_norm(state.q.mat() - reference->mat()));
    if (size > opt.divergence_threshold) {
      rep.bounded = false;
      rep.diverged_at = state.t;
      break;
    }
    if (opt.early_stop_tol > 0.0 && a > 0.0) {
      window.push_back(moved / a);
      window_sum += moved / a;
      if (window.size() > opt.early_stop_window) {
        window_sum -= window.front();
        window.pop_front();
      }
      if (window.size() == opt.early_stop_window &&
          window_sum / static_cast<double>(window.size()) < opt.early_stop_tol) {
        rep.early_stopped = true;
        break;
      }
    }
  }
  rep.final_q = state.q;
  rep.steps = state.t;
  return rep;
}

}  // namespace rlq
