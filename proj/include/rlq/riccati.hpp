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

// Bellman maps on state-control value matrices and the deterministic solvers
// built on them.
//
//   Phi_t(Q) = N_t + A_t^T Pi(Q) A_t          (one sample)
//   Phi(Q)   = E[N + A^T Pi(Q) A]             (expectation)
//
// The Riccati equation K = Pi(E[N + A^T K A]) and the fixed point
// Q* = Phi(Q*) are two views of the same problem: K = Pi(Q*). Value iteration
// on K from K_0 = O is monotone nondecreasing and either converges or is
// unbounded, which is how well-posedness is decided here.

#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "rlq/errors.hpp"
#include "rlq/matrix.hpp"
#include "rlq/param_model.hpp"
#include "rlq/qmatrix.hpp"

namespace rlq {

inline QMatrix phi_sample(const QMatrix& q, const ParameterSample& s) {
  const Dims dm = q.dims();
  if (s.a.rows() != dm.n || s.a.cols() != dm.d() || s.n_cost.dim() != dm.d()) {
    throw DimensionMismatch("sample of shape A=" + s.a.shape() + " does not match Q of size " +
                            std::to_string(dm.d()));
  }
  return QMatrix(dm, s.n_cost + sandwich(s.a, pi_op(q)));
}

inline QMatrix phi_expected(const QMatrix& q, const ParameterModel& model) {
  if (!(q.dims() == dims(model))) throw DimensionMismatch("Q and model dimensions differ");
  return QMatrix(q.dims(), expected_map(model, pi_op(q)));
}

enum class Verdict { well_posed, ill_posed, inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::well_posed: return "well_posed";
    case Verdict::ill_posed: return "ill_posed";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

struct WellPosedVerdict {
  Verdict verdict = Verdict::inconclusive;
  std::size_t iterations = 0;
  double last_step = 0.0;     // |K_{t+1} - K_t|_1 at exit
  double final_norm = 0.0;    // |K_t|_2 at exit
  std::vector<double> trace_log;  // trace(K_t), t = 1..iterations
};

inline constexpr double kDivergenceThreshold = 1e8;
inline constexpr std::size_t kDefaultMaxIters = 10000;

struct IterationOptions {
  std::size_t max_iters = kDefaultMaxIters;
  double tol = 1e-10;
  double divergence_threshold = kDivergenceThreshold;
};

struct ValueIterationResult {
  SymMatrix k;  // last iterate (the limit when well posed)
  WellPosedVerdict verdict;
};

using ValueIterationObserver = std::function<void(std::size_t, const SymMatrix&)>;

/// K_0 = O, K_{t+1} = Pi(E[N + A^T K_t A]).
inline ValueIterationResult value_iteration(const ParameterModel& model,
                                            const IterationOptions& opt = {},
                                            const ValueIterationObserver& observer = {}) {
  if (opt.max_iters < 1) throw Error("value_iteration: max_iters must be >= 1");
  if (!(opt.tol > 0.0)) throw Error("value_iteration: tol must be positive");
  const Dims dm = dims(model);
  ValueIterationResult r{SymMatrix(dm.n), {}};
  if (observer) observer(0, r.k);
  for (std::size_t t = 1; t <= opt.max_iters; ++t) {
    SymMatrix next = pi_op(QMatrix(dm, expected_map(model, r.k)));
    const double step = one_norm(next - r.k);
    const double size = matrix_norm(next, Norm::two);
    double trace = 0.0;
    for (std::size_t i = 0; i < dm.n; ++i) trace += next(i, i);
    r.verdict.trace_log.push_back(trace);
    r.verdict.iterations = t;
    r.verdict.last_step = step;
    r.verdict.final_norm = size;
    r.k = std::move(next);
    if (observer) observer(t, r.k);
    if (size > opt.divergence_threshold) {
      r.verdict.verdict = Verdict::ill_posed;
      return r;
    }
    if (step <= opt.tol) {
      r.verdict.verdict = Verdict::well_posed;
      return r;
    }
  }
  r.verdict.verdict = Verdict::inconclusive;
  return r;
}

struct RiccatiSolution {
  QMatrix q_star;
  SymMatrix k;    // Pi(q_star)
  Matrix gain;    // Gamma(q_star)
  std::size_t iterations = 0;
  double residual = 0.0;  // |Phi(q_star) - q_star|_1
};

class AreUnsolvable : public Error {
 public:
  AreUnsolvable(const std::string& what, WellPosedVerdict verdict)
      : Error(what), verdict_(std::move(verdict)) {}
  const WellPosedVerdict& verdict() const { return verdict_; }

 private:
  WellPosedVerdict verdict_;
};

/// Fixed-point iteration Q_{k+1} = Phi(Q_k) from Q_0 = E[N].
inline RiccatiSolution solve_fixed_point(const ParameterModel& model,
                                         const IterationOptions& opt = {1 << 16, 1e-12,
                                                                        kDivergenceThreshold}) {
  const Dims dm = dims(model);
  QMatrix q(dm, expected_cost(model));
  WellPosedVerdict v;
  for (std::size_t k = 1; k <= opt.max_iters; ++k) {
    QMatrix next = phi_expected(q, model);
    const double step = one_norm(next.mat() - q.mat());
    const double size = matrix_norm(next.mat(), Norm::two);
    v.iterations = k;
    v.last_step = step;
    v.final_norm = size;
    q = std::move(next);
    if (size > opt.divergence_threshold) {
      v.verdict = Verdict::ill_posed;
      throw AreUnsolvable("ARE unsolvable: fixed-point iterates exceeded " +
                              std::to_string(opt.divergence_threshold) + " after " +
                              std::to_string(k) + " iterations",
                          v);
    }
    if (step <= opt.tol) {
      RiccatiSolution s;
      s.k = pi_op(q);
      s.gain = gamma_op(q);
      s.iterations = k;
      s.residual = one_norm(phi_expected(q, model).mat() - q.mat());
      s.q_star = std::move(q);
      return s;
    }
  }
  v.verdict = Verdict::inconclusive;
  throw AreUnsolvable("ARE unsolvable: no convergence within " +
                          std::to_string(opt.max_iters) + " iterations",
                      v);
}

class BracketError : public Error {
 public:
  using Error::Error;
};

class InconclusiveProbe : public Error {
 public:
  InconclusiveProbe(const std::string& what, double rho) : Error(what), rho_(rho) {}
  double rho() const { return rho_; }

 private:
  double rho_;
};

struct DiscountProbe {
  double rho = 0.0;
  Verdict verdict = Verdict::inconclusive;
  std::size_t iterations = 0;
};

struct CriticalResult {
  double rho_max = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<DiscountProbe> probes;
  std::vector<std::pair<double, double>> brackets;  // after each probe
};

/// Bisection on the discount rate using value-iteration verdicts. Monte Carlo
/// models reuse their stored moments at every probe.
inline CriticalResult critical_discount(const ParameterModel& model, double rho_lo,
                                        double rho_hi, double bisect_tol = 1e-4,
                                        const IterationOptions& opt = {200000, 1e-9,
                                                                       kDivergenceThreshold}) {
  if (!(rho_lo > 0.0) || !(rho_hi > rho_lo)) {
    throw BracketError("bracket does not straddle criticality: need 0 < lo < hi");
  }
  if (!(bisect_tol > 0.0)) throw Error("bisect_tol must be positive");
  CriticalResult r;
  auto probe = [&](double rho) {
    const auto vi = value_iteration(with_discount(model, rho), opt);
    r.probes.push_back({rho, vi.verdict.verdict, vi.verdict.iterations});
    if (vi.verdict.verdict == Verdict::inconclusive) {
      throw InconclusiveProbe("inconclusive verdict at rho = " + std::to_string(rho) +
                                  "; raise max_iters",
                              rho);
    }
    return vi.verdict.verdict;
  };
  if (probe(rho_lo) != Verdict::well_posed) {
    throw BracketError("bracket does not straddle criticality: ill-posed at lower bracket " +
                       std::to_string(rho_lo));
  }
  if (probe(rho_hi) != Verdict::ill_posed) {
    throw BracketError("bracket does not straddle criticality: well-posed at upper bracket " +
                       std::to_string(rho_hi));
  }
  double lo = rho_lo;
  double hi = rho_hi;
  r.brackets.emplace_back(lo, hi);
  while (hi - lo > bisect_tol) {
    const double mid = 0.5 * (lo + hi);
    if (probe(mid) == Verdict::well_posed) {
      lo = mid;
    } else {
      hi = mid;
    }
    r.brackets.emplace_back(lo, hi);
  }
  r.lo = lo;
  r.hi = hi;
  r.rho_max = 0.5 * (lo + hi);
  return r;
}

}  // namespace rlq
