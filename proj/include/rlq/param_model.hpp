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

// Distributions over the i.i.d. parameter pair [A^T, N].
//
// A is n x (n+m) and maps [x; u] to the next state; N is the (n+m) x (n+m)
// PSD stage-cost weight. A discount rate rho is folded in by scaling A, so a
// discounted problem is handled as an undiscounted one with rho * A.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rlq/errors.hpp"
#include "rlq/matrix.hpp"
#include "rlq/qmatrix.hpp"
#include "rlq/rng.hpp"

namespace rlq {

struct ParameterSample {
  Matrix a;          // n x d
  SymMatrix n_cost;  // d x d, PSD
};

/// Zero-mean, unit-variance scalar laws usable in analytic models.
enum class NoiseKind { standard_normal, centered_uniform };

/// Primitive noises fed to a general sampler.
enum class PrimitiveNoise { standard_normal, uniform01 };

inline double draw(NoiseKind kind, RngStream& rng) {
  return kind == NoiseKind::standard_normal ? rng.normal() : rng.centered_uniform();
}

inline double draw(PrimitiveNoise kind, RngStream& rng) {
  return kind == PrimitiveNoise::standard_normal ? rng.normal() : rng.uniform();
}

struct NoiseTerm {
  Matrix a;
  NoiseKind noise = NoiseKind::standard_normal;
};

inline constexpr std::size_t kDefaultMcSamples = 200000;
inline constexpr std::uint64_t kDefaultMcSeed = 20240917;

namespace detail {

inline void check_discount(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw InvalidModel("discount must be a positive finite number, got " + std::to_string(rho));
  }
}

inline void check_psd_cost(const SymMatrix& n, const char* what) {
  if (n.dim() == 0) return;
  const EigenDecomp e = sym_eig(n);
  const double lo = e.values.front();
  if (lo < -kDefaultPsdTol * std::max({1.0, -lo, e.values.back()})) {
    throw InvalidModel(std::string(what) + ": cost matrix is not PSD (min eigenvalue " +
                       std::to_string(lo) + ")");
  }
}

}  // namespace detail

/// A(w) = rho * (A0 + sum_i w_i A_i) with independent zero-mean unit-variance
/// w_i and a constant cost N. Its expectations are exact:
/// E[N + A^T M A] = N + rho^2 sum_{i>=0} A_i^T M A_i.
class NoiseAffineModel {
 public:
  NoiseAffineModel(Dims dims, Matrix base_a, std::vector<NoiseTerm> terms, SymMatrix n_const,
                   double discount = 1.0)
      : dims_(dims),
        base_a_(std::move(base_a)),
        terms_(std::move(terms)),
        n_const_(std::move(n_const)),
        discount_(discount) {
    auto check_a = [&](const Matrix& a) {
      if (a.rows() != dims_.n || a.cols() != dims_.d()) {
        throw DimensionMismatch("system matrix must be " + std::to_string(dims_.n) + "x" +
                                std::to_string(dims_.d()) + ", got " + a.shape());
      }
      if (!a.all_finite()) throw NonFiniteValue("non-finite system matrix entry");
    };
    check_a(base_a_);
    for (const auto& t : terms_) check_a(t.a);
    if (n_const_.dim() != dims_.d()) {
      throw DimensionMismatch("cost matrix must be " + std::to_string(dims_.d()) +
                              "-dimensional");
    }
    detail::check_psd_cost(n_const_, "noise-affine model");
    detail::check_discount(discount_);
  }

  Dims dims() const { return dims_; }
  const Matrix& base_a() const { return base_a_; }
  const std::vector<NoiseTerm>& terms() const { return terms_; }
  const SymMatrix& n_const() const { return n_const_; }
  double discount() const { return discount_; }

  NoiseAffineModel with_discount(double rho) const {
    NoiseAffineModel copy = *this;
    detail::check_discount(rho);
    copy.discount_ = rho;
    return copy;
  }

  ParameterSample sample(RngStream& rng) const {
    Matrix a = base_a_;
    for (const auto& t : terms_) a += draw(t.noise, rng) * t.a;
    a *= discount_;
    return {std::move(a), n_const_};
  }

  SymMatrix expected_map(const SymMatrix& mid) const {
    if (mid.dim() != dims_.n) throw DimensionMismatch("middle matrix must be n x n");
    Matrix acc = sandwich(base_a_, mid).matrix();
    for (const auto& t : terms_) acc += sandwich(t.a, mid).matrix();
    return SymMatrix(n_const_.matrix() + (discount_ * discount_) * acc);
  }

 private:
  Dims dims_;
  Matrix base_a_;
  std::vector<NoiseTerm> terms_;
  SymMatrix n_const_;
  double discount_;
};

/// First and second moments of an undiscounted sampler, estimated once by
/// Monte Carlo. Because E[N + A^T M A] is linear in M, one table serves every
/// middle matrix and every discount, which gives common random numbers across
/// all evaluations of the same model.
struct MomentTable {
  SymMatrix mean_n;
  /// (n*d) x (n*d): entry (k*d + i, l*d + j) = E[A_ki A_lj].
  Matrix second_a;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

/// A = rho * f(w), N = g(w) for an arbitrary deterministic map of a fixed
/// vector of primitive noises.
class GeneralSamplerModel {
 public:
  using Sampler = std::function<ParameterSample(std::span<const double>)>;

  GeneralSamplerModel(Dims dims, std::vector<PrimitiveNoise> noises, Sampler sampler,
                      double discount = 1.0, std::size_t mc_samples = kDefaultMcSamples,
                      std::uint64_t mc_seed = kDefaultMcSeed)
      : dims_(dims),
        noises_(std::move(noises)),
        sampler_(std::move(sampler)),
        discount_(discount) {
    detail::check_discount(discount_);
    if (!sampler_) throw InvalidModel("general model needs a sampler");
    if (mc_samples < 2) {
      throw InsufficientSamples("insufficient samples: Monte Carlo expectation needs at least 2 "
                                "draws, got " + std::to_string(mc_samples));
    }
    moments_ = std::make_shared<const MomentTable>(estimate_moments(mc_samples, mc_seed));
  }

  Dims dims() const { return dims_; }
  const std::vector<PrimitiveNoise>& noises() const { return noises_; }
  double discount() const { return discount_; }
  const MomentTable& moments() const { return *moments_; }

  GeneralSamplerModel with_discount(double rho) const {
    GeneralSamplerModel copy = *this;
    detail::check_discount(rho);
    copy.discount_ = rho;
    return copy;
  }

  /// Undiscounted sample for a given noise vector.
  ParameterSample evaluate(std::span<const double> noise) const {
    if (noise.size() != noises_.size()) {
      throw DimensionMismatch("sampler expects " + std::to_string(noises_.size()) + " noises");
    }
    ParameterSample s = sampler_(noise);
    if (s.a.rows() != dims_.n || s.a.cols() != dims_.d() || s.n_cost.dim() != dims_.d()) {
      throw DimensionMismatch("sampler returned wrongly shaped sample");
    }
    if (!s.a.all_finite()) throw InvalidModel("invalid model sample: non-finite A");
    detail::check_psd_cost(s.n_cost, "invalid model sample");
    return s;
  }

  ParameterSample sample(RngStream& rng) const {
    std::vector<double> w(noises_.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = draw(noises_[i], rng);
    ParameterSample s = evaluate(w);
    s.a *= discount_;
    return s;
  }

  SymMatrix expected_map(const SymMatrix& mid) const {
    if (mid.dim() != dims_.n) throw DimensionMismatch("middle matrix must be n x n");
    const std::size_t n = dims_.n;
    const std::size_t d = dims_.d();
    const double scale = discount_ * discount_;
    Matrix out = moments_->mean_n.matrix();
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k)
          for (std::size_t l = 0; l < n; ++l) s += mid(k, l) * moments_->second_a(k * d + i, l * d + j);
        out(i, j) += scale * s;
      }
    return SymMatrix(out);
  }

 private:
  MomentTable estimate_moments(std::size_t samples, std::uint64_t seed) const {
    const std::size_t n = dims_.n;
    const std::size_t d = dims_.d();
    RngStream rng(seed, streams::kMoments);
    Matrix sum_n(d, d);
    Matrix sum_aa(n * d, n * d);
    std::vector<double> w(noises_.size());
    for (std::size_t s = 0; s < samples; ++s) {
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = draw(noises_[i], rng);
      const ParameterSample p = evaluate(w);
      sum_n += p.n_cost.matrix();
      const auto a = p.a.data();
      for (std::size_t r = 0; r < n * d; ++r)
        for (std::size_t c = 0; c < n * d; ++c) sum_aa(r, c) += a[r] * a[c];
    }
    const double inv = 1.0 / static_cast<double>(samples);
    return {SymMatrix(inv * sum_n), inv * sum_aa, samples, seed};
  }

  Dims dims_;
  std::vector<PrimitiveNoise> noises_;
  Sampler sampler_;
  double discount_;
  std::shared_ptr<const MomentTable> moments_;
};

using ParameterModel = std::variant<NoiseAffineModel, GeneralSamplerModel>;

inline Dims dims(const ParameterModel& model) {
  return std::visit([](const auto& m) { return m.dims(); }, model);
}

inline double discount(const ParameterModel& model) {
  return std::visit([](const auto& m) { return m.discount(); }, model);
}

inline ParameterModel with_discount(const ParameterModel& model, double rho) {
  return std::visit([rho](const auto& m) -> ParameterModel { return m.with_discount(rho); },
                    model);
}

/// One i.i.d. draw of [A^T, N] with A already scaled by the discount.
inline ParameterSample sample(const ParameterModel& model, RngStream& rng) {
  return std::visit([&rng](const auto& m) { return m.sample(rng); }, model);
}

/// E[N + A^T mid A]: exact for noise-affine models, the stored Monte Carlo
/// moments for general ones.
inline SymMatrix expected_map(const ParameterModel& model, const SymMatrix& mid) {
  return std::visit([&mid](const auto& m) { return m.expected_map(mid); }, model);
}

inline SymMatrix expected_cost(const ParameterModel& model) {
  return expected_map(model, SymMatrix(dims(model).n));
}

struct MonteCarloEstimate {
  SymMatrix mean;
  Matrix std_error;  // entrywise standard error of the mean
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

/// Direct sample average of N + A^T mid A using fresh draws from rng.
inline MonteCarloEstimate expected_map_mc(const ParameterModel& model, const SymMatrix& mid,
                                          std::size_t samples, RngStream& rng) {
  if (samples < 2) {
    throw InsufficientSamples("insufficient samples: need at least 2, got " +
                              std::to_string(samples));
  }
  const std::size_t d = dims(model).d();
  Matrix sum(d, d);
  Matrix sum_sq(d, d);
  for (std::size_t s = 0; s < samples; ++s) {
    const ParameterSample p = sample(model, rng);
    const Matrix v = p.n_cost.matrix() + sandwich(p.a, mid).matrix();
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        sum(i, j) += v(i, j);
        sum_sq(i, j) += v(i, j) * v(i, j);
      }
  }
  const double count = static_cast<double>(samples);
  Matrix mean = (1.0 / count) * sum;
  Matrix se(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const double var = std::max(0.0, (sum_sq(i, j) - count * mean(i, j) * mean(i, j)) / (count - 1.0));
      se(i, j) = std::sqrt(var / count);
    }
  return {SymMatrix(mean), se, samples, rng.seed(), rng.stream_id()};
}

/// Sufficient-condition diagnostics for well-behaved learning.
struct MomentReport {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double eps0 = 0.0;            // min eigenvalue of E[N + A^T A]
  double mu0 = 0.0;             // E[|N|_2^2 + |A^T A|_2^2]
  double min_eig_mean_n = 0.0;  // min eigenvalue of E[N]
  double min_eig_phi_mean_n = 0.0;
  bool eps0_positive = false;
  bool mu0_finite = false;
  bool mean_n_positive_definite = false;
  bool phi_mean_n_positive_definite = false;

  /// Either E[N] > O or the weaker Phi(E[N]) > O.
  bool definiteness_ok() const {
    return mean_n_positive_definite || phi_mean_n_positive_definite;
  }
};

inline constexpr double kDefinitenessTol = 1e-9;

namespace detail {
inline bool positive_definite(const SymMatrix& m, double min_eig) {
  return min_eig > kDefinitenessTol * std::max(1.0, matrix_norm(m, Norm::two));
}
}  // namespace detail

inline MomentReport moment_check(const ParameterModel& model, std::size_t mc_samples,
                                 RngStream& rng) {
  if (mc_samples < 100) {
    throw InsufficientSamples("moment check needs at least 100 samples, got " +
                              std::to_string(mc_samples));
  }
  const Dims dm = dims(model);
  MomentReport r;
  r.samples = mc_samples;
  r.seed = rng.seed();

  Matrix sum(dm.d(), dm.d());
  double sum_mu = 0.0;
  for (std::size_t s = 0; s < mc_samples; ++s) {
    const ParameterSample p = sample(model, rng);
    const SymMatrix ata(p.a.transposed() * p.a);
    sum += p.n_cost.matrix() + ata.matrix();
    const double nn = matrix_norm(p.n_cost, Norm::two);
    const double aa = matrix_norm(ata, Norm::two);
    sum_mu += nn * nn + aa * aa;
  }
  const SymMatrix mean_nata((1.0 / static_cast<double>(mc_samples)) * sum);
  r.eps0 = min_eigenvalue(mean_nata);
  r.mu0 = sum_mu / static_cast<double>(mc_samples);
  r.eps0_positive = detail::positive_definite(mean_nata, r.eps0);
  r.mu0_finite = std::isfinite(r.mu0);

  const SymMatrix mean_n = expected_cost(model);
  r.min_eig_mean_n = min_eigenvalue(mean_n);
  r.mean_n_positive_definite = detail::positive_definite(mean_n, r.min_eig_mean_n);

  const SymMatrix phi_mean_n = expected_map(model, pi_op(QMatrix(dm, mean_n)));
  r.min_eig_phi_mean_n = min_eigenvalue(phi_mean_n);
  r.phi_mean_n_positive_definite = detail::positive_definite(phi_mean_n, r.min_eig_phi_mean_n);
  return r;
}

}  // namespace rlq
