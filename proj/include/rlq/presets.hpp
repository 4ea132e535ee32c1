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

// Built-in models for the three reference experiments. The same numbers ship
// as JSON under data/presets; tests check the two agree bit for bit.

#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "rlq/errors.hpp"
#include "rlq/matrix.hpp"
#include "rlq/param_model.hpp"
#include "rlq/qmatrix.hpp"

namespace rlq::presets {

inline constexpr Dims kEg1Dims{2, 1};

inline Matrix eg1_a0() { return {{-1.0, -0.1, -0.2}, {2.6, 0.5, 0.5}}; }
inline Matrix eg1_a1() { return {{0.6, 0.075, 0.125}, {-0.8, 0.1, -0.375}}; }
inline Matrix eg1_a2() { return {{-0.06, -0.06, 0.02}, {0.2, 0.23, -0.09}}; }

inline SymMatrix eg1_n() {
  return {{3.11, 1.5626, -0.2798}, {1.5626, 1.816175, -1.021425}, {-0.2798, -1.021425, 0.91585}};
}

/// Closed-form fixed point of the undiscounted eg1 problem.
inline QMatrix eg1_q_star() {
  return QMatrix(kEg1Dims, SymMatrix{{5.0, 2.0, 0.0}, {2.0, 2.0, -1.0}, {0.0, -1.0, 1.0}});
}

/// A_t = A0 + w1 A1 + w2 A2 with independent standard normal w, N constant.
inline NoiseAffineModel eg1(double discount = 1.0) {
  return NoiseAffineModel(kEg1Dims, eg1_a0(),
                          {{eg1_a1(), NoiseKind::standard_normal},
                           {eg1_a2(), NoiseKind::standard_normal}},
                          eg1_n(), discount);
}

/// Blocks of the stabilization sampler
///   A = exp(w1 w2) A1 - sin(w2) A2 - sqrt(w2 + w3) A3
///   B = (w4 - w5) B1 + cos(w4) B2
/// with w1..w5 ~ U(0, 1), and N = diag(I_n, O). A single w2 feeds both the
/// sin and the sqrt term.
struct ExpSinSqrtBlocks {
  Matrix a1, a2, a3;  // n x n
  Matrix b1, b2;      // n x m
};

inline constexpr const char* kExpSinSqrtSampler = "exp_sin_sqrt_cos";

inline GeneralSamplerModel exp_sin_sqrt_model(const ExpSinSqrtBlocks& blocks, double discount,
                                              std::size_t mc_samples, std::uint64_t mc_seed) {
  const std::size_t n = blocks.a1.rows();
  const std::size_t m = blocks.b1.cols();
  for (const Matrix* a : {&blocks.a1, &blocks.a2, &blocks.a3}) {
    if (a->rows() != n || a->cols() != n) throw DimensionMismatch("A blocks must be n x n");
  }
  for (const Matrix* b : {&blocks.b1, &blocks.b2}) {
    if (b->rows() != n || b->cols() != m) throw DimensionMismatch("B blocks must be n x m");
  }
  const Dims dm{n, m};
  Matrix n_cost(dm.d(), dm.d());
  for (std::size_t i = 0; i < n; ++i) n_cost(i, i) = 1.0;
  const SymMatrix cost(n_cost);

  auto sampler = [blocks, dm, cost](std::span<const double> w) {
    const Matrix a = std::exp(w[0] * w[1]) * blocks.a1 - std::sin(w[1]) * blocks.a2 -
                     std::sqrt(w[1] + w[2]) * blocks.a3;
    const Matrix b = (w[3] - w[4]) * blocks.b1 + std::cos(w[3]) * blocks.b2;
    Matrix ab(dm.n, dm.d());
    ab.set_block(0, 0, a);
    ab.set_block(0, dm.n, b);
    return ParameterSample{std::move(ab), cost};
  };
  return GeneralSamplerModel(dm, std::vector<PrimitiveNoise>(5, PrimitiveNoise::uniform01),
                             std::move(sampler), discount, mc_samples, mc_seed);
}

/// The 2x8 block [A1, A2, A3, B1, B2] scaled by 0.25.
inline ExpSinSqrtBlocks eg3_blocks() {
  constexpr double rho = 0.25;
  return {rho * Matrix{{-5.0, 2.0}, {2.0, 3.0}}, rho * Matrix{{0.0, -1.0}, {-4.0, 7.0}},
          rho * Matrix{{-2.0, 3.0}, {6.0, 0.0}}, rho * Matrix{{-1.0}, {1.0}},
          rho * Matrix{{1.0}, {0.0}}};
}

inline GeneralSamplerModel eg3(std::size_t mc_samples = kDefaultMcSamples,
                               std::uint64_t mc_seed = kDefaultMcSeed) {
  return exp_sin_sqrt_model(eg3_blocks(), 1.0, mc_samples, mc_seed);
}

}  // namespace rlq::presets
