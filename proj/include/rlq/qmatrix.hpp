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

// State-control value matrices and the two block operators built on them:
//
//   Pi(P)    = P_xx - P_xu P_uu^+ P_ux    (generalized Schur complement)
//   Gamma(P) = -P_uu^+ P_ux               (minimizing feedback gain)
//
// For any x, v = Gamma(P) x minimizes [x; v]^T P [x; v] over v whenever P_uu
// is invertible, and the minimum equals x^T Pi(P) x.

#pragma once

#include <cstddef>
#include <string>

#include "rlq/errors.hpp"
#include "rlq/matrix.hpp"

namespace rlq {

struct Dims {
  std::size_t n = 0;  // state
  std::size_t m = 0;  // control
  std::size_t d() const { return n + m; }
  friend bool operator==(const Dims&, const Dims&) = default;
};

inline constexpr double kPsdClampTol = 1e-10;

/// Symmetric PSD matrix of size n+m partitioned into xx, xu, ux, uu blocks.
/// Eigenvalues in [-1e-10 * max(1, |Q|_2), 0) are clamped to zero on
/// construction; anything more negative is rejected.
class QMatrix {
 public:
  QMatrix() = default;

  QMatrix(Dims dims, const SymMatrix& m) : dims_(dims), mat_(m) {
    if (m.dim() != dims.d()) {
      throw DimensionMismatch("QMatrix of dims n=" + std::to_string(dims.n) + ", m=" +
                              std::to_string(dims.m) + " given a " +
                              std::to_string(m.dim()) + "-dimensional matrix");
    }
    if (m.dim() == 0) return;
    const EigenDecomp e = sym_eig(m);
    const double scale =
        std::max({1.0, std::abs(e.values.front()), std::abs(e.values.back())});
    const double floor = -kPsdClampTol * scale;
    if (e.values.front() < floor) {
      throw NotPositiveSemidefinite("matrix has eigenvalue " +
                                    std::to_string(e.values.front()) +
                                    " below the PSD tolerance: " + m.matrix().to_string());
    }
    if (e.values.front() < 0.0) {
      mat_ = spectral_map(e, [](double l) { return l < 0.0 ? 0.0 : l; });
    }
  }

  static QMatrix zero(Dims dims) { return QMatrix(dims, SymMatrix(dims.d())); }

  Dims dims() const { return dims_; }
  const SymMatrix& mat() const { return mat_; }
  double operator()(std::size_t i, std::size_t j) const { return mat_(i, j); }

  SymMatrix xx() const { return SymMatrix(mat_.matrix().block(0, 0, dims_.n, dims_.n)); }
  Matrix xu() const { return mat_.matrix().block(0, dims_.n, dims_.n, dims_.m); }
  Matrix ux() const { return mat_.matrix().block(dims_.n, 0, dims_.m, dims_.n); }
  SymMatrix uu() const {
    return SymMatrix(mat_.matrix().block(dims_.n, dims_.n, dims_.m, dims_.m));
  }

 private:
  Dims dims_;
  SymMatrix mat_;
};

/// Pi(Q) = Q_xx - Q_xu Q_uu^+ Q_ux, an n x n PSD matrix.
inline SymMatrix pi_op(const QMatrix& q) {
  if (q.dims().m == 0) return q.xx();
  const SymMatrix uu_pinv = pinv_psd(q.uu());
  const Matrix xu = q.xu();
  return SymMatrix(q.xx().matrix() - xu * uu_pinv.matrix() * xu.transposed());
}

/// Gamma(Q) = -Q_uu^+ Q_ux, an m x n gain.
inline Matrix gamma_op(const QMatrix& q) {
  if (q.dims().m == 0) return Matrix(0, q.dims().n);
  return -(pinv_psd(q.uu()).matrix() * q.ux());
}

}  // namespace rlq
