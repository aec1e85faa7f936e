/*
 * Copyright 2026 The mvfhe Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MVFHE_LINALG_HPP_
#define MVFHE_LINALG_HPP_

#include <cstddef>
#include <vector>

#include "mvfhe/arith.hpp"
#include "mvfhe/errors.hpp"
#include "mvfhe/matrix.hpp"

namespace mvfhe {

// Dense linear algebra over Z_q. Inputs may hold any int64 representatives;
// outputs are balanced.

MatrixZq mul_mod(const MatrixZq& a, const MatrixZq& b, const Modulus& q);
// Row vector times matrix.
VectorZq mul_mod(const VectorZq& v, const MatrixZq& a, const Modulus& q);
MatrixZq reduce_mod(const MatrixZq& a, const Modulus& q);

// Throws SingularMatrixError naming the first column without a pivot.
MatrixZq inverse_mod_q(const MatrixZq& a, const Modulus& q);

// Some X with A X = Y. Free variables of a rank-deficient A are set to zero;
// an inconsistent system throws InconsistentSystemError.
MatrixZq solve_mod_q(const MatrixZq& a, const MatrixZq& y, const Modulus& q);

std::size_t rank_mod_q(const MatrixZq& a, const Modulus& q);

MatrixQ to_rational(const MatrixZq& a);

template <typename T>
Matrix<T> multiply(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product: inner dimensions differ");
  Matrix<T> out(a.rows(), b.cols(), T(0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += a(i, k) * b(k, j);
    }
  return out;
}

// (T x_mode X): the mode-th index i is replaced by j with weight X(j, i).
template <typename T>
Tensor3<T> n_mode_product(const Tensor3<T>& t, const Matrix<T>& x, int mode) {
  const std::size_t d[3] = {t.dim(1), t.dim(2), t.dim(3)};
  if (x.cols() != d[mode - 1]) throw DimensionError("n-mode product: matrix columns != tensor dim");
  std::size_t e[3] = {d[0], d[1], d[2]};
  e[mode - 1] = x.rows();
  Tensor3<T> out(e[0], e[1], e[2], T(0));
  for (std::size_t k = 0; k < d[2]; ++k)
    for (std::size_t i = 0; i < d[0]; ++i)
      for (std::size_t j = 0; j < d[1]; ++j) {
        const T& v = t(i, j, k);
        if (v == 0) continue;
        const std::size_t idx = mode == 1 ? i : mode == 2 ? j : k;
        for (std::size_t r = 0; r < x.rows(); ++r) {
          const T& w = x(r, idx);
          if (w == 0) continue;
          if (mode == 1) {
            out(r, j, k) += v * w;
          } else if (mode == 2) {
            out(i, r, k) += v * w;
          } else {
            out(i, j, r) += v * w;
          }
        }
      }
  return out;
}

// out_k = v1 * T_k * v2^T.
template <typename T>
std::vector<T> bilinear_eval(const Tensor3<T>& t, const std::vector<T>& v1,
                             const std::vector<T>& v2) {
  if (v1.size() != t.dim(1) || v2.size() != t.dim(2)) {
    throw DimensionError("bilinear evaluation: vector length != tensor dim");
  }
  std::vector<T> out(t.dim(3), T(0));
  for (std::size_t k = 0; k < t.dim(3); ++k) {
    T acc(0);
    for (std::size_t i = 0; i < t.dim(1); ++i) {
      if (v1[i] == 0) continue;
      T row(0);
      for (std::size_t j = 0; j < t.dim(2); ++j) {
        const T& w = t(i, j, k);
        if (w != 0) row += w * v2[j];
      }
      acc += v1[i] * row;
    }
    out[k] = acc;
  }
  return out;
}

}  // namespace mvfhe

#endif  // MVFHE_LINALG_HPP_
