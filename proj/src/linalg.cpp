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

#include "mvfhe/linalg.hpp"

#include <algorithm>
#include <utility>

namespace mvfhe {

namespace {

constexpr int128 kLazyLimit = int128(1) << 125;

inline void accumulate(int128& acc, std::int64_t a, std::int64_t b, std::uint64_t q) {
  acc += static_cast<int128>(a) * b;
  if (acc > kLazyLimit || acc < -kLazyLimit) acc %= static_cast<int128>(q);
}

// Reduced row echelon form of `m` in place, values kept in [0, q). Returns
// the pivot column of each pivot row.
std::vector<std::size_t> rref(MatrixZq& m, std::size_t pivot_cols, const Modulus& q) {
  const std::uint64_t p = q.value();
  for (auto& x : m.data()) {
    x %= static_cast<std::int64_t>(p);
    if (x < 0) x += p;
  }
  auto mulp = [p](std::int64_t a, std::int64_t b) {
    return static_cast<std::int64_t>(static_cast<int128>(a) * b % p);
  };
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t c = 0; c < pivot_cols && row < m.rows(); ++c) {
    std::size_t sel = row;
    while (sel < m.rows() && m(sel, c) == 0) ++sel;
    if (sel == m.rows()) continue;
    if (sel != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(sel, j), m(row, j));
    const std::int64_t inv = q.inv(m(row, c));
    for (std::size_t j = 0; j < m.cols(); ++j) m(row, j) = mulp(m(row, j), inv < 0 ? inv + p : inv);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, c) == 0) continue;
      const std::int64_t f = m(i, c);
      for (std::size_t j = 0; j < m.cols(); ++j) {
        std::int64_t v = m(i, j) - mulp(f, m(row, j));
        m(i, j) = v < 0 ? v + static_cast<std::int64_t>(p) : v;
      }
    }
    pivots.push_back(c);
    ++row;
  }
  return pivots;
}

}  // namespace

MatrixZq mul_mod(const MatrixZq& a, const MatrixZq& b, const Modulus& q) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product: inner dimensions differ");
  MatrixZq out(a.rows(), b.cols(), 0);
  std::vector<int128> acc(b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const std::int64_t x = a(i, k);
      if (x == 0) continue;
      const std::int64_t* brow = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) accumulate(acc[j], x, brow[j], q.value());
    }
    for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) = q.reduce(acc[j]);
  }
  return out;
}

VectorZq mul_mod(const VectorZq& v, const MatrixZq& a, const Modulus& q) {
  if (v.size() != a.rows()) throw DimensionError("vector-matrix product: length != rows");
  std::vector<int128> acc(a.cols(), 0);
  for (std::size_t k = 0; k < a.rows(); ++k) {
    if (v[k] == 0) continue;
    const std::int64_t* arow = a.row(k);
    for (std::size_t j = 0; j < a.cols(); ++j) accumulate(acc[j], v[k], arow[j], q.value());
  }
  VectorZq out(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) out[j] = q.reduce(acc[j]);
  return out;
}

MatrixZq reduce_mod(const MatrixZq& a, const Modulus& q) {
  MatrixZq out = a;
  for (auto& x : out.data()) x = q.reduce(static_cast<int128>(x));
  return out;
}

MatrixZq inverse_mod_q(const MatrixZq& a, const Modulus& q) {
  if (a.rows() != a.cols()) throw DimensionError("inverse of a non-square matrix");
  const std::size_t n = a.rows();
  MatrixZq aug(n, 2 * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = 1;
  }
  auto pivots = rref(aug, n, q);
  for (std::size_t c = 0; c < n; ++c) {
    if (c >= pivots.size() || pivots[c] != c) {
      throw SingularMatrixError("matrix is singular modulo q (no pivot in column " +
                                    std::to_string(c) + ")",
                                c);
    }
  }
  MatrixZq inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = q.reduce(static_cast<int128>(aug(i, n + j)));
  return inv;
}

MatrixZq solve_mod_q(const MatrixZq& a, const MatrixZq& y, const Modulus& q) {
  if (a.rows() != y.rows()) throw DimensionError("solve: row counts differ");
  const std::size_t k = a.cols();
  MatrixZq aug(a.rows(), k + y.cols(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < k; ++j) aug(i, j) = a(i, j);
    for (std::size_t j = 0; j < y.cols(); ++j) aug(i, k + j) = y(i, j);
  }
  auto pivots = rref(aug, k, q);
  for (std::size_t i = pivots.size(); i < aug.rows(); ++i)
    for (std::size_t j = k; j < aug.cols(); ++j)
      if (aug(i, j) != 0) throw InconsistentSystemError("linear system has no solution modulo q");
  MatrixZq x(k, y.cols(), 0);
  for (std::size_t r = 0; r < pivots.size(); ++r)
    for (std::size_t j = 0; j < y.cols(); ++j)
      x(pivots[r], j) = q.reduce(static_cast<int128>(aug(r, k + j)));
  return x;
}

std::size_t rank_mod_q(const MatrixZq& a, const Modulus& q) {
  MatrixZq m = a;
  return rref(m, m.cols(), q).size();
}

MatrixQ to_rational(const MatrixZq& a) {
  MatrixQ out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = Rational(static_cast<long>(a(i, j)));
  return out;
}

}  // namespace mvfhe
