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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mvfhe/errors.hpp"
#include "mvfhe/keys.hpp"
#include "mvfhe/linalg.hpp"

using namespace mvfhe;

namespace {

const Modulus kQ(1018885236427ULL);

MatrixZq random_matrix(std::size_t r, std::size_t c, Rng& rng, const Modulus& q = kQ) {
  MatrixZq m(r, c);
  for (auto& x : m.data()) x = rng.uniform_residue(q);
  return m;
}

// Schoolbook product in BigInt, reduced at the end.
MatrixZq product_oracle(const MatrixZq& a, const MatrixZq& b, const Modulus& q) {
  MatrixZq out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      BigInt acc = 0;
      for (std::size_t k = 0; k < a.cols(); ++k) acc += BigInt(static_cast<long>(a(i, k))) * static_cast<long>(b(k, j));
      out(i, j) = q.reduce(acc);
    }
  return out;
}

Rational random_rational(Rng& rng) {
  Rational r(BigInt(static_cast<long>(rng.uniform_int(-50, 50))), BigInt(static_cast<long>(rng.uniform_int(1, 9))));
  r.canonicalize();
  return r;
}

Tensor3Q random_tensor(std::size_t a, std::size_t b, std::size_t c, Rng& rng) {
  Tensor3Q t(a, b, c);
  for (auto& x : t.data()) x = rng.coin() ? random_rational(rng) : Rational(0);
  return t;
}

MatrixQ random_rational_matrix(std::size_t r, std::size_t c, Rng& rng) {
  MatrixQ m(r, c);
  for (auto& x : m.data()) x = random_rational(rng);
  return m;
}

}  // namespace

TEST_CASE("products match schoolbook arithmetic") {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_matrix(7, 9, rng), b = random_matrix(9, 5, rng);
    CHECK(mul_mod(a, b, kQ) == product_oracle(a, b, kQ));
    VectorZq v(7);
    for (auto& x : v) x = rng.uniform_residue(kQ);
    MatrixZq vm(1, 7);
    vm.data() = v;
    CHECK(mul_mod(v, a, kQ) == product_oracle(vm, a, kQ).data());
  }
  CHECK_THROWS_AS(mul_mod(MatrixZq(2, 3), MatrixZq(2, 3), kQ), DimensionError);
}

TEST_CASE("inverse") {
  Rng rng(2);
  for (std::size_t n : {1u, 2u, 6u, 15u}) {
    const auto a = random_matrix(n, n, rng);
    const auto inv = inverse_mod_q(a, kQ);
    CHECK(mul_mod(a, inv, kQ) == MatrixZq::identity(n));
    CHECK(mul_mod(inv, a, kQ) == MatrixZq::identity(n));
  }
  MatrixZq s = random_matrix(4, 4, rng);
  for (std::size_t i = 0; i < 4; ++i) s(i, 2) = kQ.add(s(i, 0), s(i, 1));
  try {
    inverse_mod_q(s, kQ);
    FAIL("singular matrix was inverted");
  } catch (const SingularMatrixError& e) {
    CHECK(e.column() == 2);
  }
}

TEST_CASE("solve and rank") {
  Rng rng(3);
  // Rank-3 matrix of size 6 x 5 as a product of random factors.
  const auto left = random_matrix(6, 3, rng), right = random_matrix(3, 5, rng);
  const auto a = mul_mod(left, right, kQ);
  CHECK(rank_mod_q(a, kQ) == 3);
  CHECK(rank_mod_q(MatrixZq(4, 4, 0), kQ) == 0);
  CHECK(rank_mod_q(random_matrix(5, 8, rng), kQ) == 5);

  // Consistent right-hand sides lie in the column space.
  const auto x0 = random_matrix(5, 2, rng);
  const auto y = mul_mod(a, x0, kQ);
  const auto x = solve_mod_q(a, y, kQ);
  CHECK(mul_mod(a, x, kQ) == y);

  MatrixZq bad = y;
  bad(0, 0) = kQ.add(bad(0, 0), 1);
  // A generic perturbation leaves the column space of a rank-3 map in Z_q^6.
  CHECK_THROWS_AS(solve_mod_q(a, bad, kQ), InconsistentSystemError);
}

TEST_CASE("n-mode product matches triple loops") {
  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t d1 = 1 + rng.uniform_below(8), d2 = 1 + rng.uniform_below(8),
                      d3 = 1 + rng.uniform_below(8);
    const auto t = random_tensor(d1, d2, d3, rng);
    for (int mode = 1; mode <= 3; ++mode) {
      const std::size_t dm = mode == 1 ? d1 : mode == 2 ? d2 : d3;
      const auto x = random_rational_matrix(1 + rng.uniform_below(8), dm, rng);
      const auto out = n_mode_product(t, x, mode);
      for (std::size_t i = 0; i < out.dim(1); ++i)
        for (std::size_t j = 0; j < out.dim(2); ++j)
          for (std::size_t k = 0; k < out.dim(3); ++k) {
            Rational want = 0;
            for (std::size_t s = 0; s < dm; ++s) {
              if (mode == 1) want += t(s, j, k) * x(i, s);
              if (mode == 2) want += t(i, s, k) * x(j, s);
              if (mode == 3) want += t(i, j, s) * x(k, s);
            }
            CHECK(out(i, j, k) == want);
          }
    }
  }
  CHECK_THROWS_AS(n_mode_product(Tensor3Q(2, 2, 2), MatrixQ(2, 3), 1), DimensionError);
}

TEST_CASE("bilinear evaluation matches triple loops") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d1 = 1 + rng.uniform_below(8), d2 = 1 + rng.uniform_below(8),
                      d3 = 1 + rng.uniform_below(8);
    const auto t = random_tensor(d1, d2, d3, rng);
    VectorQ v1(d1), v2(d2);
    for (auto& x : v1) x = random_rational(rng);
    for (auto& x : v2) x = random_rational(rng);
    const auto out = bilinear_eval(t, v1, v2);
    for (std::size_t k = 0; k < d3; ++k) {
      Rational want = 0;
      for (std::size_t i = 0; i < d1; ++i)
        for (std::size_t j = 0; j < d2; ++j) want += v1[i] * t(i, j, k) * v2[j];
      CHECK(out[k] == want);
    }
  }
}

TEST_CASE("tensor U and the T slice pattern for n = 2, ell = 4") {
  const std::size_t n = 2, ell = 4, t = 7;
  const std::uint64_t q = 1000003;
  const auto U = tensor_U(n, ell, t, q);
  const Rational two_over_q(BigInt(2), BigInt(static_cast<unsigned long>(q)));
  for (std::size_t k = 0; k < t; ++k)
    for (std::size_t i = 0; i < t; ++i)
      for (std::size_t j = 0; j < t; ++j) {
        Rational want = 0;
        if (i == k && j == k) want = (k >= n && k < ell) ? two_over_q : Rational(1);
        CHECK(U(i, j, k) == want);
      }

  Rng rng(6);
  MatrixQ A(ell, t, Rational(0));
  for (std::size_t i = 0; i < ell; ++i) A(i, i) = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = ell; k < t; ++k) A(i, k) = Rational(static_cast<long>(rng.uniform_int(-99, 99)));
  const auto T = tensor_T(U, A);
  REQUIRE(T.dim(1) == ell);
  REQUIRE(T.dim(2) == ell);
  REQUIRE(T.dim(3) == t);
  for (std::size_t k = 0; k < t; ++k)
    for (std::size_t i = 0; i < ell; ++i)
      for (std::size_t j = 0; j < ell; ++j) {
        Rational want = 0;
        if (k < n) {
          want = (i == k && j == k) ? Rational(1) : Rational(0);
        } else if (k < ell) {
          want = (i == k && j == k) ? two_over_q : Rational(0);
        } else if (i < n && j < n) {
          want = A(i, k) * A(j, k);  // alpha alpha^T block
        }
        CHECK(T(i, j, k) == want);
      }
}
