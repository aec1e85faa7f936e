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
#include "mvfhe/mvpoly.hpp"
#include "mvfhe/params.hpp"

using namespace mvfhe;

namespace {

const Modulus kQ(1000003);

Polynomial random_poly(std::size_t v, std::uint32_t deg, Rng& rng) {
  Polynomial f(v, kQ);
  for (const auto& m : enumerate_monomials(v, deg)) f.add_term(m, rng.uniform_residue(kQ));
  return f;
}

Monomial mono(std::vector<std::uint32_t> e) { return Monomial(std::move(e)); }

}  // namespace

TEST_CASE("degrevlex order in two variables") {
  const auto ms = enumerate_monomials(2, 2);
  const std::vector<Monomial> expected = {mono({0, 0}), mono({0, 1}), mono({1, 0}),
                                          mono({0, 2}), mono({1, 1}), mono({2, 0})};
  CHECK(ms == expected);
}

TEST_CASE("degrevlex order in three variables") {
  DegRevLexLess less;
  // Same degree: the larger exponent in the last differing variable is smaller.
  CHECK(less(mono({0, 0, 2}), mono({1, 0, 1})));
  CHECK(less(mono({1, 0, 1}), mono({0, 2, 0})));
  CHECK(less(mono({0, 2, 0}), mono({1, 1, 0})));
  CHECK(less(mono({1, 1, 0}), mono({2, 0, 0})));
  CHECK(less(mono({5, 0, 0}), mono({0, 0, 6})));
  CHECK_FALSE(less(mono({1, 1, 0}), mono({1, 1, 0})));
}

TEST_CASE("monomial counts are binomial") {
  for (std::size_t v = 1; v <= 4; ++v)
    for (std::uint32_t r = 0; r <= 5; ++r) {
      CHECK(enumerate_monomials(v, r).size() == binomial(v + r, r));
      std::size_t sum = 0;
      for (std::uint32_t d = 0; d <= r; ++d) sum += monomials_of_degree(v, d).size();
      CHECK(sum == binomial(v + r, r));
    }
}

TEST_CASE("ring operations agree with evaluation") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Polynomial f = random_poly(2, 3, rng), g = random_poly(2, 2, rng);
    const std::vector<std::int64_t> z = {rng.uniform_residue(kQ), rng.uniform_residue(kQ)};
    CHECK(eval(f * g, z) == eval(f, z) * eval(g, z));
    CHECK(eval(f + g, z) == eval(f, z) + eval(g, z));
    CHECK(eval(f - g, z) == eval(f, z) - eval(g, z));
    CHECK(eval(f.scaled(7), z) == eval(f, z) * balanced_mod(7, kQ.value()));
    CHECK((f * g).degree() == 5);
    CHECK(poly_mul(f, g) == f * g);
    CHECK(poly_add(f, g) == f + g);
  }
}

TEST_CASE("coefficients cancel") {
  Polynomial f(2, kQ);
  f.add_term(mono({1, 0}), 5);
  f.add_term(mono({1, 0}), -5);
  CHECK(f.is_zero());
  CHECK(f.degree() == -1);
  CHECK_THROWS_AS(leading_term(f), ParameterError);
  CHECK_THROWS_AS(Polynomial(2, kQ) + Polynomial(3, kQ), DimensionError);
}

TEST_CASE("leading term") {
  Polynomial f(2, kQ);
  f.add_term(mono({0, 2}), 4);
  f.add_term(mono({1, 1}), 9);
  f.add_term(mono({0, 0}), 1);
  const auto [m, c] = leading_term(f);
  CHECK(m == mono({1, 1}));
  CHECK(c.value == 9);
}

TEST_CASE("reduction by multiples of a linear generator") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    // g = x1 + a x2 + b; its zero set is {(-a s - b, s)}.
    const std::int64_t a = rng.uniform_residue(kQ), b = rng.uniform_residue(kQ);
    Polynomial g(2, kQ);
    g.add_term(mono({1, 0}), 1);
    g.add_term(mono({0, 1}), a);
    g.add_term(mono({0, 0}), b);
    const std::uint32_t r = 3;
    std::vector<Polynomial> G;
    for (const auto& m : monomials_of_degree(2, r)) G.push_back(g * Polynomial::monomial(m, 1, kQ));

    // Ideal elements plus a low-degree part; pure x2 powers above degree r
    // have no divisor among the heads x1 m.
    const Polynomial f = g * random_poly(2, 5, rng) + random_poly(2, r, rng);
    const Polynomial h = g * random_poly(2, 5, rng) + random_poly(2, r, rng);
    const Polynomial fg = reduce_by_set(f, G, static_cast<int>(r));
    CHECK(fg.degree() <= static_cast<int>(r));
    // f - f_G lies in <g>, so f and f_G agree on the zero set of g.
    for (int k = 0; k < 10; ++k) {
      const std::int64_t s = rng.uniform_residue(kQ);
      const std::vector<std::int64_t> z = {kQ.sub(kQ.neg(kQ.mul(a, s)), b), s};
      REQUIRE(eval(g, z).value == 0);
      CHECK(eval(f, z) == eval(fg, z));
    }
    // Linear in f.
    CHECK(reduce_by_set(f + h, G, static_cast<int>(r)) == fg + reduce_by_set(h, G, static_cast<int>(r)));
    CHECK(reduce_by_set(f.scaled(11), G, static_cast<int>(r)) == fg.scaled(11));
  }
}

TEST_CASE("reduction stalls without a divisor") {
  Polynomial g(2, kQ);
  g.add_term(mono({0, 1}), 1);
  Polynomial f(2, kQ);
  f.add_term(mono({3, 0}), 1);
  CHECK_THROWS_AS(reduce_by_set(f, {g}, 1), ConstructionError);
}

TEST_CASE("text round trip") {
  Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const Polynomial f = random_poly(3, 3, rng);
    CHECK(parse_polynomial(to_string(f), 3, kQ) == f);
  }
  Polynomial f(2, kQ);
  f.add_term(mono({1, 1}), 3);
  f.add_term(mono({0, 0}), -2);
  CHECK(to_string(f) == "3*x1*x2 - 2");
  CHECK(to_string(Polynomial(2, kQ)) == "0");
  CHECK_THROWS_AS(parse_polynomial("3*y1", 2, kQ), FormatError);
  CHECK_THROWS_AS(parse_polynomial("x3", 2, kQ), FormatError);
}
