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

#ifndef MVFHE_MVPOLY_HPP_
#define MVFHE_MVPOLY_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mvfhe/arith.hpp"

namespace mvfhe {

struct Monomial {
  std::vector<std::uint32_t> exponents;

  Monomial() = default;
  explicit Monomial(std::vector<std::uint32_t> e) : exponents(std::move(e)) {}
  static Monomial one(std::size_t v) { return Monomial(std::vector<std::uint32_t>(v, 0)); }

  std::size_t num_vars() const { return exponents.size(); }
  std::uint32_t total_degree() const;
  bool divides(const Monomial& other) const;
  Monomial operator*(const Monomial& other) const;
  // Requires divides(other) to hold in reverse: this / d.
  Monomial operator/(const Monomial& d) const;

  friend bool operator==(const Monomial&, const Monomial&) = default;
};

// Strict "a < b" in degree-reverse-lexicographic order: lower total degree
// first; among equal degrees the monomial with the larger exponent in the
// last differing variable is smaller.
struct DegRevLexLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

// All monomials in v variables of total degree <= r, ascending.
std::vector<Monomial> enumerate_monomials(std::size_t v, std::uint32_t r);
// Monomials of total degree exactly d, ascending.
std::vector<Monomial> monomials_of_degree(std::size_t v, std::uint32_t d);

// Sparse polynomial over Z_q; zero coefficients are never stored.
class Polynomial {
 public:
  using Terms = std::map<Monomial, std::int64_t, DegRevLexLess>;

  Polynomial(std::size_t num_vars, const Modulus& q) : v_(num_vars), q_(q) {}
  static Polynomial monomial(const Monomial& m, std::int64_t coeff, const Modulus& q);
  static Polynomial constant(std::size_t num_vars, std::int64_t c, const Modulus& q);

  std::size_t num_vars() const { return v_; }
  const Modulus& modulus() const { return q_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  // -1 for the zero polynomial.
  int degree() const;
  std::int64_t coeff(const Monomial& m) const;

  // Adds c * m, dropping the term if it cancels.
  void add_term(const Monomial& m, std::int64_t c);

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial scaled(std::int64_t c) const;

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.v_ == b.v_ && a.q_ == b.q_ && a.terms_ == b.terms_;
  }

 private:
  void check_compatible(const Polynomial& o) const;

  std::size_t v_;
  Modulus q_;
  Terms terms_;
};

Polynomial poly_add(const Polynomial& f, const Polynomial& g);
Polynomial poly_mul(const Polynomial& f, const Polynomial& g);

Residue eval(const Polynomial& f, const std::vector<std::int64_t>& z);

// Degrevlex-maximal term. Throws ParameterError on the zero polynomial.
std::pair<Monomial, Residue> leading_term(const Polynomial& f);

// Repeated top reduction of f by G until degree(f) <= r. Each step cancels
// the current leading monomial with the first g_i whose leading monomial
// divides it, so the result is a linear function of f.
Polynomial reduce_by_set(const Polynomial& f, const std::vector<Polynomial>& g, int r);

// Text form "c*x1^a*x2^b + ..." with balanced coefficients, terms in
// descending order.
std::string to_string(const Polynomial& f);
Polynomial parse_polynomial(const std::string& text, std::size_t num_vars, const Modulus& q);

}  // namespace mvfhe

#endif  // MVFHE_MVPOLY_HPP_
