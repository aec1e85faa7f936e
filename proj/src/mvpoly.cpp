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

#include "mvfhe/mvpoly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "mvfhe/errors.hpp"

namespace mvfhe {

std::uint32_t Monomial::total_degree() const {
  std::uint32_t d = 0;
  for (auto e : exponents) d += e;
  return d;
}

bool Monomial::divides(const Monomial& other) const {
  if (other.exponents.size() != exponents.size()) return false;
  for (std::size_t i = 0; i < exponents.size(); ++i)
    if (exponents[i] > other.exponents[i]) return false;
  return true;
}

Monomial Monomial::operator*(const Monomial& other) const {
  if (other.exponents.size() != exponents.size()) throw DimensionError("monomial variable counts differ");
  Monomial m = *this;
  for (std::size_t i = 0; i < exponents.size(); ++i) m.exponents[i] += other.exponents[i];
  return m;
}

Monomial Monomial::operator/(const Monomial& d) const {
  if (!d.divides(*this)) throw ParameterError("monomial division is not exact");
  Monomial m = *this;
  for (std::size_t i = 0; i < exponents.size(); ++i) m.exponents[i] -= d.exponents[i];
  return m;
}

bool DegRevLexLess::operator()(const Monomial& a, const Monomial& b) const {
  const auto da = a.total_degree(), db = b.total_degree();
  if (da != db) return da < db;
  for (std::size_t i = a.exponents.size(); i-- > 0;) {
    if (a.exponents[i] != b.exponents[i]) return a.exponents[i] > b.exponents[i];
  }
  return false;
}

namespace {

void compositions(std::size_t v, std::uint32_t d, std::vector<std::uint32_t>& cur,
                  std::vector<Monomial>& out) {
  if (cur.size() + 1 == v) {
    cur.push_back(d);
    out.emplace_back(cur);
    cur.pop_back();
    return;
  }
  for (std::uint32_t e = 0; e <= d; ++e) {
    cur.push_back(e);
    compositions(v, d - e, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<Monomial> monomials_of_degree(std::size_t v, std::uint32_t d) {
  if (v == 0) throw ParameterError("polynomials need at least one variable");
  std::vector<Monomial> out;
  std::vector<std::uint32_t> cur;
  compositions(v, d, cur, out);
  std::sort(out.begin(), out.end(), DegRevLexLess());
  return out;
}

std::vector<Monomial> enumerate_monomials(std::size_t v, std::uint32_t r) {
  std::vector<Monomial> out;
  for (std::uint32_t d = 0; d <= r; ++d) {
    auto part = monomials_of_degree(v, d);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

Polynomial Polynomial::monomial(const Monomial& m, std::int64_t coeff, const Modulus& q) {
  Polynomial p(m.num_vars(), q);
  p.add_term(m, coeff);
  return p;
}

Polynomial Polynomial::constant(std::size_t num_vars, std::int64_t c, const Modulus& q) {
  return monomial(Monomial::one(num_vars), c, q);
}

int Polynomial::degree() const {
  return terms_.empty() ? -1 : static_cast<int>(terms_.rbegin()->first.total_degree());
}

std::int64_t Polynomial::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? 0 : it->second;
}

void Polynomial::add_term(const Monomial& m, std::int64_t c) {
  if (m.num_vars() != v_) throw DimensionError("monomial variable count differs from polynomial");
  c = q_.reduce(static_cast<int128>(c));
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (inserted) return;
  it->second = q_.add(it->second, c);
  if (it->second == 0) terms_.erase(it);
}

void Polynomial::check_compatible(const Polynomial& o) const {
  if (!(q_ == o.q_)) throw ParameterError("polynomials have different moduli");
  if (v_ != o.v_) throw DimensionError("polynomials have different variable counts");
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  check_compatible(o);
  Polynomial out = *this;
  for (const auto& [m, c] : o.terms_) out.add_term(m, c);
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  check_compatible(o);
  Polynomial out = *this;
  for (const auto& [m, c] : o.terms_) out.add_term(m, q_.neg(c));
  return out;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  check_compatible(o);
  Polynomial out(v_, q_);
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) out.add_term(ma * mb, q_.mul(ca, cb));
  return out;
}

Polynomial Polynomial::scaled(std::int64_t c) const {
  Polynomial out(v_, q_);
  for (const auto& [m, a] : terms_) out.add_term(m, q_.mul(a, c));
  return out;
}

Polynomial poly_add(const Polynomial& f, const Polynomial& g) { return f + g; }
Polynomial poly_mul(const Polynomial& f, const Polynomial& g) { return f * g; }

Residue eval(const Polynomial& f, const std::vector<std::int64_t>& z) {
  if (z.size() != f.num_vars()) throw DimensionError("evaluation point has the wrong dimension");
  const Modulus& q = f.modulus();
  const int deg = std::max(f.degree(), 0);
  std::vector<std::vector<std::int64_t>> powers(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    powers[i].resize(static_cast<std::size_t>(deg) + 1);
    powers[i][0] = 1;
    for (int e = 1; e <= deg; ++e) powers[i][e] = q.mul(powers[i][e - 1], z[i]);
  }
  std::int64_t acc = 0;
  for (const auto& [m, c] : f.terms()) {
    std::int64_t t = c;
    for (std::size_t i = 0; i < z.size(); ++i) t = q.mul(t, powers[i][m.exponents[i]]);
    acc = q.add(acc, t);
  }
  return {acc, q.value()};
}

std::pair<Monomial, Residue> leading_term(const Polynomial& f) {
  if (f.is_zero()) throw ParameterError("the zero polynomial has no leading term");
  const auto& top = *f.terms().rbegin();
  return {top.first, Residue{top.second, f.modulus().value()}};
}

Polynomial reduce_by_set(const Polynomial& f, const std::vector<Polynomial>& g, int r) {
  const Modulus& q = f.modulus();
  std::vector<std::pair<Monomial, std::int64_t>> heads;
  heads.reserve(g.size());
  for (const auto& gi : g) {
    auto [m, c] = leading_term(gi);
    heads.emplace_back(m, q.inv(c.value));
  }
  Polynomial rem = f;
  const std::size_t cap = enumerate_monomials(f.num_vars(), std::max(f.degree(), 0)).size() + 1;
  for (std::size_t step = 0; rem.degree() > r; ++step) {
    if (step > cap) throw ConstructionError("polynomial reduction did not terminate");
    const auto& [mu, c] = *rem.terms().rbegin();
    std::size_t pick = heads.size();
    for (std::size_t i = 0; i < heads.size(); ++i) {
      if (heads[i].first.divides(mu)) {
        pick = i;
        break;
      }
    }
    if (pick == heads.size()) {
      throw ConstructionError("reduction stalled: no leading monomial of the set divides a term of degree " +
                              std::to_string(mu.total_degree()));
    }
    const Monomial shift = mu / heads[pick].first;
    const std::int64_t factor = q.mul(c, heads[pick].second);
    Polynomial sub(f.num_vars(), q);
    for (const auto& [m, a] : g[pick].terms()) sub.add_term(m * shift, q.mul(a, factor));
    rem = rem - sub;
  }
  return rem;
}

std::string to_string(const Polynomial& f) {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
    std::int64_t c = it->second;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    os << (c < 0 ? -c : c);
    const auto& e = it->first.exponents;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      os << "*x" << (i + 1);
      if (e[i] > 1) os << "^" << e[i];
    }
  }
  return os.str();
}

namespace {

struct Cursor {
  const std::string& s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool at_end() {
    skip_ws();
    return pos >= s.size();
  }
  bool accept(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  bool peek_digit() {
    skip_ws();
    return pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]));
  }
  std::string digits() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos) throw FormatError("expected a number at offset " + std::to_string(start));
    return s.substr(start, pos - start);
  }
};

}  // namespace

Polynomial parse_polynomial(const std::string& text, std::size_t num_vars, const Modulus& q) {
  Polynomial out(num_vars, q);
  Cursor cur{text};
  if (cur.at_end()) throw FormatError("empty polynomial text");
  bool first = true;
  while (!cur.at_end()) {
    bool negative = false;
    if (cur.accept('-')) {
      negative = true;
    } else if (!cur.accept('+') && !first) {
      throw FormatError("expected '+' or '-' between terms");
    }
    first = false;
    BigInt coeff = 1;
    Monomial m = Monomial::one(num_vars);
    bool need_factor = true;
    if (cur.peek_digit()) {
      coeff = BigInt(cur.digits());
      need_factor = false;
    }
    while (true) {
      if (!need_factor && !cur.accept('*')) break;
      need_factor = false;
      if (!cur.accept('x')) throw FormatError("expected a variable x<i>");
      std::size_t idx = std::stoul(cur.digits());
      if (idx < 1 || idx > num_vars) throw FormatError("variable index out of range");
      std::uint32_t e = 1;
      if (cur.accept('^')) e = static_cast<std::uint32_t>(std::stoul(cur.digits()));
      m.exponents[idx - 1] += e;
    }
    if (negative) coeff = -coeff;
    out.add_term(m, q.reduce(coeff));
  }
  return out;
}

}  // namespace mvfhe
