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

#include "mvfhe/arith.hpp"

#include <algorithm>
#include <limits>

#include "mvfhe/errors.hpp"

namespace mvfhe {

BigInt to_bigint(int128 x) {
  const bool negative = x < 0;
  uint128 mag = negative ? uint128(0) - static_cast<uint128>(x) : static_cast<uint128>(x);
  BigInt hi = static_cast<unsigned long>(static_cast<std::uint64_t>(mag >> 64));
  BigInt lo = static_cast<unsigned long>(static_cast<std::uint64_t>(mag));
  BigInt out = (hi << 64) + lo;
  return negative ? BigInt(-out) : out;
}

int128 to_int128(const BigInt& x) {
  if (mpz_sizeinbase(x.get_mpz_t(), 2) > 126) {
    throw ParameterError("integer does not fit in 128 bits");
  }
  BigInt mag = abs(x);
  BigInt hi = mag >> 64;
  BigInt lo = mag - (hi << 64);
  uint128 m = (static_cast<uint128>(hi.get_ui()) << 64) | lo.get_ui();
  int128 out = static_cast<int128>(m);
  return sgn(x) < 0 ? -out : out;
}

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<uint128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  static const std::uint64_t kSmall[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::uint64_t p : kSmall) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : kSmall) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

Modulus::Modulus(std::uint64_t q) : q_(q), bits_(0) {
  if (q < 3 || q % 2 == 0 || q >= (std::uint64_t{1} << 63) || !is_prime(q)) {
    throw ParameterError("modulus must be an odd prime below 2^63, got " + std::to_string(q));
  }
  for (std::uint64_t x = q; x; x >>= 1) ++bits_;
}

std::int64_t Modulus::reduce(int128 x) const {
  int128 r = x % static_cast<int128>(q_);
  if (r < 0) r += q_;
  if (r > static_cast<int128>(q_ / 2)) r -= q_;
  return static_cast<std::int64_t>(r);
}

std::int64_t Modulus::reduce(const BigInt& x) const {
  BigInt r;
  BigInt m = static_cast<unsigned long>(q_);
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  std::uint64_t u = r.get_ui();
  return u > q_ / 2 ? static_cast<std::int64_t>(u) - static_cast<std::int64_t>(q_)
                    : static_cast<std::int64_t>(u);
}

std::int64_t Modulus::pow(std::int64_t a, std::uint64_t e) const {
  std::int64_t r = 1;
  std::int64_t b = reduce(static_cast<int128>(a));
  while (e) {
    if (e & 1) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

std::int64_t Modulus::inv(std::int64_t a) const {
  std::int64_t x = reduce(static_cast<int128>(a));
  if (x == 0) throw ParameterError("zero has no inverse modulo q");
  return pow(x, q_ - 2);
}

Residue balanced_mod(const BigInt& x, std::uint64_t q) {
  Modulus m(q);
  return {m.reduce(x), q};
}

Residue balanced_mod(std::int64_t x, std::uint64_t q) {
  Modulus m(q);
  return {m.reduce(static_cast<int128>(x)), q};
}

namespace {

Modulus common(const Residue& a, const Residue& b) {
  if (a.modulus != b.modulus) throw ParameterError("residues belong to different moduli");
  return Modulus(a.modulus);
}

}  // namespace

Residue operator+(const Residue& a, const Residue& b) {
  return {common(a, b).add(a.value, b.value), a.modulus};
}

Residue operator-(const Residue& a, const Residue& b) {
  return {common(a, b).sub(a.value, b.value), a.modulus};
}

Residue operator*(const Residue& a, const Residue& b) {
  return {common(a, b).mul(a.value, b.value), a.modulus};
}

Residue operator-(const Residue& a) { return {Modulus(a.modulus).neg(a.value), a.modulus}; }

BigInt round_floor(const Rational& x) {
  BigInt out;
  mpz_fdiv_q(out.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return out;
}

BigInt round_nearest(const Rational& x) { return round_floor(x + Rational(1, 2)); }

BigInt balanced_rem(const BigInt& x, const BigInt& m) {
  BigInt r;
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  if (2 * r > m) r -= m;
  return r;
}

std::uint64_t Rng::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw ParameterError("empty sampling range");
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    std::uint64_t x = next();
    if (x >= threshold) return x % bound;
  }
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw ParameterError("empty sampling range");
  std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  std::uint64_t x = span == 0 ? next() : uniform_below(span);
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + x);
}

std::int64_t Rng::uniform_residue(const Modulus& q) {
  return q.reduce(static_cast<int128>(uniform_below(q.value())));
}

namespace {

constexpr unsigned kFixedBits = 192;

// floor(exp(-y) * 2^kFixedBits) for a rational y in [0, 1], by the alternating
// Taylor series in fixed point.
BigInt exp_neg_fixed_small(const Rational& y) {
  const BigInt one = BigInt(1) << kFixedBits;
  BigInt sum = one;
  BigInt term = one;
  for (unsigned k = 1; k < 200; ++k) {
    term = round_floor(Rational(term * y.get_num(), y.get_den() * k));
    if (term == 0) break;
    if (k % 2) {
      sum -= term;
    } else {
      sum += term;
    }
  }
  return sum;
}

BigInt exp_neg_fixed(const Rational& y) {
  BigInt whole = round_floor(y);
  Rational frac = y - Rational(whole);
  BigInt acc = exp_neg_fixed_small(frac);
  const BigInt e_inv = exp_neg_fixed_small(Rational(1));
  for (BigInt i = 0; i < whole && acc != 0; ++i) acc = (acc * e_inv) >> kFixedBits;
  return acc;
}

}  // namespace

NoiseSampler::NoiseSampler(const Rational& sigma, std::int64_t bound, std::uint64_t seed)
    : sigma_(sigma), bound_(bound), rng_(seed) {
  if (sgn(sigma_) < 0) throw ParameterError("sigma must be non-negative");
  if (bound_ < 0) throw ParameterError("noise bound must be non-negative");
  if (sgn(sigma_) == 0) return;
  acceptance_.resize(static_cast<std::size_t>(bound_) + 1);
  const Rational two_var = 2 * sigma_ * sigma_;
  const BigInt cap = BigInt(1) << 64;
  for (std::int64_t x = 0; x <= bound_; ++x) {
    Rational y = Rational(BigInt(x) * x) / two_var;
    BigInt p = exp_neg_fixed(y) >> (kFixedBits - 64);
    if (p >= cap) p = cap - 1;
    acceptance_[static_cast<std::size_t>(x)] = static_cast<std::uint64_t>(to_int128(p));
  }
}

std::int64_t NoiseSampler::sample(Rng& rng) const {
  if (acceptance_.empty()) return 0;
  for (;;) {
    std::int64_t x = rng.uniform_int(-bound_, bound_);
    if (x == 0) return 0;
    if (rng.next() < acceptance_[static_cast<std::size_t>(x < 0 ? -x : x)]) return x;
  }
}

std::uint64_t random_prime(unsigned bits, Rng& rng) {
  if (bits < 8 || bits > 63) throw ParameterError("prime size must be between 8 and 63 bits");
  const std::uint64_t top = std::uint64_t{1} << (bits - 1);
  const std::uint64_t mask = (std::uint64_t{1} << bits) - 1;
  for (;;) {
    std::uint64_t c = (rng.next() & mask) | top | 1;
    if (is_prime(c)) return c;
  }
}

std::string to_string(int128 x) { return to_bigint(x).get_str(); }

}  // namespace mvfhe
