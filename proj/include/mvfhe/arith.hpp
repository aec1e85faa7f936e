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

#ifndef MVFHE_ARITH_HPP_
#define MVFHE_ARITH_HPP_

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace mvfhe {

using BigInt = mpz_class;
using Rational = mpq_class;
using int128 = __int128;
using uint128 = unsigned __int128;

BigInt to_bigint(int128 x);
// Throws ParameterError when |x| does not fit.
int128 to_int128(const BigInt& x);

// Deterministic Miller-Rabin; exact for every 64-bit input.
bool is_prime(std::uint64_t n);

// An odd prime q < 2^63 together with the balanced-residue arithmetic of Z_q.
// Residues are represented by the unique integer in (-q/2, q/2].
class Modulus {
 public:
  explicit Modulus(std::uint64_t q);

  std::uint64_t value() const { return q_; }
  // floor(q/2), the plaintext scaling factor.
  std::int64_t half() const { return static_cast<std::int64_t>(q_ / 2); }
  // ceil(log2 q), i.e. the bit length of q.
  unsigned bit_length() const { return bits_; }

  std::int64_t reduce(int128 x) const;
  std::int64_t reduce(const BigInt& x) const;
  std::int64_t add(std::int64_t a, std::int64_t b) const {
    return reduce(static_cast<int128>(a) + b);
  }
  std::int64_t sub(std::int64_t a, std::int64_t b) const {
    return reduce(static_cast<int128>(a) - b);
  }
  std::int64_t mul(std::int64_t a, std::int64_t b) const {
    return reduce(static_cast<int128>(a) * b);
  }
  std::int64_t neg(std::int64_t a) const { return reduce(-static_cast<int128>(a)); }
  std::int64_t pow(std::int64_t a, std::uint64_t e) const;
  // Throws ParameterError for a == 0 mod q.
  std::int64_t inv(std::int64_t a) const;

  friend bool operator==(const Modulus& a, const Modulus& b) { return a.q_ == b.q_; }

 private:
  std::uint64_t q_;
  unsigned bits_;
};

// A balanced residue tagged with its modulus. Arithmetic between residues of
// different moduli throws ParameterError.
struct Residue {
  std::int64_t value = 0;
  std::uint64_t modulus = 0;

  friend bool operator==(const Residue&, const Residue&) = default;
};

Residue balanced_mod(const BigInt& x, std::uint64_t q);
Residue balanced_mod(std::int64_t x, std::uint64_t q);
Residue operator+(const Residue& a, const Residue& b);
Residue operator-(const Residue& a, const Residue& b);
Residue operator*(const Residue& a, const Residue& b);
Residue operator-(const Residue& a);

// Greatest integer <= x.
BigInt round_floor(const Rational& x);
// Nearest integer, halves rounded toward +infinity.
BigInt round_nearest(const Rational& x);

// Balanced representative of x modulo m (any m >= 1), in (-m/2, m/2].
BigInt balanced_rem(const BigInt& x, const BigInt& m);

// Seedable 64-bit generator. Every derived draw is computed from raw
// mt19937_64 words so streams are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, bound), bound >= 1.
  std::uint64_t uniform_below(std::uint64_t bound);
  // Uniform in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  std::int64_t uniform_residue(const Modulus& q);
  bool coin() { return (next() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
};

// Discrete Gaussian over Z with mass proportional to exp(-x^2 / (2 sigma^2)),
// truncated to [-B, B] by rejection. sigma = 0 is the zero-noise test mode.
class NoiseSampler {
 public:
  NoiseSampler(const Rational& sigma, std::int64_t bound, std::uint64_t seed);

  std::int64_t sample() { return sample(rng_); }
  // Draws from the same distribution using an external generator.
  std::int64_t sample(Rng& rng) const;
  std::int64_t bound() const { return bound_; }
  const Rational& sigma() const { return sigma_; }

 private:
  Rational sigma_;
  std::int64_t bound_;
  Rng rng_;
  // acceptance_[|x|] / 2^64 approximates exp(-x^2 / (2 sigma^2)).
  std::vector<std::uint64_t> acceptance_;
};

// Odd prime with exactly `bits` significant bits, 8 <= bits <= 63.
std::uint64_t random_prime(unsigned bits, Rng& rng);

std::string to_string(int128 x);

}  // namespace mvfhe

#endif  // MVFHE_ARITH_HPP_
