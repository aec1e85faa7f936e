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

#ifndef MVFHE_PARAMS_HPP_
#define MVFHE_PARAMS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "mvfhe/arith.hpp"

namespace mvfhe {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

// Scheme dimensions and moduli. The stored fields are independent; every
// other dimension is derived.
struct Params {
  std::uint32_t lambda = 0;
  std::uint32_t L = 1;
  std::uint32_t v = 2;
  std::uint32_t r_g = 1;
  std::uint32_t r_prime = 2;
  std::size_t ell = 0;
  std::uint64_t q = 0;
  Rational sigma = 8;
  std::int64_t B = 48;
  std::uint32_t u = 8;
  bool gadget = true;
  // Constant c in q/B >= c * (n log2 q)^L.
  Rational depth_constant = 1;

  std::uint32_t r() const { return r_prime + r_g; }
  std::size_t n() const { return binomial(v + r_prime, r_prime); }
  std::size_t N() const { return binomial(v + r(), r()); }
  std::size_t n1() const { return binomial(v + 2 * r() - r_g, v); }
  std::size_t t() const { return n1() + ell - n(); }
  std::size_t slots() const { return ell - n(); }
  unsigned log2q() const;
  // Length of a decomposed ciphertext, ell (u + log2 q).
  std::size_t gadget_dim() const { return ell * (u + log2q()); }
  Modulus modulus() const { return Modulus(q); }

  // q/B and (n log2 q)^L, the two sides of the depth condition.
  Rational depth_margin_lhs() const;
  Rational depth_margin_rhs() const;

  // Throws ParameterError naming the first violated invariant.
  void validate() const;

  friend bool operator==(const Params&, const Params&) = default;
};

// Largest coefficient K of the gadget expansion: ell (u + log2 q) / 2 + 1.
Rational gadget_k_max(const Params& p);

// Noise bound after one multiplication of inputs with bounds b1, b2:
// 4B' + 2(4B' + 1) K + (8B'^2 + 1)/q + ell with B' = max(b1, b2, B).
Rational mult_noise_bound(const Params& p, const Rational& b1, const Rational& b2);

struct SetupOverrides {
  std::optional<std::uint32_t> v;
  std::optional<std::uint32_t> r_g;
  std::optional<std::uint32_t> r_prime;
  std::optional<std::size_t> slots;
  std::optional<unsigned> q_bits;
  std::optional<std::uint64_t> q;
  std::optional<Rational> sigma;
  std::optional<std::int64_t> B;
  std::optional<std::uint32_t> u;
  std::optional<bool> gadget;
  std::optional<std::uint64_t> seed;
};

// Deterministic in (lambda, L, overrides). r' is the least value with
// C(v + r', r') >= lambda; q is the smallest admissible size (at least 40
// bits) for which the tracked noise of L multiplication levels, each fed by
// sums of four operands, stays below floor(q/2)/2.
Params setup(std::uint32_t lambda, std::uint32_t L, const SetupOverrides& overrides = {});

// "toy" (ell = 8), "small" (ell = 12) and "depth3" (ell = 16, L = 3).
Params preset(const std::string& name, SetupOverrides overrides = {});

// Checksum of the serialized parameter block.
std::uint64_t fingerprint(const Params& p);

std::string describe(const Params& p);

}  // namespace mvfhe

#endif  // MVFHE_PARAMS_HPP_
