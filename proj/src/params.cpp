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

#include "mvfhe/params.hpp"

#include <sstream>

#include "mvfhe/errors.hpp"

namespace mvfhe {

namespace {

constexpr unsigned kMinQBits = 40;
constexpr std::size_t kDefaultSlots = 2;
// Operand hints at each multiplication level allow sums of this many terms.
constexpr unsigned kAddFanIn = 4;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rational pow_rational(const Rational& base, std::uint32_t e) {
  Rational r = 1;
  for (std::uint32_t i = 0; i < e; ++i) r *= base;
  return r;
}

// Tracked noise after `levels` multiplications, each fed by sums of
// kAddFanIn operands of the previous level.
Rational chain_hint(const Params& p, std::uint32_t levels) {
  Rational h = p.B;
  for (std::uint32_t i = 0; i < levels; ++i) {
    Rational in = h * kAddFanIn + (kAddFanIn - 1);
    h = mult_noise_bound(p, in, in);
  }
  return h;
}

}  // namespace

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  uint128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r >> 64) throw ParameterError("binomial coefficient overflows 64 bits");
  }
  return static_cast<std::uint64_t>(r);
}

unsigned Params::log2q() const {
  unsigned b = 0;
  for (std::uint64_t x = q; x; x >>= 1) ++b;
  return b;
}

Rational Params::depth_margin_lhs() const {
  if (B == 0) throw ParameterError("noise bound B must be positive");
  Rational r(BigInt(static_cast<unsigned long>(q)), BigInt(static_cast<long>(B)));
  r.canonicalize();
  return r;
}

Rational Params::depth_margin_rhs() const {
  return depth_constant * pow_rational(Rational(static_cast<unsigned long>(n() * log2q())), L);
}

void Params::validate() const {
  if (lambda < 1) throw ParameterError("lambda must be at least 1");
  if (L < 1) throw ParameterError("depth L must be at least 1");
  if (v < 1) throw ParameterError("v must be at least 1");
  if (r_g < 1) throw ParameterError("generator degree r_g must be at least 1");
  if (r_prime < 1) throw ParameterError("r' must be at least 1");
  if (ell <= n()) throw ParameterError("ell must exceed n = " + std::to_string(n()));
  if (ell > N()) throw ParameterError("ell must not exceed N = " + std::to_string(N()));
  Modulus m(q);
  if (sgn(sigma) < 0) throw ParameterError("sigma must be non-negative");
  if (B < 1) throw ParameterError("noise bound B must be positive");
  if (log2q() + u > 63) throw ParameterError("log2 q + u must not exceed 63");
  if (!(Rational(static_cast<long>(B)) < Rational(static_cast<long>(m.half()), 2))) {
    throw ParameterError("B must be below floor(q/2)/2");
  }
  if (sgn(depth_constant) <= 0) throw ParameterError("depth constant must be positive");
  if (depth_margin_lhs() < depth_margin_rhs()) {
    throw ParameterError("q too small for depth L: q/B < c (n log2 q)^L");
  }
}

Rational gadget_k_max(const Params& p) {
  return Rational(static_cast<unsigned long>(p.ell * (p.u + p.log2q())), 2) + 1;
}

Rational mult_noise_bound(const Params& p, const Rational& b1, const Rational& b2) {
  Rational bs = Rational(static_cast<long>(p.B));
  if (b1 > bs) bs = b1;
  if (b2 > bs) bs = b2;
  // Plain keys multiply full-size residues, so K grows to about ell q / 2.
  const Rational k = p.gadget ? gadget_k_max(p)
                              : Rational(BigInt(static_cast<unsigned long>(p.ell)) *
                                         static_cast<unsigned long>(p.q / 2)) + 1;
  const Rational qq(BigInt(static_cast<unsigned long>(p.q)));
  return 4 * bs + 2 * (4 * bs + 1) * k + (8 * bs * bs + 1) / qq +
         Rational(static_cast<unsigned long>(p.ell));
}

Params setup(std::uint32_t lambda, std::uint32_t L, const SetupOverrides& o) {
  if (lambda < 1) throw ParameterError("lambda must be at least 1");
  if (L < 1) throw ParameterError("depth L must be at least 1");
  Params p;
  p.lambda = lambda;
  p.L = L;
  p.v = o.v.value_or(2);
  p.r_g = o.r_g.value_or(1);
  if (p.v < 1) throw ParameterError("v must be at least 1");
  if (o.r_prime) {
    p.r_prime = *o.r_prime;
  } else {
    p.r_prime = 1;
    while (binomial(p.v + p.r_prime, p.r_prime) < lambda) ++p.r_prime;
  }
  p.ell = p.n() + o.slots.value_or(kDefaultSlots);
  p.sigma = o.sigma.value_or(Rational(8));
  if (o.B) {
    p.B = *o.B;
  } else {
    Rational six = 6 * p.sigma;
    BigInt c = -round_floor(-six);
    p.B = sgn(c) == 0 ? 1 : c.get_si();
  }
  p.u = o.u.value_or(8);
  p.gadget = o.gadget.value_or(true);

  auto pick_prime = [&](unsigned bits) {
    const std::uint64_t seed =
        o.seed ? *o.seed
               : splitmix64((std::uint64_t{lambda} << 40) ^ (std::uint64_t{L} << 20) ^ bits);
    Rng rng(seed);
    return random_prime(bits, rng);
  };

  if (o.q) {
    p.q = *o.q;
  } else if (o.q_bits) {
    p.q = pick_prime(*o.q_bits);
  } else {
    if (p.u >= 63 - kMinQBits) throw ParameterError("u leaves no room for a 40-bit modulus");
    const unsigned max_bits = 63 - p.u;
    bool found = false;
    for (unsigned bits = kMinQBits; bits <= max_bits && !found; ++bits) {
      // Any prime of this size is at least 2^(bits-1); judge by that floor.
      Params trial = p;
      trial.gadget = true;
      trial.q = (std::uint64_t{1} << (bits - 1)) + 1;
      Rational floor_half(BigInt(static_cast<unsigned long>(trial.q / 2)));
      bool noise_ok = chain_hint(trial, L) < floor_half / 2;
      bool depth_ok = !(trial.depth_margin_lhs() < trial.depth_margin_rhs());
      if (noise_ok && depth_ok) {
        p.q = pick_prime(bits);
        found = true;
      }
    }
    if (!found) throw ParameterError("no modulus below 2^" + std::to_string(max_bits) +
                                     " supports depth " + std::to_string(L));
  }
  p.validate();
  return p;
}

Params preset(const std::string& name, SetupOverrides o) {
  if (name == "toy") return setup(6, 2, o);
  if (name == "small") return setup(10, 2, o);
  if (name == "depth3") {
    if (!o.slots) o.slots = 1;
    return setup(15, 3, o);
  }
  throw ParameterError("unknown preset '" + name + "' (expected toy, small or depth3)");
}

std::string describe(const Params& p) {
  std::ostringstream os;
  os << "lambda=" << p.lambda << " L=" << p.L << " v=" << p.v << " r_g=" << p.r_g
     << " r'=" << p.r_prime << " r=" << p.r() << "\n"
     << "n=" << p.n() << " ell=" << p.ell << " N=" << p.N() << " n1=" << p.n1()
     << " t=" << p.t() << "\n"
     << "q=" << p.q << " (" << p.log2q() << " bits) sigma=" << p.sigma.get_str()
     << " B=" << p.B << " u=" << p.u << " gadget=" << (p.gadget ? "on" : "off") << "\n";
  return os.str();
}

}  // namespace mvfhe
