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

#include "mvfhe/she.hpp"

#include <algorithm>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>
#include <utility>

#include "mvfhe/errors.hpp"
#include "mvfhe/linalg.hpp"

namespace mvfhe {

namespace {

std::function<void(const std::string&)>& warning_handler() {
  static std::function<void(const std::string&)> handler = [](const std::string& msg) {
    std::cerr << "warning: " << msg << "\n";
  };
  return handler;
}

const NoiseSampler& sampler_for(const Params& p) {
  static std::mutex mu;
  static std::map<std::pair<std::string, std::int64_t>, NoiseSampler> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(p.sigma.get_str(), p.B);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, NoiseSampler(p.sigma, p.B, 0)).first;
  return it->second;
}

void check_plaintext(const Params& p, const Plaintext& m) {
  if (m.size() != p.slots()) {
    throw DimensionError("plaintext must have ell - n = " + std::to_string(p.slots()) + " bits");
  }
  for (auto bit : m)
    if (bit > 1) throw ParameterError("plaintext entries must be 0 or 1");
}

void check_ciphertext(const Params& p, std::uint64_t params_id, std::uint64_t key_id,
                      const Ciphertext& ct) {
  if (ct.params_id != params_id) throw ParameterError("ciphertext was produced under other parameters");
  if (ct.key_id != key_id) throw ParameterError("ciphertext was produced under another key");
  if (ct.c.size() != p.ell) throw DimensionError("ciphertext must have length ell");
}

// Signed 256-bit accumulator for sums of int128 x int64 products.
class Wide {
 public:
  void add_product(int128 a, std::int64_t b) {
    if (a == 0 || b == 0) return;
    const bool negative = (a < 0) != (b < 0);
    const uint128 ua = a < 0 ? uint128(0) - static_cast<uint128>(a) : static_cast<uint128>(a);
    const std::uint64_t ub = b < 0 ? 0 - static_cast<std::uint64_t>(b) : static_cast<std::uint64_t>(b);
    const uint128 p0 = static_cast<uint128>(static_cast<std::uint64_t>(ua)) * ub;
    const uint128 p1 = static_cast<uint128>(static_cast<std::uint64_t>(ua >> 64)) * ub;
    const uint128 mid = (p0 >> 64) + static_cast<std::uint64_t>(p1);
    const std::uint64_t limbs[3] = {static_cast<std::uint64_t>(p0), static_cast<std::uint64_t>(mid),
                                    static_cast<std::uint64_t>(mid >> 64) +
                                        static_cast<std::uint64_t>(p1 >> 64)};
    std::uint64_t* dst = negative ? neg_ : pos_;
    uint128 carry = 0;
    for (int i = 0; i < 4; ++i) {
      carry += static_cast<uint128>(dst[i]) + (i < 3 ? limbs[i] : 0);
      dst[i] = static_cast<std::uint64_t>(carry);
      carry >>= 64;
    }
  }

  BigInt value() const { return to_big(pos_) - to_big(neg_); }

 private:
  static BigInt to_big(const std::uint64_t* limbs) {
    BigInt out;
    mpz_import(out.get_mpz_t(), 4, -1, sizeof(std::uint64_t), 0, 0, limbs);
    return out;
  }

  std::uint64_t pos_[4] = {0, 0, 0, 0};
  std::uint64_t neg_[4] = {0, 0, 0, 0};
};

VectorZq mult_input(const EvalKey& evk, const Ciphertext& ct) {
  return evk.gadget ? powersoftwo_scaled(ct.c, evk.params.q, evk.params.u) : ct.c;
}

// Z_k = sum_ab X_a N_abk Y_b mod P, for k in [k0, k1).
void bilinear_mod(const EvalKey& evk, const VectorZq& x, const VectorZq& y, std::size_t k0,
                  std::size_t k1, std::vector<BigInt>& out) {
  const BigInt pz = evk.modulus();
  const std::size_t dim = evk.dim;
  for (std::size_t k = k0; k < k1; ++k) {
    Wide outer;
    for (std::size_t a = 0; a < dim; ++a) {
      if (x[a] == 0) continue;
      Wide inner;
      const int128* row = &evk.numerators[(k * dim + a) * dim];
      for (std::size_t b = 0; b < dim; ++b) inner.add_product(row[b], y[b]);
      outer.add_product(to_int128(balanced_rem(inner.value(), pz)), x[a]);
    }
    BigInt z;
    mpz_fdiv_r(z.get_mpz_t(), outer.value().get_mpz_t(), pz.get_mpz_t());
    out[k] = std::move(z);
  }
}

std::vector<BigInt> bilinear_all(const EvalKey& evk, const Ciphertext& a, const Ciphertext& b,
                                 unsigned threads) {
  const VectorZq x = mult_input(evk, a);
  const VectorZq y = mult_input(evk, b);
  const std::size_t ell = evk.params.ell;
  std::vector<BigInt> z(ell);
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(ell)));
  if (threads == 1) {
    bilinear_mod(evk, x, y, 0, ell, z);
    return z;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (ell + threads - 1) / threads;
  for (std::size_t k0 = 0; k0 < ell; k0 += chunk) {
    pool.emplace_back(bilinear_mod, std::cref(evk), std::cref(x), std::cref(y), k0,
                      std::min(ell, k0 + chunk), std::ref(z));
  }
  for (auto& th : pool) th.join();
  return z;
}

void check_mult_operands(const EvalKey& evk, const Ciphertext& a, const Ciphertext& b) {
  const std::uint64_t pid = fingerprint(evk.params);
  check_ciphertext(evk.params, pid, evk.key_id, a);
  check_ciphertext(evk.params, pid, evk.key_id, b);
}

}  // namespace

void set_warning_handler(std::function<void(const std::string&)> handler) {
  warning_handler() = std::move(handler);
}

Ciphertext encrypt_with(const SecretKey& sk, const Plaintext& m, const VectorZq& y,
                        const VectorZq& e) {
  const Params& p = sk.params;
  check_plaintext(p, m);
  if (y.size() != p.n()) throw DimensionError("y must have length n");
  if (e.size() != p.slots()) throw DimensionError("e must have length ell - n");
  const Modulus q = p.modulus();
  VectorZq x = mul_mod(y, sk.S_enc, q);
  std::int64_t e_max = 0;
  for (std::size_t j = 0; j < p.slots(); ++j) {
    x[p.n() + j] = q.reduce(static_cast<int128>(x[p.n() + j]) + m[j] * static_cast<int128>(q.half()) + e[j]);
    e_max = std::max(e_max, e[j] < 0 ? -e[j] : e[j]);
  }
  Ciphertext ct;
  ct.c = mul_mod(x, sk.R, q);
  ct.level = 0;
  ct.noise_hint = Rational(static_cast<long>(std::max(e_max, p.B)));
  ct.q = p.q;
  ct.params_id = fingerprint(p);
  ct.key_id = sk.key_id;
  return ct;
}

Ciphertext encrypt(const SecretKey& sk, const Plaintext& m, Rng& rng) {
  const Params& p = sk.params;
  check_plaintext(p, m);
  const Modulus q = p.modulus();
  VectorZq y(p.n());
  for (auto& v : y) v = rng.uniform_residue(q);
  const NoiseSampler& sampler = sampler_for(p);
  VectorZq e(p.slots());
  for (auto& v : e) v = sampler.sample(rng);
  return encrypt_with(sk, m, y, e);
}

Plaintext decrypt(const SecretKey& sk, const Ciphertext& ct) {
  const Params& p = sk.params;
  check_ciphertext(p, fingerprint(p), sk.key_id, ct);
  const Modulus q = p.modulus();
  if (ct.noise_hint && *ct.noise_hint >= Rational(static_cast<long>(q.half()), 2)) {
    warning_handler()("noise estimate " + ct.noise_hint->get_str() +
                      " reaches floor(q/2)/2; decryption may be wrong");
  }
  const VectorZq w = mul_mod(ct.c, sk.S_dec, q);
  Plaintext m(p.slots());
  const BigInt h = static_cast<long>(q.half());
  for (std::size_t j = 0; j < m.size(); ++j) {
    Rational ratio(BigInt(static_cast<long>(w[j])), h);
    ratio.canonicalize();
    BigInt r = round_nearest(ratio);
    m[j] = static_cast<std::uint8_t>(mpz_odd_p(r.get_mpz_t()) ? 1 : 0);
  }
  return m;
}

VectorZq noise_of(const SecretKey& sk, const Ciphertext& ct, const Plaintext& expected) {
  const Params& p = sk.params;
  check_plaintext(p, expected);
  if (ct.c.size() != p.ell) throw DimensionError("ciphertext must have length ell");
  const Modulus q = p.modulus();
  VectorZq w = mul_mod(ct.c, sk.S_dec, q);
  for (std::size_t j = 0; j < w.size(); ++j)
    w[j] = q.reduce(static_cast<int128>(w[j]) - expected[j] * static_cast<int128>(q.half()));
  return w;
}

std::int64_t noise_norm(const VectorZq& noise) {
  std::int64_t m = 0;
  for (auto x : noise) m = std::max(m, x < 0 ? -x : x);
  return m;
}

Ciphertext eval_add(const Ciphertext& a, const Ciphertext& b) {
  if (a.params_id != b.params_id || a.key_id != b.key_id || a.q != b.q) {
    throw ParameterError("ciphertexts belong to different keys or parameters");
  }
  if (a.c.size() != b.c.size()) throw DimensionError("ciphertext lengths differ");
  const Modulus q(a.q);
  Ciphertext out = a;
  for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] = q.add(a.c[i], b.c[i]);
  out.level = std::max(a.level, b.level);
  if (a.noise_hint && b.noise_hint) {
    out.noise_hint = *a.noise_hint + *b.noise_hint + 1;
  } else {
    out.noise_hint.reset();
  }
  return out;
}

Ciphertext eval_mult(const EvalKey& evk, const Ciphertext& a, const Ciphertext& b,
                     unsigned threads) {
  const Params& p = evk.params;
  check_mult_operands(evk, a, b);
  const std::uint32_t level = std::max(a.level, b.level) + 1;
  if (level > p.L) {
    throw DepthError("multiplication would reach level " + std::to_string(level) +
                     " above the depth budget " + std::to_string(p.L));
  }
  const Modulus q = p.modulus();
  const BigInt scale = BigInt(static_cast<unsigned long>(p.q)) << (2 * p.u);
  const std::vector<BigInt> z = bilinear_all(evk, a, b, threads);
  Ciphertext out;
  out.c.resize(p.ell);
  for (std::size_t k = 0; k < p.ell; ++k) {
    BigInt fl;
    mpz_fdiv_q(fl.get_mpz_t(), z[k].get_mpz_t(), scale.get_mpz_t());
    out.c[k] = q.reduce(fl);
  }
  out.level = level;
  if (a.noise_hint && b.noise_hint) out.noise_hint = mult_noise_bound(p, *a.noise_hint, *b.noise_hint);
  out.q = a.q;
  out.params_id = a.params_id;
  out.key_id = a.key_id;
  return out;
}

VectorQ eval_mult_exact(const EvalKey& evk, const Ciphertext& a, const Ciphertext& b) {
  const Params& p = evk.params;
  check_mult_operands(evk, a, b);
  const BigInt scale = BigInt(static_cast<unsigned long>(p.q)) << (2 * p.u);
  const std::vector<BigInt> z = bilinear_all(evk, a, b, 1);
  VectorQ out(p.ell);
  for (std::size_t k = 0; k < p.ell; ++k) {
    out[k] = Rational(z[k], scale);
    out[k].canonicalize();
  }
  return out;
}

std::size_t public_key_rows(const Params& p, const Rational& eps) {
  if (sgn(eps) <= 0) throw ParameterError("public-key slack eps must be positive");
  const Rational d = (1 + eps) * Rational(static_cast<unsigned long>(p.ell * p.log2q()));
  const BigInt c = -round_floor(-d);
  return static_cast<std::size_t>(c.get_ui());
}

PublicKey pk_keygen(const SecretKey& sk, Rng& rng, const Rational& eps) {
  const Params& p = sk.params;
  PublicKey pk;
  pk.params = p;
  pk.key_id = sk.key_id;
  pk.eps = eps;
  const std::size_t d = public_key_rows(p, eps);
  pk.C0 = MatrixZq(d, p.ell);
  const Plaintext zero(p.slots(), 0);
  for (std::size_t i = 0; i < d; ++i) {
    const Ciphertext ct = encrypt(sk, zero, rng);
    std::copy(ct.c.begin(), ct.c.end(), pk.C0.row(i));
  }
  pk.C_pk = MatrixZq(p.slots(), p.ell);
  for (std::size_t i = 0; i < p.slots(); ++i) {
    Plaintext unit(p.slots(), 0);
    unit[i] = 1;
    const Ciphertext ct = encrypt(sk, unit, rng);
    std::copy(ct.c.begin(), ct.c.end(), pk.C_pk.row(i));
  }
  return pk;
}

Ciphertext pk_encrypt(const PublicKey& pk, const Plaintext& m, Rng& rng) {
  const Params& p = pk.params;
  check_plaintext(p, m);
  const Modulus q = p.modulus();
  std::vector<int128> acc(p.ell, 0);
  std::size_t weight = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!m[i]) continue;
    ++weight;
    for (std::size_t j = 0; j < p.ell; ++j) acc[j] += pk.C_pk(i, j);
  }
  for (std::size_t i = 0; i < pk.C0.rows(); ++i) {
    if (!rng.coin()) continue;
    ++weight;
    for (std::size_t j = 0; j < p.ell; ++j) acc[j] += pk.C0(i, j);
  }
  Ciphertext ct;
  ct.c.resize(p.ell);
  for (std::size_t j = 0; j < p.ell; ++j) ct.c[j] = q.reduce(acc[j]);
  ct.level = 0;
  ct.noise_hint = Rational(static_cast<unsigned long>(weight)) * Rational(static_cast<long>(p.B));
  ct.q = p.q;
  ct.params_id = fingerprint(p);
  ct.key_id = pk.key_id;
  return ct;
}

}  // namespace mvfhe
