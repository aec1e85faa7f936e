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

#ifndef MVFHE_SHE_HPP_
#define MVFHE_SHE_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mvfhe/arith.hpp"
#include "mvfhe/keys.hpp"
#include "mvfhe/matrix.hpp"
#include "mvfhe/params.hpp"

namespace mvfhe {

// ell - n message bits.
using Plaintext = std::vector<std::uint8_t>;

struct Ciphertext {
  VectorZq c;  // length ell, balanced
  std::uint32_t level = 0;
  // Upper bound on the decryption noise. Advisory; ignored by ==.
  std::optional<Rational> noise_hint;
  std::uint64_t q = 0;
  std::uint64_t params_id = 0;
  std::uint64_t key_id = 0;

  friend bool operator==(const Ciphertext& a, const Ciphertext& b) {
    return a.c == b.c && a.level == b.level && a.q == b.q && a.params_id == b.params_id &&
           a.key_id == b.key_id;
  }
};

struct PublicKey {
  Params params;
  std::uint64_t key_id = 0;
  Rational eps;
  MatrixZq C0;    // d x ell encryptions of zero
  MatrixZq C_pk;  // (ell-n) x ell, row i encrypts the i-th unit vector

  friend bool operator==(const PublicKey&, const PublicKey&) = default;
};

// Encrypts with fresh randomness. The noise sampler is seeded from rng.
Ciphertext encrypt(const SecretKey& sk, const Plaintext& m, Rng& rng);
// Deterministic encryption with explicit y (length n) and e (length ell-n).
Ciphertext encrypt_with(const SecretKey& sk, const Plaintext& m, const VectorZq& y,
                        const VectorZq& e);

Plaintext decrypt(const SecretKey& sk, const Ciphertext& ct);

// balanced(c S_dec - m floor(q/2)).
VectorZq noise_of(const SecretKey& sk, const Ciphertext& ct, const Plaintext& expected);
std::int64_t noise_norm(const VectorZq& noise);

Ciphertext eval_add(const Ciphertext& a, const Ciphertext& b);

// Product ciphertext c_k = floor(sum_ab X_a M_abk Y_b) mod q; X, Y are the
// (decomposed) inputs. Work is split across `threads` output slices.
Ciphertext eval_mult(const EvalKey& evk, const Ciphertext& a, const Ciphertext& b,
                     unsigned threads = 1);

// The rational bilinear value before flooring, for tests.
VectorQ eval_mult_exact(const EvalKey& evk, const Ciphertext& a, const Ciphertext& b);

// ceil((1 + eps) ell log2 q).
std::size_t public_key_rows(const Params& p, const Rational& eps);

PublicKey pk_keygen(const SecretKey& sk, Rng& rng, const Rational& eps = Rational(1, 10));
Ciphertext pk_encrypt(const PublicKey& pk, const Plaintext& m, Rng& rng);

// Receives warnings such as a noise hint above floor(q/2)/2 at decryption.
// The default handler writes to stderr.
void set_warning_handler(std::function<void(const std::string&)> handler);

}  // namespace mvfhe

#endif  // MVFHE_SHE_HPP_
