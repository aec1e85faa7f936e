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
#include "mvfhe/she.hpp"

using namespace mvfhe;

namespace {

struct Fixture {
  Rng rng{2024};
  SecretKey sk = keygen(preset("toy"), rng);
  EvalKey evk = build_evalkey(sk, rng);
  const Params& p = sk.params;

  Plaintext random_message() {
    Plaintext m(p.slots());
    for (auto& b : m) b = rng.coin();
    return m;
  }
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

Plaintext bitwise(const Plaintext& a, const Plaintext& b, bool and_gate) {
  Plaintext out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = and_gate ? (a[j] & b[j]) : (a[j] ^ b[j]);
  return out;
}

}  // namespace

TEST_CASE("noiseless encryption of zero with y = 0 is the zero vector") {
  auto& f = fixture();
  const Ciphertext ct = encrypt_with(f.sk, Plaintext(f.p.slots(), 0), VectorZq(f.p.n(), 0),
                                     VectorZq(f.p.slots(), 0));
  CHECK(ct.c == VectorZq(f.p.ell, 0));
  CHECK(ct.level == 0);
}

TEST_CASE("hand-built ciphertext decrypts through S_dec") {
  auto& f = fixture();
  const Modulus q = f.p.modulus();
  Plaintext m(f.p.slots(), 0);
  m[0] = 1;
  const Ciphertext ct = encrypt_with(f.sk, m, VectorZq(f.p.n(), 0), VectorZq(f.p.slots(), 0));
  VectorZq want(f.p.slots(), 0);
  want[0] = q.half();
  CHECK(mul_mod(ct.c, f.sk.S_dec, q) == want);
  CHECK(decrypt(f.sk, ct) == m);
}

TEST_CASE("decryption threshold") {
  auto& f = fixture();
  const std::int64_t h = f.p.modulus().half();
  const Plaintext zero(f.p.slots(), 0);
  auto decrypt_with_noise = [&](std::int64_t e) {
    VectorZq ev(f.p.slots(), 0);
    ev[0] = e;
    VectorZq y(f.p.n());
    for (auto& x : y) x = f.rng.uniform_residue(f.p.modulus());
    return decrypt(f.sk, encrypt_with(f.sk, zero, y, ev))[0];
  };
  const std::int64_t flip = (h + 1) / 2;  // ceil(h / 2)
  CHECK(decrypt_with_noise(flip) == 1);
  CHECK(decrypt_with_noise(-flip - 1) == 1);
  CHECK(decrypt_with_noise(flip - 1) == 0);
  CHECK(decrypt_with_noise(-(flip - 1)) == 0);
  // floor(q/4) reaches the threshold exactly when q = 1 mod 4.
  const std::int64_t quarter = static_cast<std::int64_t>(f.p.q / 4);
  CHECK(decrypt_with_noise(quarter) == (f.p.q % 4 == 1 ? 1 : 0));
}

TEST_CASE("fresh round trips and noise") {
  auto& f = fixture();
  for (int trial = 0; trial < 300; ++trial) {
    const Plaintext m = f.random_message();
    const Ciphertext ct = encrypt(f.sk, m, f.rng);
    CHECK(ct.c.size() == f.p.ell);
    CHECK(decrypt(f.sk, ct) == m);
    const auto noise = noise_norm(noise_of(f.sk, ct, m));
    CHECK(noise <= f.p.B);
    CHECK(Rational(static_cast<long>(noise)) <= *ct.noise_hint);
  }
}

TEST_CASE("addition") {
  auto& f = fixture();
  const Modulus q = f.p.modulus();
  for (int trial = 0; trial < 200; ++trial) {
    const Plaintext a = f.random_message(), b = f.random_message();
    const Ciphertext ca = encrypt(f.sk, a, f.rng), cb = encrypt(f.sk, b, f.rng);
    const Ciphertext sum = eval_add(ca, cb);
    CHECK(decrypt(f.sk, sum) == bitwise(a, b, false));
    CHECK(noise_norm(noise_of(f.sk, sum, bitwise(a, b, false))) <= 1 + 2 * f.p.B);
    CHECK(*sum.noise_hint == *ca.noise_hint + *cb.noise_hint + 1);
    CHECK(decrypt(f.sk, eval_add(ca, ca)) == Plaintext(f.p.slots(), 0));
    CHECK(decrypt(f.sk, eval_add(ca, encrypt(f.sk, Plaintext(f.p.slots(), 0), f.rng))) == a);
  }
  // Without noise: c S_dec = (m1 + m2) floor(q/2), and 2 floor(q/2) = -1 mod q.
  for (int trial = 0; trial < 20; ++trial) {
    const Plaintext a = f.random_message(), b = f.random_message();
    VectorZq y1(f.p.n()), y2(f.p.n());
    for (auto& x : y1) x = f.rng.uniform_residue(q);
    for (auto& x : y2) x = f.rng.uniform_residue(q);
    const VectorZq e(f.p.slots(), 0);
    const Ciphertext sum = eval_add(encrypt_with(f.sk, a, y1, e), encrypt_with(f.sk, b, y2, e));
    const VectorZq w = mul_mod(sum.c, f.sk.S_dec, q);
    const VectorZq noise = noise_of(f.sk, sum, bitwise(a, b, false));
    for (std::size_t j = 0; j < w.size(); ++j) {
      CHECK(w[j] == q.mul(a[j] + b[j], q.half()));
      CHECK(noise[j] == -static_cast<std::int64_t>(a[j] & b[j]));
    }
  }
}

TEST_CASE("multiplication truth table and noise bound") {
  auto& f = fixture();
  for (int trial = 0; trial < 25; ++trial) {
    for (int combo = 0; combo < 4; ++combo) {
      const Plaintext a(f.p.slots(), combo & 1), b(f.p.slots(), (combo >> 1) & 1);
      const Ciphertext ca = encrypt(f.sk, a, f.rng), cb = encrypt(f.sk, b, f.rng);
      const Ciphertext prod = eval_mult(f.evk, ca, cb);
      CHECK(prod.c.size() == f.p.ell);
      CHECK(prod.level == 1);
      CHECK(decrypt(f.sk, prod) == bitwise(a, b, true));
      const auto na = noise_norm(noise_of(f.sk, ca, a));
      const auto nb = noise_norm(noise_of(f.sk, cb, b));
      const auto np = noise_norm(noise_of(f.sk, prod, bitwise(a, b, true)));
      CHECK(Rational(static_cast<long>(np)) <= mult_noise_bound(f.p, na, nb));
      CHECK(Rational(static_cast<long>(np)) <= *prod.noise_hint);
    }
  }
}

TEST_CASE("all-ones is a multiplicative identity on plaintexts") {
  auto& f = fixture();
  const Plaintext ones(f.p.slots(), 1);
  for (int trial = 0; trial < 20; ++trial) {
    const Plaintext m = f.random_message();
    const Ciphertext prod = eval_mult(f.evk, encrypt(f.sk, m, f.rng), encrypt(f.sk, ones, f.rng));
    CHECK(decrypt(f.sk, prod) == m);
  }
}

TEST_CASE("floor of the exact product and threading") {
  auto& f = fixture();
  const Modulus q = f.p.modulus();
  const Plaintext a = f.random_message(), b = f.random_message();
  const Ciphertext ca = encrypt(f.sk, a, f.rng), cb = encrypt(f.sk, b, f.rng);
  const Ciphertext prod = eval_mult(f.evk, ca, cb);
  const VectorQ exact = eval_mult_exact(f.evk, ca, cb);
  for (std::size_t k = 0; k < f.p.ell; ++k) CHECK(prod.c[k] == q.reduce(round_floor(exact[k])));
  CHECK(eval_mult(f.evk, ca, cb, 3) == prod);
}

TEST_CASE("levels and the depth budget") {
  auto& f = fixture();
  REQUIRE(f.p.L == 2);
  const Plaintext a = f.random_message(), b = f.random_message(), c = f.random_message();
  const Ciphertext ca = encrypt(f.sk, a, f.rng), cb = encrypt(f.sk, b, f.rng),
                   cc = encrypt(f.sk, c, f.rng);
  const Ciphertext ab = eval_mult(f.evk, ca, cb);
  CHECK(eval_add(ab, cc).level == 1);
  const Ciphertext abc = eval_mult(f.evk, ab, cc);
  CHECK(abc.level == 2);
  CHECK(decrypt(f.sk, abc) == bitwise(bitwise(a, b, true), c, true));
  CHECK_THROWS_AS(eval_mult(f.evk, abc, ca), DepthError);
}

TEST_CASE("mismatched keys are refused") {
  auto& f = fixture();
  Rng other_rng(77);
  const SecretKey other = keygen(f.p, other_rng);
  const Ciphertext ct = encrypt(f.sk, f.random_message(), f.rng);
  CHECK_THROWS_AS(decrypt(other, ct), ParameterError);
  CHECK_THROWS_AS(eval_add(ct, encrypt(other, f.random_message(), other_rng)), ParameterError);
  const SecretKey small = keygen(preset("small"), other_rng);
  CHECK_THROWS_AS(decrypt(small, ct), ParameterError);
  CHECK_THROWS_AS(encrypt(f.sk, Plaintext(f.p.slots() + 1, 0), f.rng), DimensionError);
}

TEST_CASE("noise warning") {
  auto& f = fixture();
  std::vector<std::string> warnings;
  set_warning_handler([&](const std::string& m) { warnings.push_back(m); });
  Ciphertext ct = encrypt(f.sk, f.random_message(), f.rng);
  decrypt(f.sk, ct);
  CHECK(warnings.empty());
  ct.noise_hint = Rational(static_cast<long>(f.p.q / 4 + 1));
  decrypt(f.sk, ct);
  CHECK(warnings.size() == 1);
  set_warning_handler([](const std::string&) {});
}

TEST_CASE("public key") {
  auto& f = fixture();
  CHECK(f.p.log2q() == 40);
  CHECK(public_key_rows(f.p, Rational(1, 10)) == 352);
  CHECK(public_key_rows(f.p, Rational(1, 3)) == 427);  // ceil(4/3 * 320)
  CHECK_THROWS_AS(public_key_rows(f.p, Rational(0)), ParameterError);

  const PublicKey pk = pk_keygen(f.sk, f.rng);
  REQUIRE(pk.C0.rows() == 352);
  const Plaintext zero(f.p.slots(), 0);
  for (std::size_t i = 0; i < pk.C0.rows(); ++i) {
    Ciphertext ct = encrypt(f.sk, zero, f.rng);
    ct.c.assign(pk.C0.row(i), pk.C0.row(i) + f.p.ell);
    CHECK(decrypt(f.sk, ct) == zero);
  }
  for (std::size_t i = 0; i < pk.C_pk.rows(); ++i) {
    Ciphertext ct = encrypt(f.sk, zero, f.rng);
    ct.c.assign(pk.C_pk.row(i), pk.C_pk.row(i) + f.p.ell);
    Plaintext unit(f.p.slots(), 0);
    unit[i] = 1;
    CHECK(decrypt(f.sk, ct) == unit);
  }
  for (int trial = 0; trial < 100; ++trial) {
    const Plaintext a = f.random_message(), b = f.random_message();
    const Ciphertext ca = pk_encrypt(pk, a, f.rng), cb = pk_encrypt(pk, b, f.rng);
    CHECK(decrypt(f.sk, ca) == a);
    CHECK(Rational(noise_norm(noise_of(f.sk, ca, a))) <= *ca.noise_hint);
    if (trial < 10) {
      CHECK(decrypt(f.sk, eval_add(ca, cb)) == bitwise(a, b, false));
      CHECK(decrypt(f.sk, eval_mult(f.evk, ca, cb)) == bitwise(a, b, true));
    }
  }
  Rng other(5);
  CHECK_FALSE(pk_keygen(f.sk, other).C0 == pk.C0);
}

TEST_CASE("empty subset and zero message give the zero ciphertext") {
  auto& f = fixture();
  PublicKey pk = pk_keygen(f.sk, f.rng);
  pk.C0 = MatrixZq(0, f.p.ell);
  const Ciphertext ct = pk_encrypt(pk, Plaintext(f.p.slots(), 0), f.rng);
  CHECK(ct.c == VectorZq(f.p.ell, 0));
  CHECK(*ct.noise_hint == 0);
}
