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

#include <functional>
#include <string>

#include "mvfhe/errors.hpp"
#include "mvfhe/linalg.hpp"
#include "mvfhe/serialize.hpp"

using namespace mvfhe;

namespace {

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

void put_u64(std::string& bytes, std::size_t at, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) bytes[at + i] = static_cast<char>((v >> (8 * i)) & 0xff);
}

// Rewrites the trailing checksum so only the targeted field is wrong.
void reseal(std::string& bytes) {
  put_u64(bytes, bytes.size() - 8, fnv1a64(bytes.substr(0, bytes.size() - 8)));
}

Ciphertext random_ciphertext(const Params& p, Rng& rng) {
  Ciphertext ct;
  const Modulus q = p.modulus();
  ct.c.resize(p.ell);
  for (auto& x : ct.c) x = rng.uniform_residue(q);
  ct.level = static_cast<std::uint32_t>(rng.uniform_below(p.L + 1));
  ct.q = p.q;
  ct.params_id = fingerprint(p);
  ct.key_id = rng.next();
  if (rng.coin())
    ct.noise_hint = Rational(BigInt(static_cast<long>(rng.uniform_int(0, 1 << 30))),
                             BigInt(static_cast<long>(rng.uniform_int(1, 1000))));
  if (ct.noise_hint) ct.noise_hint->canonicalize();
  return ct;
}

}  // namespace

TEST_CASE("params round trip and fingerprint") {
  for (const char* name : {"toy", "small", "depth3"}) {
    const Params p = preset(name);
    const std::string bytes = serialize(p);
    CHECK(deserialize_params(bytes) == p);
    CHECK(serialize(deserialize_params(bytes)) == bytes);
    const ContainerInfo info = inspect(bytes);
    CHECK(info.version == kFormatVersion);
    CHECK(info.kind == FileKind::kParams);
    CHECK(info.fingerprint == fnv1a64(params_block(p)));
  }
  Params a = preset("toy"), b = a;
  b.B += 1;
  CHECK(fingerprint(a) != fingerprint(b));
  b = a;
  b.gadget = false;
  CHECK(fingerprint(a) != fingerprint(b));
}

TEST_CASE("ciphertext round trips") {
  const Params p = preset("toy");
  Rng rng(77);
  std::vector<Ciphertext> cts;
  for (int i = 0; i < 1000; ++i) cts.push_back(random_ciphertext(p, rng));
  const std::string bytes = serialize(p, cts);
  const auto back = deserialize_ciphertexts(bytes);
  REQUIRE(back.size() == cts.size());
  for (std::size_t i = 0; i < cts.size(); ++i) {
    CHECK(back[i] == cts[i]);
    CHECK(back[i].noise_hint == cts[i].noise_hint);
  }
  CHECK(serialize(p, back) == bytes);

  // One ciphertext per file, too.
  for (int i = 0; i < 50; ++i) {
    const auto one = deserialize_ciphertexts(serialize(p, {cts[i]}));
    REQUIRE(one.size() == 1);
    CHECK(one[0] == cts[i]);
  }

  Ciphertext foreign = cts[0];
  foreign.params_id ^= 1;
  CHECK_THROWS_AS(serialize(p, {foreign}), ParameterError);
}

TEST_CASE("secret key round trips") {
  Rng rng(78);
  const Params p = preset("toy");
  for (int i = 0; i < 1000; ++i) {
    const SecretKey sk = keygen(p, rng);
    const std::string bytes = serialize(sk);
    const SecretKey back = deserialize_secret_key(bytes);
    REQUIRE(back == sk);
    REQUIRE(serialize(back) == bytes);
  }
}

TEST_CASE("public key round trips") {
  Rng rng(79);
  const Params p = preset("toy");
  const SecretKey sk = keygen(p, rng);
  const PublicKey real = pk_keygen(sk, rng);
  CHECK(deserialize_public_key(serialize(real)) == real);
  const Modulus q = p.modulus();
  for (int i = 0; i < 200; ++i) {
    // Synthetic keys: random content with consistent shapes.
    PublicKey pk;
    pk.params = p;
    pk.key_id = rng.next();
    pk.eps = Rational(BigInt(static_cast<long>(rng.uniform_int(1, 9))), BigInt(10));
    pk.eps.canonicalize();
    pk.C0 = MatrixZq(public_key_rows(p, pk.eps), p.ell);
    pk.C_pk = MatrixZq(p.slots(), p.ell);
    for (auto& x : pk.C0.data()) x = rng.uniform_residue(q);
    for (auto& x : pk.C_pk.data()) x = rng.uniform_residue(q);
    const std::string bytes = serialize(pk);
    REQUIRE(deserialize_public_key(bytes) == pk);
    REQUIRE(serialize(deserialize_public_key(bytes)) == bytes);
  }
}

TEST_CASE("evaluation key round trips") {
  Rng rng(80);
  SUBCASE("synthetic plain keys") {
    SetupOverrides o;
    o.gadget = false;
    const Params p = preset("toy", o);
    for (int i = 0; i < 1000; ++i) {
      EvalKey evk;
      evk.params = p;
      evk.key_id = rng.next();
      evk.gadget = false;
      evk.dim = p.ell;
      evk.denominator = BigInt(static_cast<unsigned long>(p.q)) << (2 * p.u);
      evk.numerators.resize(p.ell * p.ell * p.ell);
      for (auto& x : evk.numerators)
        x = (static_cast<int128>(rng.next()) << 32) - (static_cast<int128>(1) << 95);
      const std::string bytes = serialize(evk);
      REQUIRE(deserialize_evalkey(bytes) == evk);
      REQUIRE(serialize(deserialize_evalkey(bytes)) == bytes);
    }
  }
  SUBCASE("real gadget keys") {
    const Params p = preset("toy");
    for (int i = 0; i < 3; ++i) {
      const SecretKey sk = keygen(p, rng);
      const EvalKey evk = build_evalkey(sk, rng);
      const std::string bytes = serialize(evk);
      const EvalKey back = deserialize_evalkey(bytes);
      REQUIRE(back == evk);
      CHECK(serialize(back) == bytes);
      // The loaded key still multiplies.
      const Ciphertext a = encrypt(sk, Plaintext(p.slots(), 1), rng);
      CHECK(decrypt(sk, eval_mult(back, a, a)) == Plaintext(p.slots(), 1));
    }
  }
}

TEST_CASE("corrupted containers are rejected") {
  Rng rng(81);
  const Params p = preset("toy");
  const SecretKey sk = keygen(p, rng);
  const std::string good = serialize(sk);

  SUBCASE("version is checked before the checksum") {
    std::string bad = good;
    bad[4] = static_cast<char>(kFormatVersion + 1);
    CHECK(message_of([&] { deserialize_secret_key(bad); }).find("version") != std::string::npos);
    reseal(bad);
    CHECK(message_of([&] { deserialize_secret_key(bad); }).find("version") != std::string::npos);
  }
  SUBCASE("checksum") {
    for (std::size_t at : {std::size_t{20}, good.size() / 2, good.size() - 9}) {
      std::string bad = good;
      bad[at] = static_cast<char>(bad[at] ^ 0x5a);
      CHECK(message_of([&] { deserialize_secret_key(bad); }).find("checksum") != std::string::npos);
    }
  }
  SUBCASE("truncation") {
    for (std::size_t len : {std::size_t{0}, std::size_t{3}, std::size_t{10}, good.size() / 2, good.size() - 1})
      CHECK_THROWS_AS(deserialize_secret_key(good.substr(0, len)), FormatError);
  }
  SUBCASE("wrong kind") {
    CHECK(message_of([&] { deserialize_evalkey(good); }).find("expected") != std::string::npos);
    CHECK_THROWS_AS(deserialize_ciphertexts(serialize(p)), FormatError);
    std::string bad = good;
    bad[6] = 9;
    reseal(bad);
    CHECK(message_of([&] { inspect(bad); }).find("kind") != std::string::npos);
  }
  SUBCASE("magic") {
    std::string bad = good;
    bad[0] = 'X';
    CHECK_THROWS_AS(inspect(bad), FormatError);
  }
  SUBCASE("secret key contents") {
    // Flip a byte inside the payload and reseal: the key must still be
    // rejected or come back self-consistent.
    for (int trial = 0; trial < 50; ++trial) {
      std::string bad = good;
      const std::size_t at = good.size() - 9 - rng.uniform_below(good.size() / 3);
      bad[at] = static_cast<char>(bad[at] ^ (1 + rng.uniform_below(255)));
      reseal(bad);
      try {
        const SecretKey k = deserialize_secret_key(bad);
        CHECK(mul_mod(k.R, k.R_inv, p.modulus()) == MatrixZq::identity(p.ell));
      } catch (const FormatError&) {
      }
    }
  }
}
