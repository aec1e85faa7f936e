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

#include "mvfhe/serialize.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include "mvfhe/errors.hpp"

namespace mvfhe {

namespace {

constexpr char kMagic[4] = {'M', 'V', 'F', 'H'};

class Writer {
 public:
  void u8(std::uint8_t x) { out_.push_back(static_cast<char>(x)); }
  void u16(std::uint16_t x) { le(x, 2); }
  void u32(std::uint32_t x) { le(x, 4); }
  void u64(std::uint64_t x) { le(x, 8); }
  void i64(std::int64_t x) { le(static_cast<std::uint64_t>(x), 8); }
  void i128(int128 x) {
    const auto ux = static_cast<uint128>(x);
    le(static_cast<std::uint64_t>(ux), 8);
    le(static_cast<std::uint64_t>(ux >> 64), 8);
  }
  void bigint(const BigInt& x) {
    u8(sgn(x) < 0 ? 1 : 0);
    std::size_t count = 0;
    std::string mag((mpz_sizeinbase(x.get_mpz_t(), 2) + 7) / 8, '\0');
    mpz_export(mag.data(), &count, 1, 1, 1, 0, x.get_mpz_t());
    mag.resize(count);
    u32(static_cast<std::uint32_t>(mag.size()));
    out_ += mag;
  }
  void rational(const Rational& x) {
    bigint(x.get_num());
    bigint(x.get_den());
  }
  void bytes(const std::string& s) {
    u64(s.size());
    out_ += s;
  }
  void raw(const std::string& s) { out_ += s; }
  void matrix(const MatrixZq& m) {
    u64(m.rows());
    u64(m.cols());
    for (auto x : m.data()) i64(x);
  }
  void vector(const VectorZq& v) {
    u64(v.size());
    for (auto x : v) i64(x);
  }

  const std::string& str() const { return out_; }

 private:
  void le(std::uint64_t x, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<char>((x >> (8 * i)) & 0xff));
  }
  std::string out_;
};

class Reader {
 public:
  explicit Reader(const std::string& in, std::size_t pos = 0, std::size_t end = std::string::npos)
      : in_(in), pos_(pos), end_(end == std::string::npos ? in.size() : end) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(le(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(le(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::uint64_t u64() { return le(8); }
  std::int64_t i64() { return static_cast<std::int64_t>(le(8)); }
  int128 i128() {
    const uint128 lo = le(8);
    const uint128 hi = le(8);
    return static_cast<int128>((hi << 64) | lo);
  }
  BigInt bigint() {
    const std::uint8_t sign = u8();
    if (sign > 1) throw FormatError("bad integer sign byte");
    const std::uint32_t len = u32();
    need(len);
    BigInt x;
    if (len > 0) mpz_import(x.get_mpz_t(), len, 1, 1, 1, 0, in_.data() + pos_);
    pos_ += len;
    return sign ? BigInt(-x) : x;
  }
  Rational rational() {
    BigInt num = bigint();
    BigInt den = bigint();
    if (den <= 0) throw FormatError("rational with non-positive denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  std::string bytes() {
    const std::uint64_t len = u64();
    need(len);
    std::string s = in_.substr(pos_, len);
    pos_ += len;
    return s;
  }
  std::size_t count(std::size_t element_size) {
    const std::uint64_t n = u64();
    if (element_size != 0 && n > remaining() / element_size) throw FormatError("length field exceeds data");
    return static_cast<std::size_t>(n);
  }
  MatrixZq matrix() {
    const std::uint64_t rows = u64();
    const std::uint64_t cols = u64();
    if (cols != 0 && rows > remaining() / 8 / cols) throw FormatError("matrix exceeds data");
    MatrixZq m(rows, cols);
    for (auto& x : m.data()) x = i64();
    return m;
  }
  VectorZq vector() {
    VectorZq v(count(8));
    for (auto& x : v) x = i64();
    return v;
  }

  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return end_ - pos_; }
  void expect_end() const {
    if (pos_ != end_) throw FormatError("trailing bytes in payload");
  }

 private:
  void need(std::uint64_t n) const {
    if (n > remaining()) throw FormatError("unexpected end of data");
  }
  std::uint64_t le(int n) {
    need(static_cast<std::uint64_t>(n));
    std::uint64_t x = 0;
    for (int i = 0; i < n; ++i)
      x |= static_cast<std::uint64_t>(static_cast<unsigned char>(in_[pos_ + i])) << (8 * i);
    pos_ += n;
    return x;
  }

  const std::string& in_;
  std::size_t pos_;
  std::size_t end_;
};

void write_params(Writer& w, const Params& p) {
  w.u32(p.lambda);
  w.u32(p.L);
  w.u32(p.v);
  w.u32(p.r_g);
  w.u32(p.r_prime);
  w.u64(p.ell);
  w.u64(p.q);
  w.rational(p.sigma);
  w.i64(p.B);
  w.u32(p.u);
  w.u8(p.gadget ? 1 : 0);
  w.rational(p.depth_constant);
}

Params read_params(const std::string& block) {
  Reader r(block);
  Params p;
  p.lambda = r.u32();
  p.L = r.u32();
  p.v = r.u32();
  p.r_g = r.u32();
  p.r_prime = r.u32();
  p.ell = r.u64();
  p.q = r.u64();
  p.sigma = r.rational();
  p.B = r.i64();
  p.u = r.u32();
  p.gadget = r.u8() != 0;
  p.depth_constant = r.rational();
  r.expect_end();
  try {
    p.validate();
  } catch (const ParameterError& e) {
    throw FormatError(std::string("stored parameters are invalid: ") + e.what());
  }
  return p;
}

std::string container(FileKind kind, const Params& p, std::uint64_t key_id,
                      const std::string& payload) {
  Writer w;
  w.raw(std::string(kMagic, 4));
  w.u16(kFormatVersion);
  w.u8(static_cast<std::uint8_t>(kind));
  const std::string block = params_block(p);
  w.u32(static_cast<std::uint32_t>(block.size()));
  w.raw(block);
  w.u64(fnv1a64(block));
  w.u64(key_id);
  w.bytes(payload);
  w.u64(fnv1a64(w.str()));
  return w.str();
}

struct Opened {
  ContainerInfo info;
  std::size_t payload_pos = 0;
};

Opened open(const std::string& bytes) {
  if (bytes.size() < 4 || bytes.compare(0, 4, kMagic, 4) != 0) throw FormatError("not an mvfhe file");
  Reader r(bytes, 4);
  Opened o;
  o.info.version = r.u16();
  if (o.info.version != kFormatVersion) {
    throw FormatError("unsupported format version " + std::to_string(o.info.version) +
                      " (expected " + std::to_string(kFormatVersion) + ")");
  }
  if (bytes.size() < 8 + 4 + 2 + 1) throw FormatError("truncated file");
  const std::size_t body = bytes.size() - 8;
  Reader tail(bytes, body);
  if (tail.u64() != fnv1a64(bytes.substr(0, body))) throw FormatError("checksum mismatch");

  Reader h(bytes, 6, body);
  const std::uint8_t kind = h.u8();
  if (kind < 1 || kind > 5) throw FormatError("unknown file kind " + std::to_string(kind));
  o.info.kind = static_cast<FileKind>(kind);
  const std::uint32_t block_len = h.u32();
  if (block_len > h.remaining()) throw FormatError("unexpected end of data");
  const std::string block = bytes.substr(h.pos(), block_len);
  Reader skip(bytes, h.pos() + block_len, body);
  o.info.fingerprint = skip.u64();
  if (o.info.fingerprint != fnv1a64(block)) throw FormatError("parameter fingerprint mismatch");
  o.info.params = read_params(block);
  o.info.key_id = skip.u64();
  o.info.payload_size = skip.u64();
  if (o.info.payload_size != skip.remaining()) throw FormatError("payload length mismatch");
  o.payload_pos = skip.pos();
  return o;
}

Opened open_as(const std::string& bytes, FileKind kind) {
  Opened o = open(bytes);
  if (o.info.kind != kind) {
    throw FormatError(std::string("expected a ") + kind_name(kind) + " file, got " +
                      kind_name(o.info.kind));
  }
  return o;
}

void write_poly(Writer& w, const Polynomial& f) {
  w.u64(f.terms().size());
  for (const auto& [m, c] : f.terms()) {
    for (auto e : m.exponents) w.u32(e);
    w.i64(c);
  }
}

Polynomial read_poly(Reader& r, const Params& p) {
  const Modulus q = p.modulus();
  Polynomial f(p.v, q);
  const std::size_t terms = r.count(8 + 4 * p.v);
  for (std::size_t i = 0; i < terms; ++i) {
    std::vector<std::uint32_t> e(p.v);
    for (auto& x : e) x = r.u32();
    const std::int64_t c = r.i64();
    if (c == 0 || q.reduce(static_cast<int128>(c)) != c) throw FormatError("coefficient not balanced");
    f.add_term(Monomial(std::move(e)), c);
  }
  return f;
}

}  // namespace

const char* kind_name(FileKind kind) {
  switch (kind) {
    case FileKind::kParams: return "params";
    case FileKind::kSecretKey: return "secret-key";
    case FileKind::kPublicKey: return "public-key";
    case FileKind::kEvalKey: return "eval-key";
    case FileKind::kCiphertexts: return "ciphertext";
  }
  return "unknown";
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string params_block(const Params& p) {
  Writer w;
  write_params(w, p);
  return w.str();
}

std::uint64_t fingerprint(const Params& p) { return fnv1a64(params_block(p)); }

std::string serialize(const Params& p) { return container(FileKind::kParams, p, 0, {}); }

std::string serialize(const SecretKey& sk) {
  Writer w;
  write_poly(w, sk.g);
  w.u64(sk.points.size());
  for (const Point& z : sk.points)
    for (auto x : z) w.i64(x);
  w.matrix(sk.R1);
  w.matrix(sk.R2);
  return container(FileKind::kSecretKey, sk.params, sk.key_id, w.str());
}

std::string serialize(const PublicKey& pk) {
  Writer w;
  w.rational(pk.eps);
  w.matrix(pk.C0);
  w.matrix(pk.C_pk);
  return container(FileKind::kPublicKey, pk.params, pk.key_id, w.str());
}

std::string serialize(const EvalKey& evk) {
  Writer w;
  w.u8(evk.gadget ? 1 : 0);
  w.u64(evk.dim);
  w.bigint(evk.denominator);
  w.u64(evk.numerators.size());
  for (auto x : evk.numerators) w.i128(x);
  return container(FileKind::kEvalKey, evk.params, evk.key_id, w.str());
}

std::string serialize(const Params& p, const std::vector<Ciphertext>& cts) {
  const std::uint64_t pid = fingerprint(p);
  Writer w;
  w.u64(cts.size());
  std::uint64_t key_id = 0;
  for (const Ciphertext& ct : cts) {
    if (ct.params_id != pid) throw ParameterError("ciphertext was produced under other parameters");
    key_id = ct.key_id;
    w.vector(ct.c);
    w.u32(ct.level);
    w.u64(ct.q);
    w.u64(ct.params_id);
    w.u64(ct.key_id);
    w.u8(ct.noise_hint ? 1 : 0);
    if (ct.noise_hint) w.rational(*ct.noise_hint);
  }
  return container(FileKind::kCiphertexts, p, key_id, w.str());
}

ContainerInfo inspect(const std::string& bytes) { return open(bytes).info; }

Params deserialize_params(const std::string& bytes) {
  Opened o = open_as(bytes, FileKind::kParams);
  if (o.info.payload_size != 0) throw FormatError("params file carries a payload");
  return o.info.params;
}

SecretKey deserialize_secret_key(const std::string& bytes) {
  Opened o = open_as(bytes, FileKind::kSecretKey);
  const Params& p = o.info.params;
  Reader r(bytes, o.payload_pos, bytes.size() - 8);
  Polynomial g = read_poly(r, p);
  std::vector<Point> points(r.count(8 * p.v), Point(p.v));
  for (auto& z : points)
    for (auto& x : z) x = r.i64();
  MatrixZq r1 = r.matrix();
  MatrixZq r2 = r.matrix();
  r.expect_end();
  try {
    return assemble_secret_key(p, o.info.key_id, std::move(g), std::move(points), std::move(r1),
                               std::move(r2));
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(std::string("inconsistent secret key: ") + e.what());
  }
}

PublicKey deserialize_public_key(const std::string& bytes) {
  Opened o = open_as(bytes, FileKind::kPublicKey);
  Reader r(bytes, o.payload_pos, bytes.size() - 8);
  PublicKey pk;
  pk.params = o.info.params;
  pk.key_id = o.info.key_id;
  pk.eps = r.rational();
  pk.C0 = r.matrix();
  pk.C_pk = r.matrix();
  r.expect_end();
  const std::size_t ell = pk.params.ell;
  if (pk.C0.cols() != ell || pk.C_pk.cols() != ell || pk.C_pk.rows() != pk.params.slots()) {
    throw FormatError("public key has wrong dimensions");
  }
  return pk;
}

EvalKey deserialize_evalkey(const std::string& bytes) {
  Opened o = open_as(bytes, FileKind::kEvalKey);
  Reader r(bytes, o.payload_pos, bytes.size() - 8);
  EvalKey evk;
  evk.params = o.info.params;
  evk.key_id = o.info.key_id;
  evk.gadget = r.u8() != 0;
  evk.dim = r.u64();
  evk.denominator = r.bigint();
  evk.numerators.resize(r.count(16));
  for (auto& x : evk.numerators) x = r.i128();
  r.expect_end();
  const std::size_t expect_dim = evk.gadget ? evk.params.gadget_dim() : evk.params.ell;
  if (evk.dim != expect_dim || evk.numerators.size() != evk.dim * evk.dim * evk.params.ell) {
    throw FormatError("evaluation key has wrong dimensions");
  }
  return evk;
}

std::vector<Ciphertext> deserialize_ciphertexts(const std::string& bytes) {
  Opened o = open_as(bytes, FileKind::kCiphertexts);
  Reader r(bytes, o.payload_pos, bytes.size() - 8);
  const std::uint64_t pid = o.info.fingerprint;
  std::vector<Ciphertext> cts(r.count(8 + 4 + 8 + 8 + 8 + 1));
  for (Ciphertext& ct : cts) {
    ct.c = r.vector();
    ct.level = r.u32();
    ct.q = r.u64();
    ct.params_id = r.u64();
    ct.key_id = r.u64();
    if (r.u8() != 0) ct.noise_hint = r.rational();
    if (ct.params_id != pid || ct.q != o.info.params.q || ct.c.size() != o.info.params.ell) {
      throw FormatError("ciphertext does not match the file parameters");
    }
  }
  r.expect_end();
  return cts;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("write failed: " + path);
}

}  // namespace mvfhe
