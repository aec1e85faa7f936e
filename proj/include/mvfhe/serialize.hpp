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

#ifndef MVFHE_SERIALIZE_HPP_
#define MVFHE_SERIALIZE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "mvfhe/keys.hpp"
#include "mvfhe/params.hpp"
#include "mvfhe/she.hpp"

namespace mvfhe {

// Binary container shared by every file type:
//
//   "MVFH" | u16 version | u8 kind | u32 len, Params block | u64 fingerprint
//   | u64 key id | u64 len, payload | u64 FNV-1a checksum of all prior bytes
//
// Integers are little-endian. Big integers are a sign byte, a u32 length and
// the big-endian magnitude; rationals are numerator then denominator.
enum class FileKind : std::uint8_t {
  kParams = 1,
  kSecretKey = 2,
  kPublicKey = 3,
  kEvalKey = 4,
  kCiphertexts = 5,
};

inline constexpr std::uint16_t kFormatVersion = 1;

const char* kind_name(FileKind kind);

std::uint64_t fnv1a64(const std::string& bytes);
std::string params_block(const Params& p);

std::string serialize(const Params& p);
std::string serialize(const SecretKey& sk);
std::string serialize(const PublicKey& pk);
std::string serialize(const EvalKey& evk);
std::string serialize(const Params& p, const std::vector<Ciphertext>& cts);

// Header fields, validated (magic, version, checksum, fingerprint) but with
// the payload left unparsed.
struct ContainerInfo {
  std::uint16_t version = 0;
  FileKind kind = FileKind::kParams;
  Params params;
  std::uint64_t fingerprint = 0;
  std::uint64_t key_id = 0;
  std::uint64_t payload_size = 0;
};
ContainerInfo inspect(const std::string& bytes);

Params deserialize_params(const std::string& bytes);
SecretKey deserialize_secret_key(const std::string& bytes);
PublicKey deserialize_public_key(const std::string& bytes);
EvalKey deserialize_evalkey(const std::string& bytes);
std::vector<Ciphertext> deserialize_ciphertexts(const std::string& bytes);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& bytes);

}  // namespace mvfhe

#endif  // MVFHE_SERIALIZE_HPP_
