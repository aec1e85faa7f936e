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

#ifndef MVFHE_CIRCUIT_HPP_
#define MVFHE_CIRCUIT_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mvfhe/keys.hpp"
#include "mvfhe/she.hpp"

namespace mvfhe {

enum class GateKind { kInput, kXor, kAnd, kOutput };

struct Gate {
  std::string id;
  GateKind kind;
  std::vector<std::size_t> operands;  // indices of earlier gates
  std::size_t line = 0;
};

// Leveled GF(2) circuit in topological order.
struct Circuit {
  std::vector<Gate> gates;
  std::vector<std::size_t> inputs;
  std::vector<std::size_t> outputs;
  std::uint32_t depth = 0;  // multiplicative depth

  std::size_t num_inputs() const { return inputs.size(); }
};

// Netlist, one statement per line or ';'-separated:
//   in <id>
//   <id> = XOR <a> <b>
//   <id> = AND <a> <b>
//   out <id>
// '#' starts a comment; identifiers match [a-z0-9_]+.
Circuit parse_circuit(const std::string& text);
std::string to_netlist(const Circuit& c);

// AND-depth of every gate.
std::vector<std::uint32_t> gate_depths(const Circuit& c);

std::vector<Plaintext> eval_plain(const Circuit& c, const std::vector<Plaintext>& inputs);

// Checks the depth budget up front (DepthError before any gate runs).
std::vector<Ciphertext> eval_homomorphic(const EvalKey& evk, const Circuit& c,
                                         const std::vector<Ciphertext>& inputs);

}  // namespace mvfhe

#endif  // MVFHE_CIRCUIT_HPP_
