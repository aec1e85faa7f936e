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

#include "mvfhe/circuit.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "mvfhe/errors.hpp"

namespace mvfhe {

namespace {

struct Statement {
  std::vector<std::string> tokens;
  std::size_t line;
};

bool valid_identifier(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char ch) {
    return (ch >= 'a' && ch <= 'z') || (ch >= '0' && ch <= '9') || ch == '_';
  });
}

std::vector<Statement> split_statements(const std::string& text) {
  std::vector<Statement> out;
  std::istringstream lines(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(lines, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream parts(line);
    std::string part;
    while (std::getline(parts, part, ';')) {
      std::istringstream words(part);
      Statement st{{}, number};
      for (std::string w; words >> w;) st.tokens.push_back(w);
      if (!st.tokens.empty()) out.push_back(std::move(st));
    }
  }
  return out;
}

}  // namespace

Circuit parse_circuit(const std::string& text) {
  const auto statements = split_statements(text);
  // Pass 1: every defined identifier and the statement defining it.
  std::map<std::string, std::size_t> defined_at;
  for (std::size_t s = 0; s < statements.size(); ++s) {
    const auto& tk = statements[s].tokens;
    std::string id;
    if (tk[0] == "in" && tk.size() == 2) {
      id = tk[1];
    } else if (tk.size() == 5 && tk[1] == "=") {
      id = tk[0];
    } else if (tk[0] == "out" && tk.size() == 2) {
      continue;
    } else {
      throw ParseError("malformed statement", statements[s].line);
    }
    if (!valid_identifier(id)) throw ParseError("invalid identifier '" + id + "'", statements[s].line);
    if (!defined_at.emplace(id, s).second) {
      throw ParseError("identifier '" + id + "' defined twice", statements[s].line);
    }
  }

  auto depends_on = [&](std::size_t from, std::size_t target) {
    std::vector<std::size_t> stack{from};
    std::vector<bool> seen(statements.size(), false);
    while (!stack.empty()) {
      std::size_t s = stack.back();
      stack.pop_back();
      if (s == target) return true;
      if (seen[s]) continue;
      seen[s] = true;
      const auto& tk = statements[s].tokens;
      if (tk.size() != 5) continue;
      for (int i = 3; i < 5; ++i) {
        auto it = defined_at.find(tk[i]);
        if (it != defined_at.end()) stack.push_back(it->second);
      }
    }
    return false;
  };

  Circuit c;
  std::map<std::string, std::size_t> gate_of;
  auto operand = [&](const std::string& name, std::size_t s) {
    auto it = gate_of.find(name);
    if (it != gate_of.end()) return it->second;
    auto later = defined_at.find(name);
    if (later == defined_at.end()) {
      throw ParseError("undefined identifier '" + name + "'", statements[s].line);
    }
    if (depends_on(later->second, s)) {
      throw ParseError("cycle through '" + name + "'", statements[s].line);
    }
    throw ParseError("forward reference to '" + name + "'", statements[s].line);
  };

  for (std::size_t s = 0; s < statements.size(); ++s) {
    const auto& tk = statements[s].tokens;
    Gate g;
    g.line = statements[s].line;
    if (tk[0] == "in" && tk.size() == 2) {
      g.id = tk[1];
      g.kind = GateKind::kInput;
      c.inputs.push_back(c.gates.size());
    } else if (tk[0] == "out" && tk.size() == 2) {
      g.id = tk[1];
      g.kind = GateKind::kOutput;
      g.operands.push_back(operand(tk[1], s));
      c.outputs.push_back(c.gates.size());
    } else {
      g.id = tk[0];
      if (tk[2] == "XOR") {
        g.kind = GateKind::kXor;
      } else if (tk[2] == "AND") {
        g.kind = GateKind::kAnd;
      } else {
        throw ParseError("unknown gate kind '" + tk[2] + "'", g.line);
      }
      g.operands.push_back(operand(tk[3], s));
      g.operands.push_back(operand(tk[4], s));
    }
    if (g.kind != GateKind::kOutput) gate_of[g.id] = c.gates.size();
    c.gates.push_back(std::move(g));
  }
  if (c.outputs.empty()) {
    throw ParseError("circuit has no output", statements.empty() ? 1 : statements.back().line);
  }
  const auto depths = gate_depths(c);
  for (auto o : c.outputs) c.depth = std::max(c.depth, depths[o]);
  return c;
}

std::vector<std::uint32_t> gate_depths(const Circuit& c) {
  std::vector<std::uint32_t> d(c.gates.size(), 0);
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    for (auto o : g.operands) d[i] = std::max(d[i], d[o]);
    if (g.kind == GateKind::kAnd) ++d[i];
  }
  return d;
}

std::string to_netlist(const Circuit& c) {
  std::ostringstream os;
  for (const Gate& g : c.gates) {
    switch (g.kind) {
      case GateKind::kInput:
        os << "in " << g.id << "\n";
        break;
      case GateKind::kOutput:
        os << "out " << c.gates[g.operands[0]].id << "\n";
        break;
      default:
        os << g.id << " = " << (g.kind == GateKind::kAnd ? "AND" : "XOR") << " "
           << c.gates[g.operands[0]].id << " " << c.gates[g.operands[1]].id << "\n";
    }
  }
  return os.str();
}

std::vector<Plaintext> eval_plain(const Circuit& c, const std::vector<Plaintext>& inputs) {
  if (inputs.size() != c.num_inputs()) {
    throw DimensionError("circuit expects " + std::to_string(c.num_inputs()) + " inputs");
  }
  std::vector<Plaintext> val(c.gates.size());
  std::size_t next_input = 0;
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    switch (g.kind) {
      case GateKind::kInput:
        val[i] = inputs[next_input++];
        if (val[i].size() != inputs[0].size()) throw DimensionError("input widths differ");
        break;
      case GateKind::kOutput:
        val[i] = val[g.operands[0]];
        break;
      default: {
        const Plaintext& a = val[g.operands[0]];
        const Plaintext& b = val[g.operands[1]];
        val[i].resize(a.size());
        for (std::size_t j = 0; j < a.size(); ++j)
          val[i][j] = g.kind == GateKind::kAnd ? (a[j] & b[j]) : (a[j] ^ b[j]);
      }
    }
  }
  std::vector<Plaintext> out;
  for (auto o : c.outputs) out.push_back(val[o]);
  return out;
}

std::vector<Ciphertext> eval_homomorphic(const EvalKey& evk, const Circuit& c,
                                         const std::vector<Ciphertext>& inputs) {
  if (inputs.size() != c.num_inputs()) {
    throw DimensionError("circuit expects " + std::to_string(c.num_inputs()) + " inputs");
  }
  std::vector<std::uint32_t> level(c.gates.size(), 0);
  std::size_t next_input = 0;
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    if (g.kind == GateKind::kInput) {
      level[i] = inputs[next_input++].level;
    } else {
      for (auto o : g.operands) level[i] = std::max(level[i], level[o]);
      if (g.kind == GateKind::kAnd) ++level[i];
    }
    if (level[i] > evk.params.L) {
      throw DepthError("gate '" + g.id + "' (line " + std::to_string(g.line) + ") needs level " +
                       std::to_string(level[i]) + " but the depth budget is " +
                       std::to_string(evk.params.L));
    }
  }

  std::vector<Ciphertext> val(c.gates.size());
  next_input = 0;
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    switch (g.kind) {
      case GateKind::kInput:
        val[i] = inputs[next_input++];
        break;
      case GateKind::kOutput:
        val[i] = val[g.operands[0]];
        break;
      case GateKind::kXor:
        val[i] = eval_add(val[g.operands[0]], val[g.operands[1]]);
        break;
      case GateKind::kAnd:
        val[i] = eval_mult(evk, val[g.operands[0]], val[g.operands[1]]);
        break;
    }
  }
  std::vector<Ciphertext> out;
  for (auto o : c.outputs) out.push_back(val[o]);
  return out;
}

}  // namespace mvfhe
