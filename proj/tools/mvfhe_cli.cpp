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

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bench.hpp"
#include "mvfhe/circuit.hpp"
#include "mvfhe/errors.hpp"
#include "mvfhe/keys.hpp"
#include "mvfhe/mvpoly.hpp"
#include "mvfhe/params.hpp"
#include "mvfhe/serialize.hpp"
#include "mvfhe/she.hpp"

using namespace mvfhe;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string preset = "toy";
  std::string gadget = "on";
  bool zero_noise = false;
};

SetupOverrides overrides_from(const Globals& g) {
  SetupOverrides o;
  o.gadget = g.gadget == "on";
  if (g.zero_noise) o.sigma = Rational(0);
  return o;
}

// Seed for key material and encryption randomness.
Rng make_rng(const Globals& g) {
  if (g.seed) return Rng(*g.seed);
  return Rng(std::random_device{}() ^ (std::uint64_t{std::random_device{}()} << 32));
}

Params load_params(const Globals& g, const std::string& params_file) {
  if (!params_file.empty()) return deserialize_params(read_file(params_file));
  return preset(g.preset, overrides_from(g));
}

Plaintext parse_bits(const std::string& s, std::size_t slots) {
  if (s.size() != slots) {
    throw ParameterError("plaintext '" + s + "' must have " + std::to_string(slots) + " bits");
  }
  Plaintext m(slots);
  for (std::size_t j = 0; j < slots; ++j) {
    if (s[j] != '0' && s[j] != '1') throw ParameterError("plaintext bits must be 0 or 1");
    m[j] = static_cast<std::uint8_t>(s[j] - '0');
  }
  return m;
}

// "0.1", "1/10" or "3".
Rational parse_fraction(const std::string& s) {
  const auto dot = s.find('.');
  std::string digits = s;
  BigInt den = 1;
  if (dot != std::string::npos) {
    digits = s.substr(0, dot) + s.substr(dot + 1);
    for (std::size_t i = dot + 1; i < s.size(); ++i) den *= 10;
    digits += "/" + den.get_str();
  }
  try {
    Rational r(digits);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw ParameterError("cannot parse '" + s + "' as a number");
  }
}

std::string bits_string(const Plaintext& m) {
  std::string s;
  for (auto b : m) s.push_back(static_cast<char>('0' + b));
  return s;
}

void print_matrix(std::ostream& os, const std::string& name, const MatrixZq& m) {
  os << name << " (" << m.rows() << "x" << m.cols() << ")\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? " " : "  ") << m(i, j);
    os << "\n";
  }
}

void print_margin(const Params& p) {
  const Rational lhs = p.depth_margin_lhs();
  const Rational rhs = p.depth_margin_rhs();
  std::cout << "depth margin: q/B = " << lhs.get_d() << " vs (n log2 q)^L = " << rhs.get_d()
            << (lhs >= rhs ? " (satisfied)" : " (violated)") << "\n";
}

std::vector<Ciphertext> load_cts(const std::vector<std::string>& files) {
  std::vector<Ciphertext> all;
  for (const auto& f : files) {
    auto cts = deserialize_ciphertexts(read_file(f));
    all.insert(all.end(), cts.begin(), cts.end());
  }
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Leveled multi-bit FHE from multivariate polynomial evaluation"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Deterministic randomness seed");
  app.add_option("--preset", g.preset, "Parameter preset")
      ->check(CLI::IsMember({"toy", "small", "depth3"}));
  app.add_option("--gadget", g.gadget, "Gadget decomposition for multiplication")
      ->check(CLI::IsMember({"on", "off"}));
  app.add_flag("--zero-noise", g.zero_noise, "Test mode: sigma = 0");

  // params
  auto* params_cmd = app.add_subcommand("params", "Choose parameters and write a params file");
  std::optional<std::uint32_t> lambda, depth;
  std::string out;
  params_cmd->add_option("--lambda", lambda, "Security parameter (lower bound on n)");
  params_cmd->add_option("--depth", depth, "Multiplicative depth L");
  params_cmd->add_option("-o,--out", out, "Output file");

  // keygen
  auto* keygen_cmd = app.add_subcommand("keygen", "Generate a secret key");
  std::string params_file;
  bool dump = false;
  keygen_cmd->add_option("--params", params_file, "Params file (default: --preset)");
  keygen_cmd->add_option("-o,--out", out, "Secret key file")->required();
  keygen_cmd->add_flag("--dump-keys", dump, "Print g, the points and R as text");

  // evalkey
  auto* evk_cmd = app.add_subcommand("evalkey", "Derive the public multiplication key");
  std::string sk_file;
  evk_cmd->add_option("--sk", sk_file, "Secret key file")->required();
  evk_cmd->add_option("-o,--out", out, "Evaluation key file")->required();

  // encrypt
  auto* enc_cmd = app.add_subcommand("encrypt", "Encrypt bit strings under a secret key");
  std::vector<std::string> bits;
  enc_cmd->add_option("--sk", sk_file, "Secret key file")->required();
  enc_cmd->add_option("--bits", bits, "Plaintext, one 0/1 character per slot")->required();
  enc_cmd->add_option("-o,--out", out, "Ciphertext file")->required();

  // decrypt
  auto* dec_cmd = app.add_subcommand("decrypt", "Decrypt ciphertexts, one line each");
  std::vector<std::string> in_files;
  dec_cmd->add_option("--sk", sk_file, "Secret key file")->required();
  dec_cmd->add_option("--in", in_files, "Ciphertext file(s)")->required();

  // pk-keygen
  auto* pkg_cmd = app.add_subcommand("pk-keygen", "Derive a public encryption key");
  std::string eps_text = "1/10";
  pkg_cmd->add_option("--sk", sk_file, "Secret key file")->required();
  pkg_cmd->add_option("--eps", eps_text, "Row slack eps, as a fraction");
  pkg_cmd->add_option("-o,--out", out, "Public key file")->required();

  // pk-encrypt
  auto* pke_cmd = app.add_subcommand("pk-encrypt", "Encrypt bit strings under a public key");
  std::string pk_file;
  pke_cmd->add_option("--pk", pk_file, "Public key file")->required();
  pke_cmd->add_option("--bits", bits, "Plaintext, one 0/1 character per slot")->required();
  pke_cmd->add_option("-o,--out", out, "Ciphertext file")->required();

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a netlist on ciphertexts");
  std::string evk_file, circuit_file;
  eval_cmd->add_option("--evk", evk_file, "Evaluation key file")->required();
  eval_cmd->add_option("--circuit", circuit_file, "Netlist file")->required();
  eval_cmd->add_option("--inputs", in_files, "Ciphertext file(s), in input order")->required();
  eval_cmd->add_option("-o,--out", out, "Output ciphertext file")->required();

  // noise
  auto* noise_cmd = app.add_subcommand("noise", "Measure decryption noise (needs the secret key)");
  noise_cmd->add_option("--sk", sk_file, "Secret key file")->required();
  noise_cmd->add_option("--in", in_files, "Ciphertext file(s)")->required();
  noise_cmd->add_option("--expect", bits, "Expected plaintexts (default: the decryptions)");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Time homomorphic AND gates, CSV to stdout");
  tools::BenchOptions bench;
  bench_cmd->add_option("--presets", bench.presets, "Presets to run")->delimiter(',');
  bench_cmd->add_option("--gates", bench.gates, "AND gates per preset");
  bench_cmd->add_option("--threads", bench.threads, "Worker threads (0: all cores)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*params_cmd) {
      Params p;
      if (lambda || depth) {
        if (depth && *depth == 0) throw ParameterError("depth L must be at least 1");
        SetupOverrides o = overrides_from(g);
        p = setup(lambda.value_or(6), depth.value_or(2), o);
      } else {
        p = preset(g.preset, overrides_from(g));
      }
      std::cout << describe(p);
      print_margin(p);
      if (!out.empty()) write_file(out, serialize(p));
    } else if (*keygen_cmd) {
      Params p = load_params(g, params_file);
      Rng rng = make_rng(g);
      SecretKey sk = keygen(p, rng);
      write_file(out, serialize(sk));
      std::cout << describe(p) << "key id " << sk.key_id << "\n";
      if (dump) {
        std::cout << "g = " << to_string(sk.g) << "\n";
        std::cout << "points (" << sk.points.size() << ")\n";
        for (const auto& z : sk.points) {
          std::cout << " ";
          for (auto x : z) std::cout << " " << x;
          std::cout << "\n";
        }
        print_matrix(std::cout, "R1", sk.R1);
        print_matrix(std::cout, "R2", sk.R2);
        print_matrix(std::cout, "S", sk.S);
      }
    } else if (*evk_cmd) {
      SecretKey sk = deserialize_secret_key(read_file(sk_file));
      Rng rng = make_rng(g);
      EvalKey evk = build_evalkey(sk, rng);
      write_file(out, serialize(evk));
      std::cout << "evaluation key: " << (evk.gadget ? "gadget" : "plain") << ", dim " << evk.dim
                << ", " << evk.numerators.size() << " entries\n";
    } else if (*enc_cmd) {
      SecretKey sk = deserialize_secret_key(read_file(sk_file));
      Rng rng = make_rng(g);
      std::vector<Ciphertext> cts;
      for (const auto& b : bits) cts.push_back(encrypt(sk, parse_bits(b, sk.params.slots()), rng));
      write_file(out, serialize(sk.params, cts));
    } else if (*dec_cmd) {
      SecretKey sk = deserialize_secret_key(read_file(sk_file));
      for (const auto& ct : load_cts(in_files)) std::cout << bits_string(decrypt(sk, ct)) << "\n";
    } else if (*pkg_cmd) {
      SecretKey sk = deserialize_secret_key(read_file(sk_file));
      const Rational eps = parse_fraction(eps_text);
      if (eps <= 0) throw ParameterError("eps must be positive");
      Rng rng = make_rng(g);
      PublicKey pk = pk_keygen(sk, rng, eps);
      write_file(out, serialize(pk));
      std::cout << "public key: d = " << pk.C0.rows() << " zero encryptions\n";
    } else if (*pke_cmd) {
      PublicKey pk = deserialize_public_key(read_file(pk_file));
      Rng rng = make_rng(g);
      std::vector<Ciphertext> cts;
      for (const auto& b : bits) cts.push_back(pk_encrypt(pk, parse_bits(b, pk.params.slots()), rng));
      write_file(out, serialize(pk.params, cts));
    } else if (*eval_cmd) {
      EvalKey evk = deserialize_evalkey(read_file(evk_file));
      Circuit c = parse_circuit(read_file(circuit_file));
      auto inputs = load_cts(in_files);
      auto outputs = eval_homomorphic(evk, c, inputs);
      write_file(out, serialize(evk.params, outputs));
      std::cout << "evaluated " << c.gates.size() << " gates, depth " << c.depth << ", "
                << outputs.size() << " outputs\n";
    } else if (*noise_cmd) {
      SecretKey sk = deserialize_secret_key(read_file(sk_file));
      auto cts = load_cts(in_files);
      if (!bits.empty() && bits.size() != cts.size()) {
        throw ParameterError("--expect needs one plaintext per ciphertext");
      }
      std::cout << "index,level,noise,hint,limit\n";
      for (std::size_t i = 0; i < cts.size(); ++i) {
        Plaintext m = bits.empty() ? decrypt(sk, cts[i]) : parse_bits(bits[i], sk.params.slots());
        std::cout << i << ',' << cts[i].level << ',' << noise_norm(noise_of(sk, cts[i], m)) << ','
                  << (cts[i].noise_hint ? cts[i].noise_hint->get_str() : "-") << ','
                  << sk.params.q / 2 / 2 << "\n";
      }
    } else if (*bench_cmd) {
      bench.overrides = overrides_from(g);
      if (g.seed) bench.seed = *g.seed;
      tools::write_csv(std::cout, tools::run_bench(bench));
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << circuit_file << ": " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
