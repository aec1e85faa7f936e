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

#include "bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>

#include "mvfhe/keys.hpp"
#include "mvfhe/she.hpp"

namespace mvfhe::tools {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchOptions& options) {
  std::vector<BenchRow> rows;
  for (const std::string& name : options.presets) {
    const Params p = preset(name, options.overrides);
    Rng rng(options.seed);
    const SecretKey sk = keygen(p, rng);
    const EvalKey evk = build_evalkey(sk, rng);

    const std::size_t gates = std::max<std::size_t>(options.gates, 1);
    std::vector<Plaintext> ma(gates), mb(gates);
    std::vector<Ciphertext> ca(gates), cb(gates);
    for (std::size_t g = 0; g < gates; ++g) {
      ma[g].resize(p.slots());
      mb[g].resize(p.slots());
      for (auto& x : ma[g]) x = rng.coin();
      for (auto& x : mb[g]) x = rng.coin();
      ca[g] = encrypt(sk, ma[g], rng);
      cb[g] = encrypt(sk, mb[g], rng);
    }

    BenchRow row;
    row.preset = name;
    row.n = p.n();
    row.ell = p.ell;
    row.log2q = p.log2q();
    row.dim = evk.dim;
    row.gates = gates;

    std::vector<Ciphertext> out(gates);
    auto start = std::chrono::steady_clock::now();
    for (std::size_t g = 0; g < gates; ++g) out[g] = eval_mult(evk, ca[g], cb[g]);
    row.serial_seconds = seconds_since(start) / static_cast<double>(gates);

    for (std::size_t g = 0; g < gates; ++g) {
      Plaintext want(p.slots());
      for (std::size_t j = 0; j < want.size(); ++j) want[j] = ma[g][j] & mb[g][j];
      row.correct += decrypt(sk, out[g]) == want;
    }

    unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(gates)));
    row.threads = threads;
    std::atomic<std::size_t> next{0};
    start = std::chrono::steady_clock::now();
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t g; (g = next++) < gates;) out[g] = eval_mult(evk, ca[g], cb[g]);
      });
    }
    for (auto& th : pool) th.join();
    row.parallel_seconds = seconds_since(start) / static_cast<double>(gates);
    rows.push_back(row);
  }
  return rows;
}

void write_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
  os << "preset,n,ell,log2q,dim,gates,threads,serial_us_per_and,parallel_us_per_and,correct,"
        "ell3_log2q2\n";
  for (const BenchRow& r : rows) {
    const double model = static_cast<double>(r.ell) * r.ell * r.ell * r.log2q * r.log2q;
    os << r.preset << ',' << r.n << ',' << r.ell << ',' << r.log2q << ',' << r.dim << ','
       << r.gates << ',' << r.threads << ',' << r.serial_seconds * 1e6 << ','
       << r.parallel_seconds * 1e6 << ',' << r.correct << ',' << model << '\n';
  }
}

}  // namespace mvfhe::tools
