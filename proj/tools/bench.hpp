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

#ifndef MVFHE_TOOLS_BENCH_HPP_
#define MVFHE_TOOLS_BENCH_HPP_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "mvfhe/params.hpp"

namespace mvfhe::tools {

struct BenchRow {
  std::string preset;
  std::size_t n = 0;
  std::size_t ell = 0;
  unsigned log2q = 0;
  std::size_t dim = 0;
  std::size_t gates = 0;
  unsigned threads = 1;
  double serial_seconds = 0;    // mean wall time per AND gate
  double parallel_seconds = 0;  // wall time of the batch / gates
  std::size_t correct = 0;      // gates that decrypted to the AND
};

struct BenchOptions {
  std::vector<std::string> presets{"toy", "small", "depth3"};
  SetupOverrides overrides;
  std::size_t gates = 8;
  unsigned threads = 0;  // 0: hardware concurrency
  std::uint64_t seed = 1;
};

std::vector<BenchRow> run_bench(const BenchOptions& options);

// Header plus one line per row; the last column is ell^3 log2(q)^2.
void write_csv(std::ostream& os, const std::vector<BenchRow>& rows);

}  // namespace mvfhe::tools

#endif  // MVFHE_TOOLS_BENCH_HPP_
