// Copyright 2026 The subvote Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "subvote/bench.h"

#include <chrono>
#include <cstdio>

#include "subvote/rng.h"

namespace subvote {

namespace {

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace

BenchPoint RunBench(int n, int l, size_t d, uint64_t seed, const TieConfig& ties, int threads) {
  using Clock = std::chrono::steady_clock;
  BenchPoint pt{n, l, 0, d};

  auto start = Clock::now();
  const HierarchicalAggregator agg(SubgroupLayout::Partition(n, l), ties);
  pt.precompute_s = Seconds(start);
  pt.n1 = agg.layout().n1;
  pt.mult_count = agg.schedule().mult_count;

  StreamRng rng(seed, {0x62656e6368ULL});
  SignMatrix inputs(n, d);
  for (int i = 0; i < n; ++i) {
    for (size_t j = 0; j < d; ++j) inputs.set(i, j, (rng() & 1) ? 1 : -1);
  }

  start = Clock::now();
  uint64_t dealt = 0;
  const auto triples = agg.DealTriples(seed, 0, d, DealerFault::kNone, &dealt);
  pt.offline_s = Seconds(start);

  start = Clock::now();
  const auto result = agg.Run(inputs, triples, {0, seed, false}, threads);
  pt.online_s = Seconds(start);
  pt.ops = result.ops;
  pt.ops.dealt_elements = dealt;
  return pt;
}

uint64_t ExpectedGateMults(int l, int n1, int gates, size_t d) {
  return static_cast<uint64_t>(l) * static_cast<uint64_t>(gates) * d *
         (2 * static_cast<uint64_t>(n1) + 1);
}

std::string FormatBenchTable(std::span<const BenchPoint> points) {
  std::string out =
      "n,l,n1,d,gates,l*d,gate_mults,finalize_mults,online_mults,dealt_elements,"
      "precompute_s,offline_s,online_s\n";
  char buf[256];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%zu,%d,%zu,%llu,%llu,%llu,%llu,%.6f,%.6f,%.6f\n", p.n,
                  p.l, p.n1, p.d, p.mult_count, static_cast<size_t>(p.l) * p.d,
                  static_cast<unsigned long long>(p.ops.gate_mults),
                  static_cast<unsigned long long>(p.ops.finalize_mults),
                  static_cast<unsigned long long>(p.ops.online_mults()),
                  static_cast<unsigned long long>(p.ops.dealt_elements), p.precompute_s,
                  p.offline_s, p.online_s);
    out += buf;
  }
  return out;
}

}  // namespace subvote
