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

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "subvote/hierarchy.h"
#include "subvote/protocol.h"

namespace subvote {

struct BenchPoint {
  int n = 0;
  int l = 0;
  int n1 = 0;
  size_t d = 0;
  int mult_count = 0;      // gates per subgroup schedule
  double precompute_s = 0;  // polynomial construction + schedule
  double offline_s = 0;     // triple dealing
  double online_s = 0;      // secure evaluation
  OpCounts ops;
};

// One hierarchical round on random inputs with instrumented counts.
// Wall-clock fields are informational only.
BenchPoint RunBench(int n, int l, size_t d, uint64_t seed, const TieConfig& ties = TieConfig::A1(),
                    int threads = 1);

// Gate field multiplications for one round: l * gates * d * (2 * n1 + 1).
uint64_t ExpectedGateMults(int l, int n1, int gates, size_t d);

std::string FormatBenchTable(std::span<const BenchPoint> points);

}  // namespace subvote
