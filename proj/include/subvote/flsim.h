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
#include <iosfwd>
#include <span>
#include <vector>

#include "subvote/hierarchy.h"
#include "subvote/protocol.h"
#include "subvote/stats.h"

namespace subvote {

// Per-user quadratic objective f_i(theta) = 0.5 * |theta - target_i|^2 with
// Gaussian gradient noise. Targets scatter around a global target with
// `spread` (non-IID knob).
struct SyntheticTask {
  int n = 0;
  size_t d = 0;
  double noise_sigma = 0.0;
  uint64_t seed = 0;
  std::vector<double> global_target;
  std::vector<std::vector<double>> targets;

  static SyntheticTask Make(int n, size_t d, double spread, double noise_sigma, uint64_t seed);
  // Every user shares one target.
  static SyntheticTask Identical(int n, std::vector<double> target, double noise_sigma,
                                 uint64_t seed);

  // (theta - target_i) + noise; noise drawn from stream (seed, round, user).
  std::vector<double> StochasticGradient(int user, std::span<const double> theta,
                                         uint64_t round) const;
  // Gradient of the mean objective: theta - mean_i target_i.
  std::vector<double> MeanGradient(std::span<const double> theta) const;
  double Objective(std::span<const double> theta) const;
};

enum class SimMode { kPlaintext, kSecure };

struct SimConfig {
  int n = 0;
  int l = 1;
  size_t d = 0;
  TieConfig ties = TieConfig::A1();
  int rounds = 0;
  double eta = 0.05;
  uint64_t seed = 0;
  SimMode mode = SimMode::kPlaintext;
  std::vector<double> theta0;  // zeros when empty
  bool keep_transcripts = false;
  int threads = 1;
};

struct RoundMetrics {
  int round = 0;
  double l1_grad_norm = 0.0;  // |mean gradient|_1 at theta(t)
  double objective = 0.0;
  double vote_agreement = 0.0;  // fraction of coords with vote == sign(mean gradient)
};

struct SimResult {
  std::vector<RoundMetrics> metrics;
  std::vector<double> theta;
  std::vector<std::vector<int>> votes;  // per round
  std::vector<ProtocolTranscript> transcripts;
  OpCounts ops;
};

// signSGD with (hierarchical) majority vote; cfg.mode selects plaintext
// aggregation or the secure protocol. Both consume identical gradients.
SimResult RunSignSgdMv(const SyntheticTask& task, const SimConfig& cfg);
// Same as RunSignSgdMv with mode forced to kSecure.
SimResult RunSecureSignSgd(const SyntheticTask& task, SimConfig cfg);

// CSV: round,l1_grad_norm,objective,vote_agreement
void WriteMetricsCsv(std::ostream& os, std::span<const RoundMetrics> metrics);

// Flat secure rounds with fresh triples on fixed inputs; round r uses
// dealer streams keyed by (seed, r).
std::vector<ProtocolTranscript> FreshTripleRounds(const SignMatrix& inputs, TiePolicy policy,
                                                  int rounds, uint64_t seed,
                                                  DealerFault fault = DealerFault::kNone);

struct OpeningTest {
  int subgroup = -1;
  int gate = 0;
  size_t coordinate = 0;
  bool epsilon = false;  // false: delta side
  uint64_t samples = 0;
  ChiSquareResult uniform;
  bool has_two_sample = false;
  ChiSquareResult two_sample;
};

struct UniformityReport {
  double alpha = 0.01;
  std::vector<OpeningTest> tests;
  bool all_uniform() const;
  bool all_indistinguishable() const;
};

// Chi-square uniformity of every opening position over F_p across the
// transcripts in `a`; when `b` is non-empty, a two-sample homogeneity test
// between the two collections per position. Throws InsufficientSamples if
// any position has fewer than `min_samples` observations.
UniformityReport MakeUniformityReport(std::span<const ProtocolTranscript> a,
                                      std::span<const ProtocolTranscript> b = {},
                                      double alpha = 0.01, uint64_t min_samples = 10000);

}  // namespace subvote
