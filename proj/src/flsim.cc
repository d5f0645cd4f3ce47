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

#include "subvote/flsim.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <tuple>

#include "subvote/errors.h"
#include "subvote/rng.h"

namespace subvote {

namespace {
constexpr uint64_t kTargetTag = 0x7461726765;  // "targe"
constexpr uint64_t kNoiseTag = 0x6e6f697365;   // "noise"
}  // namespace

SyntheticTask SyntheticTask::Make(int n, size_t d, double spread, double noise_sigma,
                                  uint64_t seed) {
  if (n < 1) throw InvalidArgument("task needs at least one user");
  if (spread < 0 || noise_sigma < 0) throw InvalidArgument("spread and sigma must be >= 0");
  SyntheticTask task{n, d, noise_sigma, seed};
  StreamRng global(seed, {kTargetTag});
  task.global_target.resize(d);
  for (auto& v : task.global_target) v = global.Gaussian();
  for (int i = 0; i < n; ++i) {
    StreamRng rng(seed, {kTargetTag, static_cast<uint64_t>(i) + 1});
    std::vector<double> t(task.global_target);
    for (auto& v : t) v += spread * rng.Gaussian();
    task.targets.push_back(std::move(t));
  }
  return task;
}

SyntheticTask SyntheticTask::Identical(int n, std::vector<double> target, double noise_sigma,
                                       uint64_t seed) {
  if (n < 1) throw InvalidArgument("task needs at least one user");
  SyntheticTask task{n, target.size(), noise_sigma, seed, target};
  task.targets.assign(static_cast<size_t>(n), target);
  return task;
}

std::vector<double> SyntheticTask::StochasticGradient(int user, std::span<const double> theta,
                                                      uint64_t round) const {
  const auto& target = targets.at(static_cast<size_t>(user));
  StreamRng rng(seed, {kNoiseTag, round, static_cast<uint64_t>(user)});
  std::vector<double> g(d);
  for (size_t j = 0; j < d; ++j) {
    g[j] = theta[j] - target[j];
    if (noise_sigma > 0) g[j] += noise_sigma * rng.Gaussian();
  }
  return g;
}

std::vector<double> SyntheticTask::MeanGradient(std::span<const double> theta) const {
  std::vector<double> g(d, 0.0);
  for (const auto& t : targets) {
    for (size_t j = 0; j < d; ++j) g[j] += theta[j] - t[j];
  }
  for (auto& v : g) v /= static_cast<double>(n);
  return g;
}

double SyntheticTask::Objective(std::span<const double> theta) const {
  double total = 0.0;
  for (const auto& t : targets) {
    for (size_t j = 0; j < d; ++j) total += 0.5 * (theta[j] - t[j]) * (theta[j] - t[j]);
  }
  return total / static_cast<double>(n);
}

SimResult RunSignSgdMv(const SyntheticTask& task, const SimConfig& cfg) {
  if (cfg.n != task.n || cfg.d != task.d) throw InvalidArgument("config does not match task");
  if (!(cfg.eta > 0)) throw InvalidArgument("learning rate must be positive");
  if (cfg.rounds < 0) throw InvalidArgument("negative round count");
  if (!cfg.theta0.empty() && cfg.theta0.size() != cfg.d) {
    throw InvalidArgument("theta0 has the wrong dimension");
  }
  const HierarchicalAggregator agg(SubgroupLayout::Partition(cfg.n, cfg.l), cfg.ties);

  SimResult result;
  result.theta = cfg.theta0.empty() ? std::vector<double>(cfg.d, 0.0) : cfg.theta0;
  auto& theta = result.theta;
  for (int t = 0; t < cfg.rounds; ++t) {
    const auto round = static_cast<uint64_t>(t);
    const auto mean_grad = task.MeanGradient(theta);

    SignMatrix inputs(cfg.n, cfg.d);
    for (int i = 0; i < cfg.n; ++i) {
      const auto g = task.StochasticGradient(i, theta, round);
      for (size_t j = 0; j < cfg.d; ++j) inputs.set(i, j, g[j] < 0 ? -1 : 1);
    }

    std::vector<int> votes;
    if (cfg.mode == SimMode::kSecure) {
      uint64_t dealt = 0;
      const auto triples = agg.DealTriples(cfg.seed, round, cfg.d, DealerFault::kNone, &dealt);
      auto r = agg.Run(inputs, triples, {round, cfg.seed, cfg.keep_transcripts}, cfg.threads);
      result.ops += r.ops;
      result.ops.dealt_elements += dealt;
      votes = std::move(r.votes);
      if (cfg.keep_transcripts) result.transcripts.push_back(std::move(r.transcript));
    } else {
      votes = agg.Plain(inputs);
    }

    RoundMetrics m{t};
    size_t agree = 0;
    for (size_t j = 0; j < cfg.d; ++j) {
      m.l1_grad_norm += std::abs(mean_grad[j]);
      const int true_sign = mean_grad[j] > 0 ? 1 : (mean_grad[j] < 0 ? -1 : 0);
      if (votes[j] == true_sign) ++agree;
    }
    m.objective = task.Objective(theta);
    m.vote_agreement = cfg.d == 0 ? 1.0 : static_cast<double>(agree) / static_cast<double>(cfg.d);
    result.metrics.push_back(m);

    for (size_t j = 0; j < cfg.d; ++j) theta[j] -= cfg.eta * votes[j];
    result.votes.push_back(std::move(votes));
  }
  return result;
}

SimResult RunSecureSignSgd(const SyntheticTask& task, SimConfig cfg) {
  cfg.mode = SimMode::kSecure;
  return RunSignSgdMv(task, cfg);
}

void WriteMetricsCsv(std::ostream& os, std::span<const RoundMetrics> metrics) {
  os << "round,l1_grad_norm,objective,vote_agreement\n";
  const auto old = os.precision(17);
  for (const auto& m : metrics) {
    os << m.round << ',' << m.l1_grad_norm << ',' << m.objective << ',' << m.vote_agreement
       << '\n';
  }
  os.precision(old);
}

std::vector<ProtocolTranscript> FreshTripleRounds(const SignMatrix& inputs, TiePolicy policy,
                                                  int rounds, uint64_t seed, DealerFault fault) {
  const MvPolynomial poly = MvPolynomial::Construct(inputs.n(), policy);
  const PowerSchedule schedule = BuildPowerSchedule(poly);
  std::vector<ProtocolTranscript> out;
  out.reserve(static_cast<size_t>(std::max(rounds, 0)));
  for (int r = 0; r < rounds; ++r) {
    const auto round = static_cast<uint64_t>(r);
    DealerConfig cfg{seed, round, 0, inputs.n(), poly.modulus(), schedule.mult_count, inputs.d(),
                     fault};
    const auto triples = DealBeaverTriples(cfg);
    out.push_back(RunFlatRound(inputs, poly, triples, {round, seed, true}).transcript);
  }
  return out;
}

bool UniformityReport::all_uniform() const {
  for (const auto& t : tests) {
    if (!t.uniform.passes(alpha)) return false;
  }
  return true;
}

bool UniformityReport::all_indistinguishable() const {
  for (const auto& t : tests) {
    if (t.has_two_sample && !t.two_sample.passes(alpha)) return false;
  }
  return true;
}

namespace {

using PositionKey = std::tuple<int, int, size_t, bool>;  // subgroup, gate, coord, epsilon

std::map<PositionKey, std::vector<uint64_t>> CountOpenings(
    std::span<const ProtocolTranscript> transcripts) {
  std::map<PositionKey, std::vector<uint64_t>> counts;
  for (const auto& tr : transcripts) {
    std::map<int, uint64_t> modulus;  // per subgroup
    for (const auto& rec : tr.records) {
      if (rec.config) {
        modulus[rec.subgroup] = rec.config->p;
        continue;
      }
      if (rec.type != TranscriptRecord::Type::kOpening) continue;
      const uint64_t p = modulus.at(rec.subgroup);
      const size_t d = rec.values.size() / 2;
      for (size_t k = 0; k < rec.values.size(); ++k) {
        auto& c = counts[{rec.subgroup, rec.gate, k % d, k >= d}];
        c.resize(p, 0);
        ++c.at(static_cast<size_t>(rec.values[k]));
      }
    }
  }
  return counts;
}

}  // namespace

UniformityReport MakeUniformityReport(std::span<const ProtocolTranscript> a,
                                      std::span<const ProtocolTranscript> b, double alpha,
                                      uint64_t min_samples) {
  const auto counts_a = CountOpenings(a);
  const auto counts_b = CountOpenings(b);
  if (counts_a.empty()) throw InsufficientSamples("no openings in the transcripts");
  UniformityReport report{alpha};
  for (const auto& [key, ca] : counts_a) {
    OpeningTest t;
    std::tie(t.subgroup, t.gate, t.coordinate, t.epsilon) = key;
    for (uint64_t c : ca) t.samples += c;
    if (t.samples < min_samples) {
      throw InsufficientSamples("opening position has " + std::to_string(t.samples) +
                                " samples, need " + std::to_string(min_samples));
    }
    t.uniform = ChiSquareUniform(ca);
    if (!b.empty()) {
      const auto it = counts_b.find(key);
      if (it == counts_b.end()) throw InsufficientSamples("second sample lacks an opening position");
      t.has_two_sample = true;
      t.two_sample = ChiSquareTwoSample(ca, it->second);
    }
    report.tests.push_back(t);
  }
  return report;
}

}  // namespace subvote
