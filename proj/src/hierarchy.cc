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

#include "subvote/hierarchy.h"

#include <algorithm>
#include <bit>
#include <exception>
#include <map>
#include <numeric>
#include <string>
#include <thread>

#include "subvote/errors.h"
#include "subvote/rng.h"

namespace subvote {

SubgroupLayout SubgroupLayout::Partition(int n, int l) {
  if (n < 2 || l < 1 || n % l != 0) {
    throw InvalidArgument("invalid layout: l = " + std::to_string(l) + " does not divide n = " +
                          std::to_string(n));
  }
  const int n1 = n / l;
  if (n1 < 2) throw InvalidArgument("invalid layout: subgroups need at least 2 users");
  SubgroupLayout layout{n, l, n1, std::vector<int>(static_cast<size_t>(n))};
  for (int i = 0; i < n; ++i) layout.assignment[static_cast<size_t>(i)] = i / n1;
  return layout;
}

SubgroupLayout SubgroupLayout::Shuffled(int n, int l, uint64_t seed) {
  SubgroupLayout layout = Partition(n, l);
  StreamRng rng(seed, {0x6c61796f7574ULL});
  auto& a = layout.assignment;
  for (size_t i = a.size() - 1; i > 0; --i) std::swap(a[i], a[rng.Below(i + 1)]);
  return layout;
}

std::vector<int> SubgroupLayout::Members(int j) const {
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    if (assignment[static_cast<size_t>(i)] == j) out.push_back(i);
  }
  return out;
}

TieConfig::TieConfig(TiePolicy intra_policy, TiePolicy inter_policy)
    : intra(intra_policy), inter(inter_policy) {
  if (inter == TiePolicy::kZeroState) {
    throw InvalidArgument("inter-group tie policy must resolve to a binary decision");
  }
}

TieConfig TieConfig::Parse(std::string_view name) {
  if (name == "A1" || name == "A-1") return A1();
  if (name == "B1" || name == "B-1") return B1();
  throw InvalidArgument("unknown tie configuration '" + std::string(name) +
                        "' (supported: A1, B1)");
}

std::string_view TieConfig::name() const {
  if (intra == TiePolicy::kZeroState) return "B1";
  return "A1";
}

HierarchicalAggregator::HierarchicalAggregator(SubgroupLayout layout, TieConfig ties)
    : layout_(std::move(layout)),
      ties_(ties),
      poly_(MvPolynomial::Construct(layout_.n1, ties_.intra)),
      schedule_(BuildPowerSchedule(poly_)) {}

std::vector<BeaverTripleSet> HierarchicalAggregator::DealTriples(uint64_t seed, uint64_t round,
                                                                 size_t d, DealerFault fault,
                                                                 uint64_t* dealt_elements) const {
  std::vector<BeaverTripleSet> out;
  out.reserve(static_cast<size_t>(layout_.l));
  uint64_t total = 0;
  for (int j = 0; j < layout_.l; ++j) {
    DealerConfig cfg{seed, round, static_cast<uint64_t>(j), layout_.n1, poly_.modulus(),
                     schedule_.mult_count, d, fault};
    uint64_t dealt = 0;
    out.push_back(DealBeaverTriples(cfg, &dealt));
    total += dealt;
  }
  if (dealt_elements != nullptr) *dealt_elements = total;
  return out;
}

HierarchicalResult HierarchicalAggregator::Run(const SignMatrix& inputs,
                                               std::span<const BeaverTripleSet> triples,
                                               const RoundOptions& options, int threads) const {
  using T = TranscriptRecord::Type;
  if (inputs.n() != layout_.n) {
    throw InvalidArgument("input has " + std::to_string(inputs.n()) + " users, layout expects " +
                          std::to_string(layout_.n));
  }
  if (triples.size() != static_cast<size_t>(layout_.l)) {
    throw InvalidArgument("need one triple set per subgroup");
  }
  const size_t d = inputs.d();
  const auto l = static_cast<size_t>(layout_.l);
  std::vector<RoundResult> groups(l);
  auto run_group = [&](size_t j) {
    const auto members = layout_.Members(static_cast<int>(j));
    groups[j] = RunSubgroupRound(inputs.Select(members), poly_, schedule_, triples[j], options,
                                 static_cast<int>(j));
  };
  const auto workers = static_cast<size_t>(std::clamp(threads, 1, layout_.l));
  if (workers == 1) {
    for (size_t j = 0; j < l; ++j) run_group(j);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (size_t j = w; j < l; j += workers) run_group(j);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  HierarchicalResult result;
  std::vector<int64_t> sums(d, 0);
  for (size_t j = 0; j < l; ++j) {
    auto& g = groups[j];
    for (size_t c = 0; c < d; ++c) sums[c] += g.votes[c];
    result.ops += g.ops;
    if (options.record_transcript) {
      auto& recs = result.transcript.records;
      recs.insert(recs.end(), std::make_move_iterator(g.transcript.records.begin()),
                  std::make_move_iterator(g.transcript.records.end()));
    }
    result.group_votes.push_back(std::move(g.votes));
  }
  result.votes.resize(d);
  for (size_t c = 0; c < d; ++c) result.votes[c] = SignOf(sums[c], ties_.inter);

  if (options.record_transcript) {
    auto& recs = result.transcript.records;
    for (size_t j = 0; j < l; ++j) {
      const auto& s = result.group_votes[j];
      recs.push_back({T::kGroupVote, options.round, static_cast<int>(j), -1, -1, -1,
                      std::vector<int64_t>(s.begin(), s.end())});
    }
    recs.push_back({T::kGlobalVote, options.round, -1, -1, -1, -1,
                    std::vector<int64_t>(result.votes.begin(), result.votes.end())});
  }
  return result;
}

std::vector<int> HierarchicalAggregator::Plain(const SignMatrix& inputs) const {
  if (inputs.n() != layout_.n) throw InvalidArgument("input/layout user count mismatch");
  std::vector<int64_t> sums(inputs.d(), 0);
  for (int j = 0; j < layout_.l; ++j) {
    const auto members = layout_.Members(j);
    const auto s = PlainMajority(inputs.Select(members), ties_.intra);
    for (size_t c = 0; c < s.size(); ++c) sums[c] += s[c];
  }
  std::vector<int> out(inputs.d());
  for (size_t c = 0; c < out.size(); ++c) out[c] = SignOf(sums[c], ties_.inter);
  return out;
}

HierarchicalResult RunHierarchicalRound(const SignMatrix& inputs, const SubgroupLayout& layout,
                                        const TieConfig& ties,
                                        std::span<const BeaverTripleSet> triples,
                                        const RoundOptions& options) {
  return HierarchicalAggregator(layout, ties).Run(inputs, triples, options);
}

Rational LeakageCensus::revealed_fraction() const {
  const uint64_t g = std::gcd(revealed, profiles);
  if (g == 0) return {0, 1};
  return {revealed / g, profiles / g};
}

LeakageCensus RunLeakageCensus(int n1, TiePolicy policy) {
  if (n1 < 2 || n1 > 20) {
    throw InvalidArgument("leakage census supports 2 <= n1 <= 20, got " + std::to_string(n1));
  }
  // The output is whatever the subgroup polynomial evaluates to.
  const MvPolynomial poly = MvPolynomial::Construct(n1, policy);
  const uint64_t profiles = uint64_t{1} << n1;
  std::map<int, uint64_t> output_counts;
  std::vector<int> outputs(profiles);
  LeakageCensus census{n1, profiles};
  for (uint64_t bits = 0; bits < profiles; ++bits) {
    const int plus = std::popcount(bits);
    const int sum = 2 * plus - n1;
    const int s = static_cast<int>(poly.Evaluate({sum}).value);
    outputs[bits] = s;
    ++output_counts[s];
    if ((s == 1 && plus == n1) || (s == -1 && plus == 0)) ++census.revealed;
  }
  for (uint64_t bits = 0; bits < profiles; ++bits) {
    if (output_counts[outputs[bits]] == 1) ++census.uniquely_determined;
  }
  return census;
}

Rational LeakageFraction(int n1, TiePolicy policy) {
  return RunLeakageCensus(n1, policy).revealed_fraction();
}

}  // namespace subvote
