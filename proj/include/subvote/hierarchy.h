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
#include <string_view>
#include <vector>

#include "subvote/mvpoly.h"
#include "subvote/protocol.h"
#include "subvote/sharing.h"

namespace subvote {

// Partition of n users into l disjoint subgroups of n1 = n / l.
struct SubgroupLayout {
  int n = 0;
  int l = 0;
  int n1 = 0;
  std::vector<int> assignment;  // user -> subgroup

  // Contiguous blocks: users [j*n1, (j+1)*n1) form subgroup j.
  // Throws InvalidArgument unless l divides n and n1 >= 2.
  static SubgroupLayout Partition(int n, int l);
  // Seeded uniform shuffle of the contiguous assignment.
  static SubgroupLayout Shuffled(int n, int l, uint64_t seed);

  // Members of subgroup j in ascending user order.
  std::vector<int> Members(int j) const;
};

// Tie handling inside subgroups and across subgroup votes. The inter
// policy must be 1-bit: a 0 in the global update has no signSGD meaning.
struct TieConfig {
  TiePolicy intra = TiePolicy::kResolveToMinus;
  TiePolicy inter = TiePolicy::kResolveToMinus;

  TieConfig() = default;
  TieConfig(TiePolicy intra_policy, TiePolicy inter_policy);

  static TieConfig A1() { return {TiePolicy::kResolveToMinus, TiePolicy::kResolveToMinus}; }
  static TieConfig B1() { return {TiePolicy::kZeroState, TiePolicy::kResolveToMinus}; }
  // "A1" or "B1".
  static TieConfig Parse(std::string_view name);
  std::string_view name() const;
};

struct HierarchicalResult {
  std::vector<int> votes;                     // global vote per coordinate
  std::vector<std::vector<int>> group_votes;  // s_j per subgroup
  ProtocolTranscript transcript;
  OpCounts ops;
};

// Per-layout state reused across rounds: the n1-user polynomial over
// F_{p1} under the intra policy and its power schedule.
class HierarchicalAggregator {
 public:
  HierarchicalAggregator(SubgroupLayout layout, TieConfig ties);

  const SubgroupLayout& layout() const { return layout_; }
  const TieConfig& ties() const { return ties_; }
  const MvPolynomial& polynomial() const { return poly_; }
  const PowerSchedule& schedule() const { return schedule_; }

  // One triple set per subgroup, streams keyed by (seed, round, subgroup).
  std::vector<BeaverTripleSet> DealTriples(uint64_t seed, uint64_t round, size_t d,
                                           DealerFault fault = DealerFault::kNone,
                                           uint64_t* dealt_elements = nullptr) const;

  // Secure intra-subgroup evaluation, then plaintext inter-group sign on
  // the server. Subgroups may run on up to `threads` threads; the result
  // and transcript order do not depend on it.
  HierarchicalResult Run(const SignMatrix& inputs, std::span<const BeaverTripleSet> triples,
                         const RoundOptions& options = {}, int threads = 1) const;

  // sign_inter(sum_j sign_intra(sum_{i in G_j} x_i)).
  std::vector<int> Plain(const SignMatrix& inputs) const;

 private:
  SubgroupLayout layout_;
  TieConfig ties_;
  MvPolynomial poly_;
  PowerSchedule schedule_;
};

HierarchicalResult RunHierarchicalRound(const SignMatrix& inputs, const SubgroupLayout& layout,
                                        const TieConfig& ties,
                                        std::span<const BeaverTripleSet> triples,
                                        const RoundOptions& options = {});

struct Rational {
  uint64_t num = 0;
  uint64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

struct LeakageCensus {
  int n1 = 0;
  uint64_t profiles = 0;
  // Output s != 0 and every input equals s: the observer's reconstruction
  // "all inputs = s" is exact.
  uint64_t revealed = 0;
  // Profiles whose output value is produced by no other profile.
  uint64_t uniquely_determined = 0;
  Rational revealed_fraction() const;
};

// Exhaustive census over all 2^n1 single-coordinate profiles. 2 <= n1 <= 20.
LeakageCensus RunLeakageCensus(int n1, TiePolicy policy = TiePolicy::kResolveToMinus);
Rational LeakageFraction(int n1, TiePolicy policy = TiePolicy::kResolveToMinus);

}  // namespace subvote
