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

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "subvote/field.h"
#include "subvote/mvpoly.h"
#include "subvote/sharing.h"

namespace subvote {

// n users x d coordinates of +-1 votes, row-major by user.
class SignMatrix {
 public:
  SignMatrix(int n, size_t d);
  SignMatrix(int n, size_t d, std::vector<int8_t> values);
  static SignMatrix FromRows(const std::vector<std::vector<int>>& rows);
  // Rows of comma-separated +-1 values, one user per line.
  static SignMatrix ParseCsv(std::istream& is);

  int n() const { return n_; }
  size_t d() const { return d_; }
  int8_t at(int user, size_t coord) const { return values_[Index(user, coord)]; }
  void set(int user, size_t coord, int v);
  std::span<const int8_t> row(int user) const {
    return {values_.data() + static_cast<size_t>(user) * d_, d_};
  }
  // Users [first, first + count) as a new matrix.
  SignMatrix Rows(int first, int count) const;
  // Selected users in the given order.
  SignMatrix Select(std::span<const int> users) const;

 private:
  size_t Index(int user, size_t coord) const { return static_cast<size_t>(user) * d_ + coord; }

  int n_;
  size_t d_;
  std::vector<int8_t> values_;
};

// Per-user masked differences for one gate: first = [[x^left]] - [[a]],
// second = [[x^right]] - [[b]], coordinate-wise.
struct MaskedOpeningUpload {
  uint64_t round = 0;
  int layer = 0;
  int gate = 0;
  int user = 0;
  std::vector<uint64_t> first;
  std::vector<uint64_t> second;
};

// delta = x^left - a, epsilon = x^right - b.
struct OpeningBroadcast {
  uint64_t round = 0;
  int layer = 0;
  int gate = 0;
  std::vector<uint64_t> delta;
  std::vector<uint64_t> epsilon;
};

// The user's additive share of F(x).
struct EncryptedShareUpload {
  uint64_t round = 0;
  int user = 0;
  std::vector<uint64_t> share;
};

struct OpCounts {
  uint64_t gate_mults = 0;      // field multiplications in share-of-power updates
  uint64_t finalize_mults = 0;  // coefficient multiplications in the final share
  uint64_t online_mults() const { return gate_mults + finalize_mults; }
  uint64_t masked_elements = 0;  // field elements uploaded as masked differences
  uint64_t dealt_elements = 0;   // offline: triple shares dealt
  OpCounts& operator+=(const OpCounts& o);
};

// One user's side of the secure evaluation. Holds references to the
// polynomial, schedule and triples; they must outlive the session.
class UserSession {
 public:
  // user 0 is the designated user that adds the public terms.
  UserSession(int user, std::span<const int8_t> input, const MvPolynomial& poly,
              const PowerSchedule& schedule, const BeaverTripleSet& triples,
              uint64_t round = 0);

  int user() const { return user_; }
  bool designated() const { return user_ == 0; }
  // Index of the next gate whose broadcast this user expects.
  int next_gate() const { return next_gate_; }

  // Throws ProtocolOrderError if an operand share is not available yet.
  MaskedOpeningUpload MaskedUpload(int gate) const;

  // [[x^k]] = [[c]] + delta*[[b]] + epsilon*[[a]] (+ delta*epsilon if designated).
  // Throws ProtocolOrderError unless `b` is for next_gate().
  void ApplyBroadcast(const OpeningBroadcast& b);

  // sum_k coeff_k [[x^k]] + coeff_1 x_i (+ coeff_0 if designated).
  // Throws ProtocolOrderError if gates remain.
  EncryptedShareUpload FinalizeShare();

  // Share of x^exponent; empty if not yet computed.
  std::span<const uint64_t> PowerShare(int exponent) const;

  const OpCounts& ops() const { return ops_; }

 private:
  int user_;
  uint64_t round_;
  const MvPolynomial* poly_;
  const PowerSchedule* schedule_;
  const BeaverTripleSet* triples_;
  size_t d_;
  std::vector<std::vector<uint64_t>> powers_;  // index = exponent
  int next_gate_ = 0;
  OpCounts ops_;
};

// Sums one gate's uploads. Throws IncompleteGateError unless there is
// exactly one upload per user 0..n-1, all for the same gate.
OpeningBroadcast ServerOpen(std::span<const MaskedOpeningUpload> uploads, int n,
                            const PrimeModulus& modulus);

// Sums final shares and decodes each coordinate via the centered encoding.
// Throws ProtocolCorruptionError for a decoded value outside {-1, 0, +1}.
std::vector<int> ServerAggregate(std::span<const EncryptedShareUpload> uploads,
                                 const MvPolynomial& poly);

struct ConfigEcho {
  int n = 0;
  size_t d = 0;
  uint64_t p = 0;
  std::string policy;
  int gates = 0;
  uint64_t seed = 0;
  friend bool operator==(const ConfigEcho&, const ConfigEcho&) = default;
};

struct TranscriptRecord {
  enum class Type { kConfig, kMaskedUpload, kOpening, kShareUpload, kVote, kGroupVote, kGlobalVote };
  Type type = Type::kConfig;
  uint64_t round = 0;
  int subgroup = -1;  // -1: flat round
  int layer = -1;
  int gate = -1;
  int user = -1;
  std::vector<int64_t> values;
  std::optional<ConfigEcho> config;

  friend bool operator==(const TranscriptRecord&, const TranscriptRecord&) = default;
};

std::string_view ToString(TranscriptRecord::Type type);

// Every message of one round in canonical order. masked_upload and opening
// records carry 2d values: the d delta-side values, then the d epsilon-side.
struct ProtocolTranscript {
  std::vector<TranscriptRecord> records;

  void WriteJsonl(std::ostream& os) const;
  std::string ToJsonl() const;
  friend bool operator==(const ProtocolTranscript&, const ProtocolTranscript&) = default;
};

struct RoundOptions {
  uint64_t round = 0;
  uint64_t seed = 0;  // echoed into the transcript only
  bool record_transcript = true;
};

struct RoundResult {
  std::vector<int> votes;
  ProtocolTranscript transcript;
  OpCounts ops;
};

// Secure evaluation of F over the column sums of `inputs`. Votes equal
// sign(sum_i x_i) under poly.policy().
RoundResult RunFlatRound(const SignMatrix& inputs, const MvPolynomial& poly,
                         const BeaverTripleSet& triples, const RoundOptions& options = {});

// Same, with the subgroup tag on every record; used by the hierarchy.
RoundResult RunSubgroupRound(const SignMatrix& inputs, const MvPolynomial& poly,
                             const PowerSchedule& schedule, const BeaverTripleSet& triples,
                             const RoundOptions& options, int subgroup);

// Plaintext reference: sign of each column sum.
std::vector<int> PlainMajority(const SignMatrix& inputs, TiePolicy policy);

}  // namespace subvote
