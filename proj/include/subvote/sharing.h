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
#include <span>
#include <vector>

#include "subvote/field.h"
#include "subvote/rng.h"

namespace subvote {

// One additive sharing of a secret: shares[i] belongs to user i.
struct ShareVector {
  std::vector<uint64_t> shares;
  PrimeModulus modulus;
};

// n-1 uniform shares, the last completes the sum. n >= 2.
ShareVector DealAdditiveShares(const FieldElement& secret, int n, StreamRng& rng);

// Sum of shares mod p. Throws InvalidArgument on an empty list.
FieldElement Reconstruct(const ShareVector& sv);

// Test hooks for negative controls. kZeroA forces every a to 0 (and c = 0),
// which makes the delta openings equal to the unmasked operand.
enum class DealerFault { kNone, kZeroA };

struct DealerConfig {
  uint64_t seed = 0;
  uint64_t round = 0;
  uint64_t subgroup = 0;
  int n = 0;
  PrimeModulus modulus{3};
  int gate_count = 0;
  size_t d = 0;
  DealerFault fault = DealerFault::kNone;
};

// Beaver triples (a, b, c = a*b), one per gate per coordinate, additively
// shared among n users. Stored gate-major, then user, then coordinate, so a
// user's slice for one gate is contiguous.
class BeaverTripleSet {
 public:
  BeaverTripleSet(int n, PrimeModulus modulus, int gate_count, size_t d);

  int n() const { return n_; }
  const PrimeModulus& modulus() const { return modulus_; }
  int gate_count() const { return gate_count_; }
  size_t d() const { return d_; }

  std::span<const uint64_t> a(int gate, int user) const { return Slice(a_, gate, user); }
  std::span<const uint64_t> b(int gate, int user) const { return Slice(b_, gate, user); }
  std::span<const uint64_t> c(int gate, int user) const { return Slice(c_, gate, user); }
  std::span<uint64_t> a(int gate, int user) { return Slice(a_, gate, user); }
  std::span<uint64_t> b(int gate, int user) { return Slice(b_, gate, user); }
  std::span<uint64_t> c(int gate, int user) { return Slice(c_, gate, user); }

  struct Triple {
    ShareVector a, b, c;
  };
  // Gathers all user shares for (gate, coordinate).
  Triple TripleAt(int gate, size_t coord) const;

  friend bool operator==(const BeaverTripleSet&, const BeaverTripleSet&) = default;

 private:
  size_t Offset(int gate, int user) const {
    return (static_cast<size_t>(gate) * static_cast<size_t>(n_) + static_cast<size_t>(user)) * d_;
  }
  std::span<const uint64_t> Slice(const std::vector<uint64_t>& v, int gate, int user) const {
    return {v.data() + Offset(gate, user), d_};
  }
  std::span<uint64_t> Slice(std::vector<uint64_t>& v, int gate, int user) {
    return {v.data() + Offset(gate, user), d_};
  }

  int n_;
  PrimeModulus modulus_;
  int gate_count_;
  size_t d_;
  std::vector<uint64_t> a_, b_, c_;
};

// Trusted-dealer simulation of the offline phase. Each (gate, coordinate)
// triple is drawn from its own stream keyed by
// (seed, round, subgroup, gate, coordinate), so output is independent of
// dealing order. Returns the number of share elements written in
// `*dealt_elements` when non-null.
BeaverTripleSet DealBeaverTriples(const DealerConfig& cfg, uint64_t* dealt_elements = nullptr);

// JSON-lines, one record per (gate, coordinate).
void WriteTriplesJsonl(std::ostream& os, const BeaverTripleSet& triples, uint64_t round,
                       uint64_t subgroup);

}  // namespace subvote
