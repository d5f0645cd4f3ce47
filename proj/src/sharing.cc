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

#include "subvote/sharing.h"

#include <ostream>

#include "nlohmann/json.hpp"
#include "subvote/errors.h"

namespace subvote {

ShareVector DealAdditiveShares(const FieldElement& secret, int n, StreamRng& rng) {
  if (n < 2) throw InvalidArgument("additive sharing needs n >= 2");
  const PrimeModulus& mod = secret.modulus();
  ShareVector sv{std::vector<uint64_t>(static_cast<size_t>(n)), mod};
  uint64_t rest = secret.value();
  for (int i = 0; i + 1 < n; ++i) {
    sv.shares[i] = rng.Below(mod.value());
    rest = mod.Sub(rest, sv.shares[i]);
  }
  sv.shares.back() = rest;
  return sv;
}

FieldElement Reconstruct(const ShareVector& sv) {
  if (sv.shares.empty()) throw InvalidArgument("cannot reconstruct from zero shares");
  uint64_t acc = 0;
  for (uint64_t s : sv.shares) acc = sv.modulus.Add(acc, sv.modulus.Reduce(s));
  return {acc, sv.modulus};
}

BeaverTripleSet::BeaverTripleSet(int n, PrimeModulus modulus, int gate_count, size_t d)
    : n_(n), modulus_(modulus), gate_count_(gate_count), d_(d) {
  const size_t total = static_cast<size_t>(gate_count) * static_cast<size_t>(n) * d;
  a_.assign(total, 0);
  b_.assign(total, 0);
  c_.assign(total, 0);
}

BeaverTripleSet::Triple BeaverTripleSet::TripleAt(int gate, size_t coord) const {
  Triple t{{{}, modulus_}, {{}, modulus_}, {{}, modulus_}};
  for (int u = 0; u < n_; ++u) {
    t.a.shares.push_back(a(gate, u)[coord]);
    t.b.shares.push_back(b(gate, u)[coord]);
    t.c.shares.push_back(c(gate, u)[coord]);
  }
  return t;
}

namespace {

// Lanes separating the a/b/c streams of one triple.
enum Lane : uint64_t { kLaneA = 1, kLaneB = 2, kLaneC = 3 };

}  // namespace

BeaverTripleSet DealBeaverTriples(const DealerConfig& cfg, uint64_t* dealt_elements) {
  if (cfg.n < 2) throw InvalidArgument("dealer needs n >= 2");
  if (cfg.gate_count < 0) throw InvalidArgument("negative gate count");
  const PrimeModulus& mod = cfg.modulus;
  const uint64_t p = mod.value();
  BeaverTripleSet set(cfg.n, mod, cfg.gate_count, cfg.d);

  for (int g = 0; g < cfg.gate_count; ++g) {
    for (size_t j = 0; j < cfg.d; ++j) {
      StreamRng rng(cfg.seed, {cfg.round, cfg.subgroup, static_cast<uint64_t>(g), j});
      const uint64_t a = cfg.fault == DealerFault::kZeroA ? 0 : rng.Below(p);
      const uint64_t b = rng.Below(p);
      const uint64_t c = mod.Mul(a, b);
      uint64_t ra = a, rb = b, rc = c;
      // Each user's share comes from its own sub-stream.
      for (int u = 0; u + 1 < cfg.n; ++u) {
        const auto user = static_cast<uint64_t>(u);
        const uint64_t sa =
            cfg.fault == DealerFault::kZeroA ? 0 : rng.Split(user * 4 + kLaneA).Below(p);
        const uint64_t sb = rng.Split(user * 4 + kLaneB).Below(p);
        const uint64_t sc =
            cfg.fault == DealerFault::kZeroA ? 0 : rng.Split(user * 4 + kLaneC).Below(p);
        set.a(g, u)[j] = sa;
        set.b(g, u)[j] = sb;
        set.c(g, u)[j] = sc;
        ra = mod.Sub(ra, sa);
        rb = mod.Sub(rb, sb);
        rc = mod.Sub(rc, sc);
      }
      set.a(g, cfg.n - 1)[j] = ra;
      set.b(g, cfg.n - 1)[j] = rb;
      set.c(g, cfg.n - 1)[j] = rc;
    }
  }
  if (dealt_elements != nullptr) {
    *dealt_elements = 3ULL * static_cast<uint64_t>(cfg.gate_count) * cfg.d *
                      static_cast<uint64_t>(cfg.n);
  }
  return set;
}

void WriteTriplesJsonl(std::ostream& os, const BeaverTripleSet& triples, uint64_t round,
                       uint64_t subgroup) {
  for (int g = 0; g < triples.gate_count(); ++g) {
    for (size_t j = 0; j < triples.d(); ++j) {
      const auto t = triples.TripleAt(g, j);
      nlohmann::ordered_json rec;
      rec["round"] = round;
      rec["subgroup"] = subgroup;
      rec["gate"] = g;
      rec["coordinate"] = j;
      rec["p"] = triples.modulus().value();
      rec["a"] = t.a.shares;
      rec["b"] = t.b.shares;
      rec["c"] = t.c.shares;
      os << rec.dump() << '\n';
    }
  }
}

}  // namespace subvote
