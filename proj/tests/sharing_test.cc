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

#include <set>
#include <sstream>

#include "gtest/gtest.h"
#include "subvote/errors.h"
#include "subvote/stats.h"
#include "worked_example.h"

namespace subvote {
namespace {

TEST(SharingTest, ReconstructExamples) {
  const PrimeModulus p5(5);
  EXPECT_EQ(Reconstruct({{0, 3, 2}, p5}).value(), 0u);
  EXPECT_EQ(Reconstruct({{1, 1, 3}, p5}).value(), 0u);
  EXPECT_EQ(Reconstruct({{4}, p5}).value(), 4u);
  EXPECT_THROW(Reconstruct({{}, p5}), InvalidArgument);
}

TEST(SharingTest, LastShareCompletesSecret) {
  const PrimeModulus p5(5);
  StreamRng rng(11, {1});
  for (int i = 0; i < 100; ++i) {
    const auto sv = DealAdditiveShares(FieldElement(4, p5), 2, rng);
    ASSERT_EQ(sv.shares.size(), 2u);
    EXPECT_EQ(sv.shares[1], p5.Sub(4, sv.shares[0]));
  }
  EXPECT_THROW(DealAdditiveShares(FieldElement(0, p5), 1, rng), InvalidArgument);
}

TEST(SharingTest, RoundTripExhaustiveSmallFields) {
  StreamRng rng(3, {});
  for (uint64_t p = 3; p <= 29; ++p) {
    if (!IsPrime(p)) continue;
    const PrimeModulus mod(p);
    for (uint64_t s = 0; s < p; ++s) {
      for (int n = 2; n <= 6; ++n) {
        const auto sv = DealAdditiveShares(FieldElement(s, mod), n, rng);
        for (uint64_t v : sv.shares) EXPECT_LT(v, p);
        EXPECT_EQ(Reconstruct(sv).value(), s);
      }
    }
  }
}

TEST(SharingTest, RoundTripRandomLargeField) {
  const PrimeModulus mod(4294967291ULL);
  StreamRng rng(5, {});
  for (int i = 0; i < 10000; ++i) {
    const FieldElement s(rng(), mod);
    EXPECT_EQ(Reconstruct(DealAdditiveShares(s, 5, rng)), s);
  }
}

TEST(SharingTest, PartialSharesLookUniform) {
  const PrimeModulus p5(5);
  StreamRng rng(2024, {});
  std::vector<uint64_t> joint(25, 0), first(5, 0);
  for (int i = 0; i < 10000; ++i) {
    const auto sv = DealAdditiveShares(FieldElement(3, p5), 3, rng);
    ++joint[sv.shares[0] * 5 + sv.shares[1]];
    ++first[sv.shares[0]];
  }
  EXPECT_TRUE(ChiSquareUniform(joint).passes(0.01));
  EXPECT_TRUE(ChiSquareUniform(first).passes(0.01));
}

TEST(SharingTest, WorkedExampleTriplesAreValid) {
  const auto t = testing::WorkedExampleTriples();
  const auto t1 = t.TripleAt(0, 0);
  EXPECT_EQ(Reconstruct(t1.a).value(), 0u);
  EXPECT_EQ(Reconstruct(t1.b).value(), 4u);
  EXPECT_EQ(Reconstruct(t1.c).value(), 0u);
  const auto t2 = t.TripleAt(1, 0);
  EXPECT_EQ(Reconstruct(t2.a).value(), 3u);
  EXPECT_EQ(Reconstruct(t2.b).value(), 0u);
  EXPECT_EQ(Reconstruct(t2.c).value(), 0u);
}

DealerConfig Config(uint64_t seed, int n, uint64_t p, int gates, size_t d) {
  DealerConfig cfg;
  cfg.seed = seed;
  cfg.round = 4;
  cfg.subgroup = 1;
  cfg.n = n;
  cfg.modulus = PrimeModulus(p);
  cfg.gate_count = gates;
  cfg.d = d;
  return cfg;
}

TEST(SharingTest, DealtTriplesSatisfyProductRelation) {
  uint64_t dealt = 0;
  const auto t = DealBeaverTriples(Config(9, 4, 13, 5, 2000), &dealt);
  EXPECT_EQ(dealt, 3u * 5 * 2000 * 4);
  const PrimeModulus& mod = t.modulus();
  for (int g = 0; g < t.gate_count(); ++g) {
    for (size_t j = 0; j < t.d(); ++j) {
      const auto tr = t.TripleAt(g, j);
      EXPECT_EQ(Reconstruct(tr.c).value(),
                mod.Mul(Reconstruct(tr.a).value(), Reconstruct(tr.b).value()));
    }
  }
}

TEST(SharingTest, DealingIsDeterministic) {
  const auto cfg = Config(77, 3, 5, 2, 16);
  EXPECT_EQ(DealBeaverTriples(cfg), DealBeaverTriples(cfg));
  auto other = cfg;
  other.seed = 78;
  EXPECT_FALSE(DealBeaverTriples(cfg) == DealBeaverTriples(other));
  other = cfg;
  other.round = 5;
  EXPECT_FALSE(DealBeaverTriples(cfg) == DealBeaverTriples(other));
}

TEST(SharingTest, StreamsAreIndependentOfShape) {
  // A coordinate's triple does not depend on how many coordinates are dealt.
  const auto small = DealBeaverTriples(Config(1, 3, 7, 2, 4));
  const auto big = DealBeaverTriples(Config(1, 3, 7, 2, 40));
  for (int g = 0; g < 2; ++g) {
    for (int u = 0; u < 3; ++u) {
      for (size_t j = 0; j < 4; ++j) EXPECT_EQ(small.a(g, u)[j], big.a(g, u)[j]);
    }
  }
}

TEST(SharingTest, ZeroAFaultLeavesMasksZero) {
  auto cfg = Config(5, 3, 5, 2, 32);
  cfg.fault = DealerFault::kZeroA;
  const auto t = DealBeaverTriples(cfg);
  for (int g = 0; g < 2; ++g) {
    for (size_t j = 0; j < 32; ++j) {
      const auto tr = t.TripleAt(g, j);
      EXPECT_EQ(Reconstruct(tr.a).value(), 0u);
      EXPECT_EQ(Reconstruct(tr.c).value(), 0u);
    }
  }
}

TEST(SharingTest, JsonlDumpHasOneLinePerGateCoordinate) {
  const auto t = DealBeaverTriples(Config(5, 3, 5, 2, 3));
  std::ostringstream os;
  WriteTriplesJsonl(os, t, 4, 1);
  std::istringstream is(os.str());
  std::string line;
  int lines = 0;
  while (std::getline(is, line)) {
    ++lines;
    EXPECT_NE(line.find("\"gate\""), std::string::npos);
  }
  EXPECT_EQ(lines, 6);
}

}  // namespace
}  // namespace subvote
