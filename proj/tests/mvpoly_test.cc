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

#include "subvote/mvpoly.h"

#include <map>
#include <vector>

#include "gtest/gtest.h"
#include "subvote/errors.h"

namespace subvote {
namespace {

using Coeffs = std::map<int, uint64_t>;

std::vector<uint64_t> Dense(const Coeffs& sparse, uint64_t p) {
  std::vector<uint64_t> out(p, 0);
  for (const auto& [k, c] : sparse) out[static_cast<size_t>(k)] = c;
  return out;
}

// Independent route: solve the Vandermonde system over all p residues, with
// F(m) = sign(m) at reachable sums and 0 elsewhere.
std::vector<uint64_t> InterpolationOracle(int n, TiePolicy policy) {
  const PrimeModulus mod(SmallestPrimeGreaterThan(static_cast<uint64_t>(n)));
  const size_t p = mod.value();
  std::vector<uint64_t> target(p, 0);
  for (int m = -n; m <= n; m += 2) {
    target[mod.FromInt(m)] = mod.FromInt(SignOf(m, policy));
  }
  std::vector<std::vector<uint64_t>> a(p, std::vector<uint64_t>(p + 1));
  for (size_t r = 0; r < p; ++r) {
    for (size_t c = 0; c < p; ++c) a[r][c] = mod.Pow(r, c);
    a[r][p] = target[r];
  }
  for (size_t col = 0; col < p; ++col) {
    size_t piv = col;
    while (a[piv][col] == 0) ++piv;
    std::swap(a[piv], a[col]);
    const uint64_t inv = mod.Pow(a[col][col], p - 2);
    for (auto& v : a[col]) v = mod.Mul(v, inv);
    for (size_t r = 0; r < p; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const uint64_t f = a[r][col];
      for (size_t c = col; c <= p; ++c) a[r][c] = mod.Sub(a[r][c], mod.Mul(f, a[col][c]));
    }
  }
  std::vector<uint64_t> out(p);
  for (size_t r = 0; r < p; ++r) out[r] = a[r][p];
  return out;
}

struct TableRow {
  int n;
  TiePolicy policy;
  uint64_t p;
  Coeffs coeffs;
};

const TiePolicy kMinus = TiePolicy::kResolveToMinus;
const TiePolicy kZero = TiePolicy::kZeroState;

TEST(MvPolynomialTest, SmallNReference) {
  const std::vector<TableRow> rows = {
      {2, kMinus, 3, {{2, 1}, {1, 2}, {0, 2}}},
      {2, kZero, 3, {{1, 2}}},
      {3, kMinus, 5, {{3, 2}, {1, 4}}},
      {3, kZero, 5, {{3, 2}, {1, 4}}},
      {4, kMinus, 5, {{4, 1}, {3, 3}, {1, 1}, {0, 4}}},
      {4, kZero, 5, {{3, 3}, {1, 1}}},
      {5, kMinus, 7, {{5, 3}, {3, 2}, {1, 3}}},
      {5, kZero, 7, {{5, 3}, {3, 2}, {1, 3}}},
      {6, kMinus, 7, {{6, 1}, {5, 4}, {3, 5}, {1, 4}, {0, 6}}},
      {6, kZero, 7, {{5, 4}, {3, 5}, {1, 4}}},
  };
  for (const auto& row : rows) {
    const auto poly = MvPolynomial::Construct(row.n, row.policy);
    EXPECT_EQ(poly.modulus().value(), row.p);
    EXPECT_EQ(poly.coeffs(), Dense(row.coeffs, row.p)) << poly.ToString();
  }
  EXPECT_EQ(MvPolynomial::Construct(3, kMinus).ToString(), "2x^3 + 4x (mod 5)");
  EXPECT_EQ(MvPolynomial::Construct(2, kMinus).ToString(), "x^2 + 2x + 2 (mod 3)");
}

TEST(MvPolynomialTest, EvaluateExamples) {
  const auto f3 = MvPolynomial::Construct(3, kMinus);
  EXPECT_EQ(f3.Evaluate({1}).value, 1);
  EXPECT_EQ(f3.Evaluate({-3}).value, -1);
  const auto f4 = MvPolynomial::Construct(4, kZero);
  EXPECT_EQ(f4.Evaluate({0}).value, 0);
  EXPECT_EQ(f4.Evaluate({4}).value, 1);
  EXPECT_THROW(f3.Evaluate({2}), InvalidArgument);
  EXPECT_THROW(f3.Evaluate({5}), InvalidArgument);
}

TEST(MvPolynomialTest, MatchesInterpolationOracle) {
  for (int n = 2; n <= 40; ++n) {
    for (TiePolicy policy : {kMinus, TiePolicy::kResolveToPlus, kZero}) {
      const auto poly = MvPolynomial::Construct(n, policy);
      EXPECT_TRUE(VerifyPolynomial(poly)) << n;
      EXPECT_EQ(poly.coeffs(), InterpolationOracle(n, policy)) << n;
      for (int x = -n; x <= n; x += 2) {
        EXPECT_EQ(poly.Evaluate({x}).value, SignOf(x, policy));
      }
    }
  }
}

TEST(MvPolynomialTest, OddUserCountIsPolicyFreeAndOdd) {
  for (int n = 3; n <= 39; n += 2) {
    const auto minus = MvPolynomial::Construct(n, kMinus);
    EXPECT_EQ(minus.coeffs(), MvPolynomial::Construct(n, kZero).coeffs());
    EXPECT_EQ(minus.coeffs(), MvPolynomial::Construct(n, TiePolicy::kResolveToPlus).coeffs());
    for (size_t k = 0; k < minus.coeffs().size(); k += 2) EXPECT_EQ(minus.coeffs()[k], 0u);
  }
}

TEST(MvPolynomialTest, MutationBreaksVerification) {
  for (int n = 2; n <= 20; ++n) {
    const auto poly = MvPolynomial::Construct(n, kMinus);
    const uint64_t p = poly.modulus().value();
    for (size_t k = 0; k < p; ++k) {
      auto coeffs = poly.coeffs();
      coeffs[k] = (coeffs[k] + 1) % p;
      EXPECT_FALSE(VerifyPolynomial(
          MvPolynomial::FromCoefficients(n, poly.modulus(), kMinus, coeffs)));
    }
  }
}

TEST(MvPolynomialTest, ConstructRejectsTinyN) {
  EXPECT_THROW(MvPolynomial::Construct(1, kMinus), InvalidArgument);
  EXPECT_THROW(MvPolynomial::Construct(0, kZero), InvalidArgument);
}

TEST(MvPolynomialTest, TiePolicyParsing) {
  EXPECT_EQ(ParseTiePolicy("minus"), kMinus);
  EXPECT_EQ(ParseTiePolicy("zero"), kZero);
  EXPECT_EQ(ToString(TiePolicy::kResolveToPlus), "plus");
  EXPECT_THROW(ParseTiePolicy("maybe"), InvalidArgument);
}

TEST(PowerScheduleTest, SplitPoint) {
  EXPECT_EQ(SplitPoint(2), 1);
  EXPECT_EQ(SplitPoint(3), 2);
  EXPECT_EQ(SplitPoint(4), 2);
  EXPECT_EQ(SplitPoint(5), 4);
  EXPECT_EQ(SplitPoint(9), 8);
  EXPECT_EQ(SplitPoint(17), 16);
}

TEST(PowerScheduleTest, SmallSchedules) {
  const auto s3 = BuildPowerSchedule(MvPolynomial::Construct(3, kMinus));
  ASSERT_EQ(s3.gates.size(), 2u);
  EXPECT_EQ(s3.gates[0], (PowerGate{2, 1, 1, 0}));
  EXPECT_EQ(s3.gates[1], (PowerGate{3, 1, 2, 1}));
  EXPECT_EQ(s3.uploads_per_user, 4);
  EXPECT_EQ(s3.schedule_depth, 2);
  EXPECT_EQ(BuildPowerSchedule(MvPolynomial::Construct(5, kMinus)).uploads_per_user, 8);
  EXPECT_EQ(BuildPowerSchedule(MvPolynomial::Construct(2, kMinus)).uploads_per_user, 2);
  EXPECT_EQ(BuildPowerSchedule(MvPolynomial::Construct(4, kMinus)).uploads_per_user, 6);
  EXPECT_EQ(BuildPowerSchedule(MvPolynomial::Construct(6, kMinus)).uploads_per_user, 10);
}

TEST(PowerScheduleTest, SoundAndSufficient) {
  for (int n = 2; n <= 40; ++n) {
    for (TiePolicy policy : {kMinus, kZero}) {
      const auto poly = MvPolynomial::Construct(n, policy);
      const auto sched = BuildPowerSchedule(poly);
      const auto& mod = poly.modulus();
      EXPECT_EQ(sched.uploads_per_user, 2 * sched.mult_count);
      EXPECT_EQ(sched.mult_count, static_cast<int>(sched.gates.size()));
      // Every nonzero coefficient with k >= 2 has a gate.
      for (size_t k = 2; k < poly.coeffs().size(); ++k) {
        if (poly.coeffs()[k] != 0) EXPECT_GE(sched.GateFor(static_cast<int>(k)), 0);
      }
      // Operands are available before use, and layers respect dependencies.
      for (const auto& g : sched.gates) {
        EXPECT_EQ(g.left + g.right, g.target);
        EXPECT_EQ(g.right, SplitPoint(g.target));
        for (int operand : {g.left, g.right}) {
          if (operand == 1) continue;
          const int idx = sched.GateFor(operand);
          ASSERT_GE(idx, 0);
          EXPECT_LT(sched.gates[static_cast<size_t>(idx)].layer, g.layer);
        }
      }
      // Plaintext replay reproduces x^k for every x.
      for (uint64_t x = 0; x < mod.value(); ++x) {
        std::map<int, uint64_t> powers{{1, x}};
        for (const auto& g : sched.gates) {
          powers[g.target] = mod.Mul(powers.at(g.left), powers.at(g.right));
        }
        for (const auto& [k, v] : powers) EXPECT_EQ(v, mod.Pow(x, static_cast<uint64_t>(k)));
      }
    }
  }
}

}  // namespace
}  // namespace subvote
