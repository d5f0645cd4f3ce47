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

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "subvote/errors.h"

namespace subvote {

std::string_view ToString(TiePolicy policy) {
  switch (policy) {
    case TiePolicy::kResolveToMinus:
      return "minus";
    case TiePolicy::kResolveToPlus:
      return "plus";
    case TiePolicy::kZeroState:
      return "zero";
  }
  return "?";
}

TiePolicy ParseTiePolicy(std::string_view name) {
  if (name == "minus") return TiePolicy::kResolveToMinus;
  if (name == "plus") return TiePolicy::kResolveToPlus;
  if (name == "zero") return TiePolicy::kZeroState;
  throw InvalidArgument("unknown tie policy '" + std::string(name) + "'");
}

int SignOf(int64_t sum, TiePolicy policy) {
  if (sum > 0) return 1;
  if (sum < 0) return -1;
  switch (policy) {
    case TiePolicy::kResolveToMinus:
      return -1;
    case TiePolicy::kResolveToPlus:
      return 1;
    case TiePolicy::kZeroState:
      return 0;
  }
  return 0;
}

MvPolynomial MvPolynomial::Construct(int n, TiePolicy policy) {
  if (n < 2) {
    throw InvalidArgument("majority-vote polynomial needs n >= 2, got " + std::to_string(n));
  }
  const PrimeModulus mod(SmallestPrimeGreaterThan(static_cast<uint64_t>(n)));
  const uint64_t p = mod.value();
  const uint64_t e = p - 1;

  // Row p-1 of Pascal's triangle mod p.
  std::vector<uint64_t> binom(e + 1, 0);
  binom[0] = 1;
  for (uint64_t row = 1; row <= e; ++row) {
    for (uint64_t k = row; k >= 1; --k) binom[k] = mod.Add(binom[k], binom[k - 1]);
  }

  std::vector<uint64_t> coeffs(p, 0);
  for (int m = -n; m <= n; m += 2) {
    const int s = SignOf(m, policy);
    if (s == 0) continue;
    const uint64_t sign = mod.FromInt(s);
    // + s
    coeffs[0] = mod.Add(coeffs[0], sign);
    // - s * (x - m)^(p-1) = - s * sum_k C(p-1, k) x^k (-m)^(p-1-k)
    const uint64_t neg_m = mod.FromInt(-m);
    for (uint64_t k = 0; k <= e; ++k) {
      const uint64_t term = mod.Mul(binom[k], mod.Pow(neg_m, e - k));
      coeffs[k] = mod.Sub(coeffs[k], mod.Mul(sign, term));
    }
  }
  return MvPolynomial(n, mod, policy, std::move(coeffs));
}

MvPolynomial MvPolynomial::FromCoefficients(int n, PrimeModulus modulus, TiePolicy policy,
                                            std::vector<uint64_t> coeffs) {
  if (coeffs.size() > modulus.value()) {
    throw InvalidArgument("polynomial degree exceeds p - 1");
  }
  for (auto& c : coeffs) c = modulus.Reduce(c);
  coeffs.resize(modulus.value(), 0);
  return MvPolynomial(n, modulus, policy, std::move(coeffs));
}

int MvPolynomial::degree() const {
  for (int k = static_cast<int>(coeffs_.size()) - 1; k > 0; --k) {
    if (coeffs_[k] != 0) return k;
  }
  return 0;
}

uint64_t MvPolynomial::EvalResidue(uint64_t x) const {
  uint64_t acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = modulus_.Add(modulus_.Mul(acc, x), *it);
  }
  return acc;
}

SignedValue MvPolynomial::Evaluate(SignedValue x) const {
  if (x.value > n_ || x.value < -n_ || ((x.value + n_) % 2) != 0) {
    throw InvalidArgument("vote sum " + std::to_string(x.value) +
                          " is not reachable with n = " + std::to_string(n_));
  }
  return {modulus_.Centered(EvalResidue(modulus_.FromInt(x.value)))};
}

std::string MvPolynomial::ToString() const {
  std::ostringstream os;
  bool first = true;
  for (int k = static_cast<int>(coeffs_.size()) - 1; k >= 0; --k) {
    const uint64_t c = coeffs_[k];
    if (c == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (k == 0) {
      os << c;
      continue;
    }
    if (c != 1) os << c;
    os << 'x';
    if (k > 1) os << '^' << k;
  }
  if (first) os << '0';
  os << " (mod " << modulus_.value() << ")";
  return os.str();
}

bool VerifyPolynomial(const MvPolynomial& poly) {
  const int n = poly.n();
  for (int m = -n; m <= n; m += 2) {
    if (poly.Evaluate({m}).value != SignOf(m, poly.policy())) return false;
  }
  return true;
}

int SplitPoint(int k) {
  int v = 1;
  while (v * 2 <= k - 1) v *= 2;
  return v;
}

int PowerSchedule::GateFor(int exponent) const {
  for (size_t i = 0; i < gates.size(); ++i) {
    if (gates[i].target == exponent) return static_cast<int>(i);
  }
  return -1;
}

PowerSchedule BuildPowerSchedule(const MvPolynomial& poly) {
  std::set<int> needed;
  std::vector<int> work;
  const auto& c = poly.coeffs();
  for (size_t k = 2; k < c.size(); ++k) {
    if (c[k] != 0) {
      needed.insert(static_cast<int>(k));
      work.push_back(static_cast<int>(k));
    }
  }
  while (!work.empty()) {
    const int k = work.back();
    work.pop_back();
    const int v = SplitPoint(k);
    for (int e : {k - v, v}) {
      if (e >= 2 && needed.insert(e).second) work.push_back(e);
    }
  }

  PowerSchedule s;
  std::map<int, int> depth{{1, 0}};
  for (int k : needed) {  // ascending, so operands are already placed
    const int v = SplitPoint(k);
    const int d = 1 + std::max(depth.at(k - v), depth.at(v));
    depth[k] = d;
    s.gates.push_back({k, k - v, v, d - 1});
  }
  for (size_t i = 0; i < s.gates.size(); ++i) {
    const auto layer = static_cast<size_t>(s.gates[i].layer);
    if (s.layers.size() <= layer) s.layers.resize(layer + 1);
    s.layers[layer].push_back(static_cast<int>(i));
  }
  s.mult_count = static_cast<int>(s.gates.size());
  s.uploads_per_user = 2 * s.mult_count;
  s.formula_latency = poly.modulus().bits() - 1;
  s.schedule_depth = static_cast<int>(s.layers.size());
  return s;
}

}  // namespace subvote
