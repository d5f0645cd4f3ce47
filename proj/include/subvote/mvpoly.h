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
#include <string>
#include <string_view>
#include <vector>

#include "subvote/field.h"

namespace subvote {

// Definition of sign(0). The first two are the 1-bit policies; ZeroState
// keeps a tie as a third output state.
enum class TiePolicy { kResolveToMinus, kResolveToPlus, kZeroState };

std::string_view ToString(TiePolicy policy);
// Accepts "minus", "plus", "zero".
TiePolicy ParseTiePolicy(std::string_view name);

// sign(sum) under the given tie policy.
int SignOf(int64_t sum, TiePolicy policy);

// Majority-vote polynomial F over F_p, p the smallest prime above n, with
// F(m) = sign(m) for every reachable vote sum m in {-n, -n+2, ..., n}.
class MvPolynomial {
 public:
  // Expands sum_m sign(m) * (1 - (x - m)^(p-1)) symbolically. n >= 2.
  static MvPolynomial Construct(int n, TiePolicy policy);

  // Arbitrary coefficients; used for mutation tests and stubs. No
  // correctness check is performed.
  static MvPolynomial FromCoefficients(int n, PrimeModulus modulus, TiePolicy policy,
                                       std::vector<uint64_t> coeffs);

  int n() const { return n_; }
  const PrimeModulus& modulus() const { return modulus_; }
  TiePolicy policy() const { return policy_; }
  // coeffs()[k] is the coefficient of x^k; size p.
  const std::vector<uint64_t>& coeffs() const { return coeffs_; }
  // Highest exponent with a nonzero coefficient; 0 for the zero polynomial.
  int degree() const;

  // Horner evaluation at a field residue.
  uint64_t EvalResidue(uint64_t x) const;

  // F(x) for a reachable vote sum, decoded to its centered value. Throws
  // InvalidArgument if |x| > n or x has the wrong parity.
  SignedValue Evaluate(SignedValue x) const;

  // "2x^3 + 4x (mod 5)"
  std::string ToString() const;

 private:
  MvPolynomial(int n, PrimeModulus modulus, TiePolicy policy, std::vector<uint64_t> coeffs)
      : n_(n), modulus_(modulus), policy_(policy), coeffs_(std::move(coeffs)) {}

  int n_;
  PrimeModulus modulus_;
  TiePolicy policy_;
  std::vector<uint64_t> coeffs_;
};

// Exhaustive check over all n+1 reachable sums.
bool VerifyPolynomial(const MvPolynomial& poly);

// One secure multiplication: x^target = x^left * x^right.
struct PowerGate {
  int target = 0;
  int left = 0;   // target - v
  int right = 0;  // v, the largest power of two <= target - 1
  int layer = 0;  // dependency depth, 0-based
  friend bool operator==(const PowerGate&, const PowerGate&) = default;
};

struct PowerSchedule {
  std::vector<PowerGate> gates;              // ascending by target
  std::vector<std::vector<int>> layers;      // gate indices per layer
  int mult_count = 0;
  int uploads_per_user = 0;                  // R = 2 * mult_count
  int formula_latency = 0;                   // ceil(log2(p) - 1)
  int schedule_depth = 0;                    // number of layers

  // Index of the gate producing x^k, or -1.
  int GateFor(int exponent) const;
};

// Largest power of two <= k - 1, for k >= 2.
int SplitPoint(int k);

// Gates cover the closure of the nonzero exponents >= 2 under
// k -> {k - v_k, v_k}.
PowerSchedule BuildPowerSchedule(const MvPolynomial& poly);

}  // namespace subvote
