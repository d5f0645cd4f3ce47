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

#include "subvote/field.h"

#include <array>
#include <bit>
#include <string>

#include "subvote/errors.h"

namespace subvote {

namespace {

uint64_t MulMod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

uint64_t PowMod(uint64_t base, uint64_t exp, uint64_t m) {
  uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = MulMod(result, base, m);
    base = MulMod(base, base, m);
    exp >>= 1;
  }
  return result;
}

}  // namespace

bool IsPrime(uint64_t n) {
  if (n < 2) return false;
  // These witnesses are sufficient for all n < 3.3e24.
  constexpr std::array<uint64_t, 12> kWitnesses = {2,  3,  5,  7,  11, 13,
                                                   17, 19, 23, 29, 31, 37};
  for (uint64_t w : kWitnesses) {
    if (n % w == 0) return n == w;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (uint64_t w : kWitnesses) {
    uint64_t x = PowMod(w, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = MulMod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PrimeModulus::PrimeModulus(uint64_t p) : p_(p) {
  if (p < 3) {
    throw InvalidArgument("modulus must be an odd prime >= 3, got " + std::to_string(p));
  }
  if (!IsPrime(p)) {
    throw InvalidArgument("modulus " + std::to_string(p) + " is not prime");
  }
}

int PrimeModulus::bits() const { return static_cast<int>(std::bit_width(p_)); }

uint64_t PrimeModulus::Pow(uint64_t base, uint64_t exp) const { return PowMod(base, exp, p_); }

uint64_t PrimeModulus::FromInt(int64_t v) const {
  const auto p = static_cast<int64_t>(p_);
  int64_t r = v % p;
  if (r < 0) r += p;
  return static_cast<uint64_t>(r);
}

int64_t PrimeModulus::Centered(uint64_t r) const {
  r %= p_;
  const auto v = static_cast<int64_t>(r);
  return r > (p_ - 1) / 2 ? v - static_cast<int64_t>(p_) : v;
}

uint64_t SmallestPrimeGreaterThan(uint64_t n) {
  if (n >= (uint64_t{1} << 32)) {
    throw InvalidArgument("smallest_prime_gt: n = " + std::to_string(n) +
                          " is outside the supported range (< 2^32)");
  }
  uint64_t c = n + 1;
  while (!IsPrime(c)) ++c;
  return c;
}

namespace {
void CheckSameModulus(const FieldElement& a, const FieldElement& b) {
  if (a.modulus() != b.modulus()) {
    throw InvalidArgument("field elements have different moduli");
  }
}
}  // namespace

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  CheckSameModulus(a, b);
  return {a.modulus_.Add(a.value_, b.value_), a.modulus_};
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  CheckSameModulus(a, b);
  return {a.modulus_.Sub(a.value_, b.value_), a.modulus_};
}

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  CheckSameModulus(a, b);
  return {a.modulus_.Mul(a.value_, b.value_), a.modulus_};
}

SignedValue ToCentered(const FieldElement& e) {
  return {e.modulus().Centered(e.value())};
}

FieldElement FromSigned(SignedValue s, PrimeModulus modulus) {
  if (s.value > modulus.half() || s.value < -modulus.half()) {
    throw InvalidArgument("signed value " + std::to_string(s.value) +
                          " outside centered range of F_" + std::to_string(modulus.value()));
  }
  return FieldElement::FromInt(s.value, modulus);
}

}  // namespace subvote
