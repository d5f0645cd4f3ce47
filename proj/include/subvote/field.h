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
#include <ostream>

namespace subvote {

// Deterministic Miller-Rabin, exact for every 64-bit input.
bool IsPrime(uint64_t n);

// An odd prime modulus p >= 3. Checked at construction.
class PrimeModulus {
 public:
  explicit PrimeModulus(uint64_t p);

  uint64_t value() const { return p_; }
  // ceil(log2 p): the bit length, since an odd prime is never a power of two.
  int bits() const;

  uint64_t Reduce(uint64_t v) const { return v % p_; }
  // Operands are reduced; the comparisons avoid wraparound for p near 2^64.
  uint64_t Add(uint64_t a, uint64_t b) const { return a >= p_ - b ? a - (p_ - b) : a + b; }
  uint64_t Sub(uint64_t a, uint64_t b) const { return a >= b ? a - b : p_ - (b - a); }
  uint64_t Neg(uint64_t a) const { return a == 0 ? 0 : p_ - a; }
  uint64_t Mul(uint64_t a, uint64_t b) const {
    return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % p_);
  }
  // Square-and-multiply; 0^0 = 1.
  uint64_t Pow(uint64_t base, uint64_t exp) const;

  // Signed integer to residue.
  uint64_t FromInt(int64_t v) const;
  // Residue to its centered representative in [-(p-1)/2, (p-1)/2].
  int64_t Centered(uint64_t r) const;
  int64_t half() const { return static_cast<int64_t>((p_ - 1) / 2); }

  friend bool operator==(const PrimeModulus&, const PrimeModulus&) = default;

 private:
  uint64_t p_;
};

// Least prime strictly greater than n. Rejects n >= 2^32.
uint64_t SmallestPrimeGreaterThan(uint64_t n);

class FieldElement {
 public:
  FieldElement(uint64_t value, PrimeModulus modulus)
      : value_(modulus.Reduce(value)), modulus_(modulus) {}

  static FieldElement FromInt(int64_t v, PrimeModulus modulus) {
    return {modulus.FromInt(v), modulus};
  }

  uint64_t value() const { return value_; }
  const PrimeModulus& modulus() const { return modulus_; }

  FieldElement pow(uint64_t exp) const { return {modulus_.Pow(value_, exp), modulus_}; }

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  FieldElement operator-() const { return {modulus_.Neg(value_), modulus_}; }
  FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
  FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }

  friend bool operator==(const FieldElement&, const FieldElement&) = default;
  friend std::ostream& operator<<(std::ostream& os, const FieldElement& e) {
    return os << e.value_ << " (mod " << e.modulus_.value() << ")";
  }

 private:
  uint64_t value_;
  PrimeModulus modulus_;
};

// Signed view of a field element; used for votes in {-1, +1} and sums in
// {-n, ..., n}.
struct SignedValue {
  int64_t value = 0;
  friend bool operator==(const SignedValue&, const SignedValue&) = default;
};

SignedValue ToCentered(const FieldElement& e);
// Rejects |s| > (p-1)/2.
FieldElement FromSigned(SignedValue s, PrimeModulus modulus);

}  // namespace subvote
