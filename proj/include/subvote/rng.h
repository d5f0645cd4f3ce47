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
#include <initializer_list>

namespace subvote {

// SplitMix64 finalizer.
constexpr uint64_t Mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives a stream key from a seed and a tuple of position tags
// (round, subgroup, gate, coordinate, user, lane...). Order-sensitive.
constexpr uint64_t DeriveKey(uint64_t seed, std::initializer_list<uint64_t> tags) {
  uint64_t k = Mix64(seed ^ 0x5375627665746521ULL);
  for (uint64_t t : tags) k = Mix64(k ^ Mix64(t + 0x9e3779b97f4a7c15ULL));
  return k;
}

// Counter-based generator: the i-th output is a pure function of (key, i),
// so any stream can be regenerated in isolation from its position tags.
class StreamRng {
 public:
  using result_type = uint64_t;

  explicit StreamRng(uint64_t key) : key_(key) {}
  StreamRng(uint64_t seed, std::initializer_list<uint64_t> tags)
      : key_(DeriveKey(seed, tags)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() { return Mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  // Uniform on [0, bound) by rejection; bound > 0.
  uint64_t Below(uint64_t bound);
  // Uniform on [0, 1) with 53 bits.
  double Uniform01();
  // Standard normal via Box-Muller; both outputs of a pair are used.
  double Gaussian();

  StreamRng Split(uint64_t tag) const { return StreamRng(Mix64(key_ ^ Mix64(tag))); }

 private:
  uint64_t key_;
  uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace subvote
