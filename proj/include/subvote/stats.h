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
#include <span>
#include <vector>

namespace subvote {

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  bool passes(double alpha) const { return p_value > alpha; }
};

// Goodness of fit of `counts` against the uniform distribution on its bins.
ChiSquareResult ChiSquareUniform(std::span<const uint64_t> counts);

// Homogeneity of two samples over the same bins (2 x k contingency table).
// Bins empty in both samples are dropped.
ChiSquareResult ChiSquareTwoSample(std::span<const uint64_t> a, std::span<const uint64_t> b);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Ordinary least squares y = slope * x + intercept.
LinearFit FitLine(std::span<const double> x, std::span<const double> y);

}  // namespace subvote
