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

#include "subvote/stats.h"

#include <boost/math/distributions/chi_squared.hpp>
#include <numeric>

#include "subvote/errors.h"

namespace subvote {

namespace {

double UpperTail(double statistic, int dof) {
  if (dof <= 0) return 1.0;
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

}  // namespace

ChiSquareResult ChiSquareUniform(std::span<const uint64_t> counts) {
  if (counts.size() < 2) throw InvalidArgument("uniformity test needs at least two bins");
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  if (total <= 0) throw InsufficientSamples("uniformity test on an empty sample");
  const double expected = total / static_cast<double>(counts.size());
  double stat = 0.0;
  for (uint64_t c : counts) {
    const double diff = static_cast<double>(c) - expected;
    stat += diff * diff / expected;
  }
  const int dof = static_cast<int>(counts.size()) - 1;
  return {stat, dof, UpperTail(stat, dof)};
}

ChiSquareResult ChiSquareTwoSample(std::span<const uint64_t> a, std::span<const uint64_t> b) {
  if (a.size() != b.size()) throw InvalidArgument("two-sample test needs matching bins");
  const double na = std::accumulate(a.begin(), a.end(), 0.0);
  const double nb = std::accumulate(b.begin(), b.end(), 0.0);
  if (na <= 0 || nb <= 0) throw InsufficientSamples("two-sample test on an empty sample");
  const double total = na + nb;
  double stat = 0.0;
  int bins = 0;
  for (size_t k = 0; k < a.size(); ++k) {
    const double col = static_cast<double>(a[k] + b[k]);
    if (col == 0) continue;
    ++bins;
    const double ea = col * na / total;
    const double eb = col * nb / total;
    stat += (static_cast<double>(a[k]) - ea) * (static_cast<double>(a[k]) - ea) / ea;
    stat += (static_cast<double>(b[k]) - eb) * (static_cast<double>(b[k]) - eb) / eb;
  }
  const int dof = bins - 1;
  return {stat, dof, UpperTail(stat, dof)};
}

LinearFit FitLine(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("fit needs >= 2 paired points");
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw InvalidArgument("fit needs distinct x values");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

}  // namespace subvote
