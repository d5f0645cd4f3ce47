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

#include "subvote/planner.h"

#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>

#include "nlohmann/json.hpp"
#include "subvote/errors.h"

namespace subvote {

namespace {

// Reference cost rows (n, l, n1, p1, ceil(log p1), ceil(log p1 - 1),
// R, C_T, C_u), verbatim.
constexpr ReferenceCostRow kReferenceRows[] = {
    {12, 1, 12, 13, 4, 3, 18, 72, 72},    {12, 2, 6, 7, 3, 2, 10, 60, 30},
    {12, 3, 4, 5, 3, 2, 6, 54, 18},       {12, 4, 3, 5, 3, 2, 4, 48, 12},
    {15, 1, 15, 17, 5, 4, 18, 90, 90},    {15, 3, 5, 7, 3, 2, 8, 48, 24},
    {15, 5, 3, 5, 3, 2, 4, 60, 12},       {16, 1, 16, 17, 5, 4, 20, 100, 100},
    {16, 2, 8, 11, 4, 3, 14, 112, 56},    {16, 4, 4, 5, 3, 2, 6, 72, 18},
    {20, 1, 20, 23, 5, 4, 32, 160, 160},  {20, 2, 10, 11, 4, 3, 16, 128, 64},
    {20, 4, 5, 7, 3, 2, 8, 96, 24},       {20, 5, 4, 5, 3, 2, 6, 90, 18},
    {24, 1, 24, 29, 5, 4, 40, 200, 200},  {24, 2, 12, 13, 4, 3, 18, 144, 72},
    {24, 3, 8, 11, 4, 3, 14, 168, 56},    {24, 4, 6, 7, 3, 2, 10, 120, 30},
    {24, 6, 4, 7, 3, 2, 6, 108, 18},      {24, 8, 3, 5, 3, 2, 4, 96, 12},
    {28, 1, 28, 29, 5, 4, 40, 200, 200},  {28, 2, 14, 17, 5, 4, 22, 220, 110},
    {28, 4, 7, 11, 4, 3, 14, 224, 56},    {28, 7, 4, 5, 3, 2, 6, 126, 18},
    {30, 1, 30, 31, 5, 4, 38, 190, 190},  {30, 2, 15, 17, 4, 3, 20, 200, 100},
    {30, 3, 10, 11, 4, 3, 16, 192, 64},   {30, 5, 6, 7, 3, 2, 10, 150, 30},
    {30, 6, 5, 7, 3, 2, 8, 144, 24},      {30, 10, 3, 5, 3, 2, 4, 120, 12},
    {36, 1, 36, 37, 6, 5, 46, 276, 276},  {36, 2, 18, 19, 5, 4, 26, 260, 130},
    {36, 3, 12, 13, 4, 3, 18, 216, 72},   {36, 4, 9, 11, 4, 3, 14, 224, 56},
    {36, 6, 6, 7, 3, 2, 10, 180, 30},     {36, 9, 4, 5, 3, 2, 6, 162, 18},
    {36, 12, 3, 5, 3, 2, 4, 144, 12},     {40, 1, 40, 41, 6, 5, 48, 288, 288},
    {40, 2, 20, 23, 5, 4, 32, 320, 160},  {40, 4, 10, 11, 4, 3, 16, 256, 64},
    {40, 5, 8, 11, 4, 3, 14, 280, 56},    {40, 8, 5, 7, 3, 2, 8, 192, 24},
    {40, 10, 4, 5, 3, 2, 6, 180, 18},     {50, 1, 50, 51, 6, 5, 60, 360, 360},
    {50, 2, 25, 29, 5, 4, 34, 340, 170},  {50, 5, 10, 11, 4, 3, 16, 320, 64},
    {50, 10, 5, 7, 3, 2, 8, 240, 24},     {60, 1, 60, 61, 6, 5, 72, 432, 432},
    {60, 2, 30, 31, 5, 4, 38, 380, 190},  {60, 3, 20, 23, 5, 3, 32, 480, 160},
    {60, 5, 12, 13, 4, 3, 18, 360, 72},   {60, 6, 10, 11, 4, 2, 16, 384, 64},
    {60, 10, 6, 7, 3, 2, 10, 300, 30},    {60, 12, 5, 7, 3, 2, 8, 288, 24},
    {60, 20, 3, 5, 3, 2, 4, 240, 12},     {70, 1, 70, 71, 7, 6, 84, 588, 588},
    {70, 2, 35, 37, 6, 5, 44, 528, 264},  {70, 5, 14, 17, 5, 4, 22, 550, 110},
    {70, 7, 10, 11, 4, 3, 16, 448, 64},   {70, 10, 7, 11, 4, 3, 14, 560, 56},
    {70, 14, 5, 7, 3, 3, 8, 336, 24},     {80, 1, 80, 81, 7, 6, 92, 644, 644},
    {80, 2, 40, 41, 6, 5, 48, 576, 288},  {80, 4, 20, 23, 5, 4, 32, 640, 160},
    {80, 5, 16, 17, 5, 4, 20, 500, 100},  {80, 8, 10, 11, 4, 3, 16, 512, 64},
    {80, 10, 8, 11, 4, 3, 14, 560, 56},   {80, 16, 5, 7, 3, 2, 8, 384, 24},
    {80, 20, 4, 5, 3, 2, 6, 360, 18},     {90, 1, 90, 91, 7, 6, 104, 728, 728},
    {90, 2, 45, 47, 6, 5, 54, 648, 324},  {90, 3, 30, 31, 5, 4, 38, 570, 190},
    {90, 5, 18, 19, 5, 4, 26, 650, 130},  {90, 6, 15, 17, 5, 4, 18, 540, 90},
    {90, 9, 10, 11, 4, 3, 16, 576, 64},   {90, 10, 9, 11, 4, 3, 14, 560, 56},
    {90, 15, 6, 7, 3, 2, 10, 450, 30},    {90, 18, 5, 7, 3, 2, 8, 432, 24},
    {90, 30, 3, 5, 3, 2, 4, 360, 12},     {100, 1, 100, 101, 7, 6, 114, 798, 798},
    {100, 2, 50, 51, 6, 5, 60, 720, 360}, {100, 4, 25, 29, 5, 4, 34, 680, 170},
    {100, 5, 20, 23, 5, 4, 32, 800, 160}, {100, 10, 10, 11, 4, 3, 16, 640, 64},
    {100, 20, 5, 7, 3, 2, 8, 480, 24},    {100, 25, 4, 5, 3, 2, 6, 450, 18},
};

struct SubgroupShape {
  uint64_t p1;
  int bits;
  int latency;
  int depth;
  int R;
};

// Polynomial construction is O(p^2); memoize per (n1, policy).
SubgroupShape ShapeFor(int n1, TiePolicy policy) {
  static std::mutex mu;
  static std::map<std::pair<int, TiePolicy>, SubgroupShape> cache;
  std::lock_guard lock(mu);
  auto it = cache.find({n1, policy});
  if (it != cache.end()) return it->second;
  const MvPolynomial poly = MvPolynomial::Construct(n1, policy);
  const PowerSchedule s = BuildPowerSchedule(poly);
  SubgroupShape shape{poly.modulus().value(), poly.modulus().bits(), s.formula_latency,
                      s.schedule_depth, s.uploads_per_user};
  cache.emplace(std::make_pair(n1, policy), shape);
  return shape;
}

CostRow RawCost(int n, int l, const PlanOptions& options) {
  if (n < 2 || l < 1 || n % l != 0) {
    throw InvalidArgument("cost model: l = " + std::to_string(l) + " does not divide n = " +
                          std::to_string(n));
  }
  const int n1 = n / l;
  if (n1 < 2) throw InvalidArgument("cost model: subgroups need at least 2 users");
  const SubgroupShape shape = ShapeFor(n1, options.policy);
  CostRow row;
  row.n = n;
  row.l = l;
  row.n1 = n1;
  row.p1 = shape.p1;
  row.bits = shape.bits;
  row.formula_latency = shape.latency;
  row.schedule_depth = shape.depth;
  row.R = shape.R;
  if (options.reference_R) {
    if (const auto* ref = FindReferenceRow(n, l)) {
      row.R = ref->R;
      row.reference_R = true;
    }
  }
  row.user_bits = static_cast<uint64_t>(row.R) * static_cast<uint64_t>(row.bits);
  row.total_bits = static_cast<uint64_t>(l) * row.user_bits;
  return row;
}

double Reduction(uint64_t baseline, uint64_t value) {
  return 100.0 * (static_cast<double>(baseline) - static_cast<double>(value)) /
         static_cast<double>(baseline);
}

void FillReductions(CostRow& row, const CostRow& baseline) {
  if (row.l == 1) return;
  row.total_reduction = Reduction(baseline.total_bits, row.total_bits);
  row.user_reduction = Reduction(baseline.user_bits, row.user_bits);
}

}  // namespace

std::span<const ReferenceCostRow> ReferenceCostRows() { return kReferenceRows; }

const ReferenceCostRow* FindReferenceRow(int n, int l) {
  for (const auto& r : kReferenceRows) {
    if (r.n == n && r.l == l) return &r;
  }
  return nullptr;
}

CostRow CostFor(int n, int l, const PlanOptions& options) {
  CostRow row = RawCost(n, l, options);
  FillReductions(row, RawCost(n, 1, options));
  return row;
}

PlanReport Optimal(int n, const PlanOptions& options) {
  if (n < 3) throw InvalidArgument("planner needs n >= 3");
  const int min_n1 = options.allow_n1_2 ? 2 : 3;
  PlanReport report{n};
  const CostRow baseline = RawCost(n, 1, options);
  for (int l = 1; l <= n; ++l) {
    if (n % l != 0 || n / l < min_n1) continue;
    CostRow row = RawCost(n, l, options);
    FillReductions(row, baseline);
    report.rows.push_back(row);
  }
  report.optimal = report.rows.front();
  for (const auto& r : report.rows) {
    if (r.total_bits <= report.optimal.total_bits) report.optimal = r;
  }
  return report;
}

std::string FormatPercent(double pct) {
  const double rounded = std::floor(pct * 10.0 + 0.5 + 1e-9) / 10.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", rounded == 0.0 ? 0.0 : rounded);
  return buf;
}

namespace {

constexpr const char* kCsvHeader =
    "n,l,n1,p1,log_p1,log_p1_minus_1,R,C_T,C_u,C_T_reduction,C_u_reduction";

std::string PercentCell(const std::optional<double>& v) { return v ? FormatPercent(*v) : "-"; }

nlohmann::ordered_json RowJson(const CostRow& r) {
  nlohmann::ordered_json j;
  j["n"] = r.n;
  j["l"] = r.l;
  j["n1"] = r.n1;
  j["p1"] = r.p1;
  j["log_p1"] = r.bits;
  j["log_p1_minus_1"] = r.formula_latency;
  j["schedule_depth"] = r.schedule_depth;
  j["R"] = r.R;
  j["R_source"] = r.reference_R ? "reference" : "schedule";
  j["C_T"] = r.total_bits;
  j["C_u"] = r.user_bits;
  j["C_T_reduction"] = r.total_reduction ? nlohmann::ordered_json(FormatPercent(*r.total_reduction))
                                         : nlohmann::ordered_json(nullptr);
  j["C_u_reduction"] = r.user_reduction ? nlohmann::ordered_json(FormatPercent(*r.user_reduction))
                                        : nlohmann::ordered_json(nullptr);
  return j;
}

}  // namespace

std::string EmitTable(std::span<const int> ns, TableFormat format, const PlanOptions& options) {
  if (format == TableFormat::kCsv) {
    std::string out = std::string(kCsvHeader) + "\n";
    for (int n : ns) {
      for (const auto& r : Optimal(n, options).rows) {
        out += std::to_string(r.n) + "," + std::to_string(r.l) + "," + std::to_string(r.n1) + "," +
               std::to_string(r.p1) + "," + std::to_string(r.bits) + "," +
               std::to_string(r.formula_latency) + "," + std::to_string(r.R) + "," +
               std::to_string(r.total_bits) + "," + std::to_string(r.user_bits) + "," +
               PercentCell(r.total_reduction) + "," + PercentCell(r.user_reduction) + "\n";
      }
    }
    return out;
  }
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (int n : ns) {
    const PlanReport report = Optimal(n, options);
    nlohmann::ordered_json block;
    block["n"] = n;
    block["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : report.rows) block["rows"].push_back(RowJson(r));
    block["optimal"] = RowJson(report.optimal);
    doc.push_back(std::move(block));
  }
  return doc.dump(2) + "\n";
}

std::vector<RDeviation> RDeviations(const PlanOptions& options) {
  PlanOptions schedule_only = options;
  schedule_only.reference_R = false;
  std::vector<RDeviation> out;
  for (const auto& ref : kReferenceRows) {
    const CostRow row = RawCost(ref.n, ref.l, schedule_only);
    if (row.R != ref.R) out.push_back({ref.n, ref.l, ref.n1, row.R, ref.R});
  }
  return out;
}

std::string EmitDeviations(TableFormat format, const PlanOptions& options) {
  const auto devs = RDeviations(options);
  if (format == TableFormat::kCsv) {
    std::string out = "n,l,n1,schedule_R,reference_R\n";
    for (const auto& d : devs) {
      out += std::to_string(d.n) + "," + std::to_string(d.l) + "," + std::to_string(d.n1) + "," +
             std::to_string(d.schedule_R) + "," + std::to_string(d.reference_R) + "\n";
    }
    return out;
  }
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& d : devs) {
    doc.push_back({{"n", d.n}, {"l", d.l}, {"n1", d.n1}, {"schedule_R", d.schedule_R},
                   {"reference_R", d.reference_R}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace subvote
