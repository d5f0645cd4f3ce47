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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "subvote/mvpoly.h"

namespace subvote {

struct CostRow {
  int n = 0;
  int l = 0;
  int n1 = 0;
  uint64_t p1 = 0;
  int bits = 0;             // ceil(log2 p1)
  int formula_latency = 0;  // ceil(log2 p1 - 1)
  int schedule_depth = 0;
  int R = 0;                // masked elements uploaded per user
  bool reference_R = false; // R taken from the reference table
  uint64_t total_bits = 0;  // C_T = l * C_u
  uint64_t user_bits = 0;   // C_u = R * bits
  // Percent reduction vs the l = 1 row of the same n; empty on that row.
  std::optional<double> total_reduction;
  std::optional<double> user_reduction;
};

struct PlanOptions {
  TiePolicy policy = TiePolicy::kResolveToMinus;
  bool allow_n1_2 = false;
  // Substitute reference-table R values where a row exists.
  bool reference_R = false;
};

// Throws InvalidArgument unless l divides n and n1 >= 2.
CostRow CostFor(int n, int l, const PlanOptions& options = {});

struct PlanReport {
  int n = 0;
  std::vector<CostRow> rows;  // ascending l
  CostRow optimal;            // min C_T, ties toward larger l
};

// Rows for every divisor l with n1 >= 3 (>= 2 with allow_n1_2). n >= 3.
PlanReport Optimal(int n, const PlanOptions& options = {});

enum class TableFormat { kCsv, kJson };

// Key-metric table for each n, in the fixed column order
// n,l,n1,p1,log_p1,log_p1_minus_1,R,C_T,C_u,C_T_reduction,C_u_reduction.
std::string EmitTable(std::span<const int> ns, TableFormat format, const PlanOptions& options = {});

// One reference cost row, kept verbatim (including its typos).
struct ReferenceCostRow {
  int n, l, n1, p1, bits, latency, R, total_bits, user_bits;
};

std::span<const ReferenceCostRow> ReferenceCostRows();
const ReferenceCostRow* FindReferenceRow(int n, int l);

struct RDeviation {
  int n, l, n1;
  int schedule_R;
  int reference_R;
};

// Reference rows whose schedule-derived R differs, as CSV or JSON.
std::vector<RDeviation> RDeviations(const PlanOptions& options = {});
std::string EmitDeviations(TableFormat format, const PlanOptions& options = {});

// One-decimal, half-up formatting used for the reduction columns.
std::string FormatPercent(double pct);

}  // namespace subvote
