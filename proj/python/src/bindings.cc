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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "subvote/errors.h"
#include "subvote/field.h"
#include "subvote/flsim.h"
#include "subvote/hierarchy.h"
#include "subvote/mvpoly.h"
#include "subvote/planner.h"
#include "subvote/protocol.h"

namespace py = pybind11;

namespace subvote {
namespace {

py::dict OpsDict(const OpCounts& ops) {
  py::dict d;
  d["gate_mults"] = ops.gate_mults;
  d["finalize_mults"] = ops.finalize_mults;
  d["online_mults"] = ops.online_mults();
  d["masked_elements"] = ops.masked_elements;
  d["dealt_elements"] = ops.dealt_elements;
  return d;
}

py::dict RowDict(const CostRow& r) {
  py::dict d;
  d["n"] = r.n;
  d["l"] = r.l;
  d["n1"] = r.n1;
  d["p1"] = r.p1;
  d["bits"] = r.bits;
  d["formula_latency"] = r.formula_latency;
  d["schedule_depth"] = r.schedule_depth;
  d["R"] = r.R;
  d["reference_R"] = r.reference_R;
  d["C_T"] = r.total_bits;
  d["C_u"] = r.user_bits;
  d["C_T_reduction"] = r.total_reduction ? py::cast(*r.total_reduction) : py::none();
  d["C_u_reduction"] = r.user_reduction ? py::cast(*r.user_reduction) : py::none();
  return d;
}

PlanOptions MakePlanOptions(const std::string& policy, bool reference_r, bool allow_n1_2) {
  PlanOptions o;
  o.policy = ParseTiePolicy(policy);
  o.reference_R = reference_r;
  o.allow_n1_2 = allow_n1_2;
  return o;
}

py::dict SecureRound(const std::vector<std::vector<int>>& inputs, int l, const std::string& tie,
                     uint64_t seed, uint64_t round, bool shuffle, int threads) {
  const auto x = SignMatrix::FromRows(inputs);
  const auto layout =
      shuffle ? SubgroupLayout::Shuffled(x.n(), l, seed) : SubgroupLayout::Partition(x.n(), l);
  const HierarchicalAggregator agg(layout, TieConfig::Parse(tie));
  RoundOptions opt;
  opt.round = round;
  opt.seed = seed;
  HierarchicalResult r;
  {
    py::gil_scoped_release release;
    r = agg.Run(x, agg.DealTriples(seed, round, x.d()), opt, threads);
  }
  py::dict d;
  d["votes"] = r.votes;
  d["group_votes"] = r.group_votes;
  d["plaintext"] = agg.Plain(x);
  d["assignment"] = layout.assignment;
  d["transcript"] = r.transcript.ToJsonl();
  d["ops"] = OpsDict(r.ops);
  return d;
}

py::dict Simulate(int n, int l, size_t d, int rounds, double eta, double sigma, double spread,
                  uint64_t seed, const std::string& tie, bool secure) {
  const auto task = SyntheticTask::Make(n, d, spread, sigma, seed);
  SimConfig cfg;
  cfg.n = n;
  cfg.l = l;
  cfg.d = d;
  cfg.rounds = rounds;
  cfg.eta = eta;
  cfg.seed = seed;
  cfg.ties = TieConfig::Parse(tie);
  cfg.mode = secure ? SimMode::kSecure : SimMode::kPlaintext;
  SimResult r;
  {
    py::gil_scoped_release release;
    r = RunSignSgdMv(task, cfg);
  }
  py::list metrics;
  for (const auto& m : r.metrics) {
    py::dict row;
    row["round"] = m.round;
    row["l1_grad_norm"] = m.l1_grad_norm;
    row["objective"] = m.objective;
    row["vote_agreement"] = m.vote_agreement;
    metrics.append(row);
  }
  py::dict out;
  out["metrics"] = metrics;
  out["theta"] = r.theta;
  out["votes"] = r.votes;
  out["ops"] = OpsDict(r.ops);
  return out;
}

}  // namespace
}  // namespace subvote

PYBIND11_MODULE(_core, m) {
  using namespace subvote;
  m.doc() = "Secure majority-vote aggregation over prime fields";

  static py::exception<ProtocolError> protocol_error(m, "ProtocolError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ProtocolError& e) {
      protocol_error(e.what());
    }
  });

  m.def("is_prime", &IsPrime, py::arg("n"));
  m.def("smallest_prime_greater_than", &SmallestPrimeGreaterThan, py::arg("n"));

  py::class_<MvPolynomial>(m, "MvPolynomial")
      .def_static(
          "construct",
          [](int n, const std::string& policy) {
            return MvPolynomial::Construct(n, ParseTiePolicy(policy));
          },
          py::arg("n"), py::arg("policy") = "minus")
      .def_property_readonly("n", &MvPolynomial::n)
      .def_property_readonly("p", [](const MvPolynomial& f) { return f.modulus().value(); })
      .def_property_readonly("policy",
                             [](const MvPolynomial& f) { return std::string(ToString(f.policy())); })
      .def_property_readonly("coeffs", &MvPolynomial::coeffs)
      .def_property_readonly("degree", &MvPolynomial::degree)
      .def("evaluate", [](const MvPolynomial& f, int64_t x) { return f.Evaluate({x}).value; },
           py::arg("x"))
      .def("verify", &VerifyPolynomial)
      .def("schedule",
           [](const MvPolynomial& f) {
             const auto s = BuildPowerSchedule(f);
             py::dict d;
             py::list gates;
             for (const auto& g : s.gates) gates.append(py::make_tuple(g.target, g.left, g.right, g.layer));
             d["gates"] = gates;
             d["mult_count"] = s.mult_count;
             d["uploads_per_user"] = s.uploads_per_user;
             d["formula_latency"] = s.formula_latency;
             d["schedule_depth"] = s.schedule_depth;
             return d;
           })
      .def("__str__", &MvPolynomial::ToString)
      .def("__repr__", [](const MvPolynomial& f) { return "<MvPolynomial " + f.ToString() + ">"; });

  m.def("secure_round", &SecureRound, py::arg("inputs"), py::arg("l") = 1,
        py::arg("tie") = "A1", py::arg("seed") = 0, py::arg("round") = 0,
        py::arg("shuffle") = false, py::arg("threads") = 1,
        "Run one secure hierarchical round on an n x d matrix of +-1 votes.");

  m.def(
      "cost_for",
      [](int n, int l, const std::string& policy, bool reference_r) {
        return RowDict(CostFor(n, l, MakePlanOptions(policy, reference_r, true)));
      },
      py::arg("n"), py::arg("l"), py::arg("policy") = "minus", py::arg("reference_r") = false);
  m.def(
      "optimal",
      [](int n, const std::string& policy, bool reference_r, bool allow_n1_2) {
        const auto rep = Optimal(n, MakePlanOptions(policy, reference_r, allow_n1_2));
        py::dict d;
        py::list rows;
        for (const auto& r : rep.rows) rows.append(RowDict(r));
        d["rows"] = rows;
        d["optimal"] = RowDict(rep.optimal);
        return d;
      },
      py::arg("n"), py::arg("policy") = "minus", py::arg("reference_r") = false,
      py::arg("allow_n1_2") = false);
  m.def(
      "emit_table",
      [](const std::vector<int>& ns, const std::string& format, bool reference_r) {
        if (format != "csv" && format != "json") throw InvalidArgument("format must be csv or json");
        return EmitTable(ns, format == "csv" ? TableFormat::kCsv : TableFormat::kJson,
                         MakePlanOptions("minus", reference_r, false));
      },
      py::arg("ns"), py::arg("format") = "csv", py::arg("reference_r") = false);

  m.def(
      "leakage_census",
      [](int n1, const std::string& policy) {
        const auto c = RunLeakageCensus(n1, ParseTiePolicy(policy));
        const auto f = c.revealed_fraction();
        py::dict d;
        d["n1"] = c.n1;
        d["profiles"] = c.profiles;
        d["revealed"] = c.revealed;
        d["fraction"] = py::make_tuple(f.num, f.den);
        return d;
      },
      py::arg("n1"), py::arg("policy") = "minus");

  m.def("simulate", &Simulate, py::arg("n"), py::arg("l"), py::arg("d"), py::arg("rounds"),
        py::arg("eta") = 0.05, py::arg("sigma") = 1.0, py::arg("spread") = 0.5,
        py::arg("seed") = 0, py::arg("tie") = "A1", py::arg("secure") = false,
        "signSGD with majority vote on a synthetic quadratic task.");
}
