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

// subvote: command-line entry point.
//
//   subvote poly    --n 3 --policy minus
//   subvote plan    --n 24 --all-l --format csv
//   subvote round   --n 24 --l 8 --d 16 --tie B1 --seed 7 --trace t.jsonl
//   subvote sim     --n 12 --l 4 --d 10 --rounds 200 --mode both
//   subvote leakage --n1 3
//   subvote bench   --n 24 --l 8 --d 1000
//
// Exit codes: 0 success, 2 argument error, 1 protocol error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nlohmann/json.hpp"
#include "subvote/bench.h"
#include "subvote/errors.h"
#include "subvote/flsim.h"
#include "subvote/hierarchy.h"
#include "subvote/mvpoly.h"
#include "subvote/planner.h"
#include "subvote/protocol.h"
#include "subvote/rng.h"
#include "subvote/sharing.h"

namespace {

using namespace subvote;
using json = nlohmann::ordered_json;

struct GlobalOptions {
  uint64_t seed = 0;
  std::string format = "human";
  int verbosity = 0;
  int threads = 1;
};

std::ofstream OpenOutput(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw InvalidArgument("cannot open '" + path + "' for writing");
  return os;
}

std::string VoteString(const std::vector<int>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += v[i] > 0 ? "+1" : (v[i] < 0 ? "-1" : "0");
  }
  return out;
}

// ---- poly ----

struct PolyArgs {
  int n = 3;
  std::string policy = "minus";
};

void CmdPoly(const PolyArgs& a, const GlobalOptions& g) {
  const auto poly = MvPolynomial::Construct(a.n, ParseTiePolicy(a.policy));
  const auto sched = BuildPowerSchedule(poly);
  if (g.format == "json") {
    json j;
    j["n"] = poly.n();
    j["p"] = poly.modulus().value();
    j["policy"] = ToString(poly.policy());
    j["polynomial"] = poly.ToString();
    j["coefficients"] = poly.coeffs();
    j["mult_count"] = sched.mult_count;
    j["R"] = sched.uploads_per_user;
    j["formula_latency"] = sched.formula_latency;
    j["schedule_depth"] = sched.schedule_depth;
    std::cout << j.dump(2) << '\n';
    return;
  }
  if (g.format == "human") {
    std::cout << "F(x) = " << poly.ToString() << "\n";
    std::cout << "n = " << poly.n() << ", p = " << poly.modulus().value()
              << ", policy = " << ToString(poly.policy()) << ", degree = " << poly.degree()
              << "\n";
    std::cout << "gates = " << sched.mult_count << ", R = " << sched.uploads_per_user
              << ", formula latency = " << sched.formula_latency
              << ", schedule depth = " << sched.schedule_depth << "\n";
    std::cout << "verified = " << (VerifyPolynomial(poly) ? "yes" : "no") << "\n\n";
  }
  std::cout << "exponent,coefficient\n";
  for (size_t k = 0; k < poly.coeffs().size(); ++k) {
    std::cout << k << ',' << poly.coeffs()[k] << '\n';
  }
}

// ---- plan ----

struct PlanArgs {
  std::vector<int> ns;
  bool all_l = false;
  bool reference_R = false;
  bool allow_n1_2 = false;
  bool deviations = false;
  std::string policy = "minus";
};

void CmdPlan(const PlanArgs& a, const GlobalOptions& g) {
  PlanOptions opts;
  opts.policy = ParseTiePolicy(a.policy);
  opts.reference_R = a.reference_R;
  opts.allow_n1_2 = a.allow_n1_2;
  const TableFormat fmt = g.format == "json" ? TableFormat::kJson : TableFormat::kCsv;
  if (a.deviations) {
    std::cout << EmitDeviations(fmt, opts);
    return;
  }
  if (a.all_l) {
    std::cout << EmitTable(a.ns, fmt, opts);
    return;
  }
  // Optimal rows only.
  if (fmt == TableFormat::kJson) {
    json doc = json::parse(EmitTable(a.ns, fmt, opts));
    json out = json::array();
    for (auto& block : doc) out.push_back(block["optimal"]);
    std::cout << out.dump(2) << '\n';
    return;
  }
  const std::string table = EmitTable({}, fmt, opts);
  std::cout << table;
  for (int n : a.ns) {
    const auto report = Optimal(n, opts);
    const auto& r = report.optimal;
    std::cout << r.n << ',' << r.l << ',' << r.n1 << ',' << r.p1 << ',' << r.bits << ','
              << r.formula_latency << ',' << r.R << ',' << r.total_bits << ',' << r.user_bits << ','
              << (r.total_reduction ? FormatPercent(*r.total_reduction) : "-") << ','
              << (r.user_reduction ? FormatPercent(*r.user_reduction) : "-") << '\n';
  }
}

// ---- round ----

struct RoundArgs {
  int n = 3;
  int l = 1;
  size_t d = 1;
  std::string policy = "minus";
  std::string tie;
  std::string inputs;
  std::string trace;
  std::string dump_triples;
  uint64_t round = 0;
  bool shuffle = false;
};

SignMatrix RandomInputs(int n, size_t d, uint64_t seed) {
  StreamRng rng(seed, {0x696e70757473ULL});
  SignMatrix m(n, d);
  for (int i = 0; i < n; ++i) {
    for (size_t j = 0; j < d; ++j) m.set(i, j, (rng() & 1) ? 1 : -1);
  }
  return m;
}

int CmdRound(const RoundArgs& a, const GlobalOptions& g) {
  SignMatrix inputs = [&] {
    if (a.inputs.empty()) return RandomInputs(a.n, a.d, g.seed);
    std::ifstream is(a.inputs);
    if (!is) throw InvalidArgument("cannot read inputs '" + a.inputs + "'");
    return SignMatrix::ParseCsv(is);
  }();
  if (inputs.n() != a.n) {
    throw InvalidArgument("inputs have " + std::to_string(inputs.n()) + " rows, --n is " +
                          std::to_string(a.n));
  }
  const RoundOptions ropts{a.round, g.seed, true};
  std::vector<int> votes, plain;
  std::vector<std::vector<int>> group_votes;
  ProtocolTranscript transcript;
  std::ofstream triples_out;
  if (!a.dump_triples.empty()) triples_out = OpenOutput(a.dump_triples);

  const bool hierarchical = a.l > 1 || !a.tie.empty();
  if (hierarchical) {
    const TieConfig ties = a.tie.empty() ? TieConfig::A1() : TieConfig::Parse(a.tie);
    auto layout = a.shuffle ? SubgroupLayout::Shuffled(a.n, a.l, g.seed)
                            : SubgroupLayout::Partition(a.n, a.l);
    const HierarchicalAggregator agg(std::move(layout), ties);
    const auto triples = agg.DealTriples(g.seed, a.round, inputs.d());
    if (triples_out.is_open()) {
      for (size_t j = 0; j < triples.size(); ++j) WriteTriplesJsonl(triples_out, triples[j], a.round, j);
    }
    auto r = agg.Run(inputs, triples, ropts, g.threads);
    votes = std::move(r.votes);
    group_votes = std::move(r.group_votes);
    transcript = std::move(r.transcript);
    plain = agg.Plain(inputs);
  } else {
    const auto poly = MvPolynomial::Construct(a.n, ParseTiePolicy(a.policy));
    const auto sched = BuildPowerSchedule(poly);
    DealerConfig cfg{g.seed, a.round, 0, a.n, poly.modulus(), sched.mult_count, inputs.d()};
    const auto triples = DealBeaverTriples(cfg);
    if (triples_out.is_open()) WriteTriplesJsonl(triples_out, triples, a.round, 0);
    auto r = RunFlatRound(inputs, poly, triples, ropts);
    votes = std::move(r.votes);
    transcript = std::move(r.transcript);
    plain = PlainMajority(inputs, poly.policy());
  }
  if (!a.trace.empty()) {
    auto os = OpenOutput(a.trace);
    transcript.WriteJsonl(os);
  }
  const bool match = votes == plain;
  if (g.format == "json") {
    json j;
    j["votes"] = votes;
    if (hierarchical) j["group_votes"] = group_votes;
    j["plaintext"] = plain;
    j["match"] = match;
    std::cout << j.dump() << '\n';
  } else if (g.format == "csv") {
    std::cout << "coordinate,vote,plaintext\n";
    for (size_t c = 0; c < votes.size(); ++c) {
      std::cout << c << ',' << votes[c] << ',' << plain[c] << '\n';
    }
  } else {
    std::cout << "votes:     " << VoteString(votes) << "\n";
    if (hierarchical) {
      for (size_t j = 0; j < group_votes.size(); ++j) {
        std::cout << "group " << j << ":   " << VoteString(group_votes[j]) << "\n";
      }
    }
    std::cout << "plaintext: " << VoteString(plain) << "\n";
    std::cout << "match:     " << (match ? "yes" : "NO") << "\n";
  }
  return match ? 0 : 1;
}

// ---- sim ----

struct SimArgs {
  int n = 12;
  int l = 1;
  size_t d = 10;
  int rounds = 200;
  double eta = 0.05;
  double sigma = 1.0;
  double spread = 0.5;
  std::string tie = "A1";
  std::string mode = "plain";
  std::string metrics;
};

int CmdSim(const SimArgs& a, const GlobalOptions& g) {
  const auto task = SyntheticTask::Make(a.n, a.d, a.spread, a.sigma, g.seed);
  SimConfig cfg;
  cfg.n = a.n;
  cfg.l = a.l;
  cfg.d = a.d;
  cfg.ties = TieConfig::Parse(a.tie);
  cfg.rounds = a.rounds;
  cfg.eta = a.eta;
  cfg.seed = g.seed;
  cfg.threads = g.threads;

  if (a.mode != "plain" && a.mode != "secure" && a.mode != "both") {
    throw InvalidArgument("--mode must be plain, secure or both");
  }
  std::optional<SimResult> plain, secure;
  if (a.mode != "secure") {
    cfg.mode = SimMode::kPlaintext;
    plain = RunSignSgdMv(task, cfg);
  }
  if (a.mode != "plain") {
    cfg.mode = SimMode::kSecure;
    secure = RunSignSgdMv(task, cfg);
  }
  const SimResult& main = plain ? *plain : *secure;
  if (!a.metrics.empty()) {
    auto os = OpenOutput(a.metrics);
    WriteMetricsCsv(os, main.metrics);
  }
  bool equivalent = true;
  if (plain && secure) equivalent = plain->votes == secure->votes && plain->theta == secure->theta;

  if (g.format == "csv") {
    WriteMetricsCsv(std::cout, main.metrics);
  } else {
    json j;
    j["mode"] = a.mode;
    j["rounds"] = a.rounds;
    if (!main.metrics.empty()) {
      j["first_l1_grad_norm"] = main.metrics.front().l1_grad_norm;
      j["last_l1_grad_norm"] = main.metrics.back().l1_grad_norm;
      j["last_objective"] = main.metrics.back().objective;
    }
    j["final_objective"] = task.Objective(main.theta);
    if (secure) {
      j["online_mults"] = secure->ops.online_mults();
      j["masked_elements"] = secure->ops.masked_elements;
    }
    if (plain && secure) j["secure_equals_plaintext"] = equivalent;
    std::cout << (g.format == "json" ? j.dump() : j.dump(2)) << '\n';
  }
  return equivalent ? 0 : 1;
}

// ---- leakage ----

struct LeakageArgs {
  int n1 = 3;
  int n1_max = 0;
  std::string policy = "minus";
};

void CmdLeakage(const LeakageArgs& a, const GlobalOptions& g) {
  const int hi = a.n1_max > 0 ? a.n1_max : a.n1;
  const TiePolicy policy = ParseTiePolicy(a.policy);
  if (g.format == "json") {
    json out = json::array();
    for (int k = a.n1; k <= hi; ++k) {
      const auto c = RunLeakageCensus(k, policy);
      const auto f = c.revealed_fraction();
      out.push_back({{"n1", k}, {"profiles", c.profiles}, {"revealed", c.revealed},
                     {"fraction", std::to_string(f.num) + "/" + std::to_string(f.den)},
                     {"uniquely_determined", c.uniquely_determined}});
    }
    std::cout << out.dump(2) << '\n';
    return;
  }
  std::cout << "n1,profiles,revealed,fraction,value,uniquely_determined\n";
  for (int k = a.n1; k <= hi; ++k) {
    const auto c = RunLeakageCensus(k, policy);
    const auto f = c.revealed_fraction();
    std::cout << k << ',' << c.profiles << ',' << c.revealed << ',' << f.num << '/' << f.den << ','
              << f.value() << ',' << c.uniquely_determined << '\n';
  }
}

// ---- bench ----

struct BenchArgs {
  int n = 24;
  int l = 8;
  size_t d = 1000;
  int steps = 5;
};

void CmdBench(const BenchArgs& a, const GlobalOptions& g) {
  std::vector<BenchPoint> points;
  size_t d = a.d;
  for (int s = 0; s < a.steps; ++s, d *= 2) {
    points.push_back(RunBench(a.n, a.l, d, g.seed, TieConfig::A1(), g.threads));
  }
  std::cout << FormatBenchTable(points);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secure majority-vote aggregation toolkit"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--seed", g.seed, "Seed for every random stream")->capture_default_str();
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"human", "csv", "json"}))
      ->capture_default_str();
  app.add_flag("-v,--verbose", g.verbosity, "Increase verbosity");
  app.add_option("--threads", g.threads, "Worker threads for subgroup evaluation")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  // Global options are also accepted after the subcommand name.
  auto add_globals = [&](CLI::App* sub) {
    sub->add_option("--seed", g.seed, "Seed for every random stream");
    sub->add_option("--format", g.format, "Output format")
        ->check(CLI::IsMember({"human", "csv", "json"}));
    sub->add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
  };

  PolyArgs poly_args;
  auto* poly = app.add_subcommand("poly", "Construct and print a majority-vote polynomial");
  poly->add_option("--n", poly_args.n, "Number of users (>= 2)")->required();
  poly->add_option("--policy", poly_args.policy, "sign(0): minus, plus or zero")
      ->check(CLI::IsMember({"minus", "plus", "zero"}))
      ->capture_default_str();
  add_globals(poly);

  PlanArgs plan_args;
  auto* plan = app.add_subcommand("plan", "Communication cost of subgroup configurations");
  plan->add_option("--n", plan_args.ns, "User count(s)");
  plan->add_flag("--all-l", plan_args.all_l, "List every admissible l, not only the optimum");
  plan->add_flag("--reference-R", plan_args.reference_R,
                 "Use R from the built-in reference table where a row exists");
  plan->add_flag("--allow-n1-2", plan_args.allow_n1_2, "Admit two-user subgroups");
  plan->add_flag("--deviations", plan_args.deviations,
                 "Report reference rows whose schedule-derived R differs");
  plan->add_option("--policy", plan_args.policy, "Intra-group sign(0) policy")
      ->check(CLI::IsMember({"minus", "plus", "zero"}))
      ->capture_default_str();
  add_globals(plan);

  RoundArgs round_args;
  auto* round = app.add_subcommand("round", "Run one secure aggregation round");
  round->add_option("--n", round_args.n, "Number of users")->required();
  round->add_option("--l", round_args.l, "Number of subgroups")->capture_default_str();
  round->add_option("--d", round_args.d, "Model dimension")->capture_default_str();
  round->add_option("--policy", round_args.policy, "Flat-round sign(0) policy")
      ->check(CLI::IsMember({"minus", "plus", "zero"}))
      ->capture_default_str();
  round->add_option("--tie", round_args.tie, "Hierarchical tie configuration: A1 or B1")
      ->check(CLI::IsMember({"A1", "B1"}));
  round->add_option("--inputs", round_args.inputs, "CSV of +-1 votes, one user per row");
  round->add_option("--trace", round_args.trace, "Write the JSON-lines transcript here");
  round->add_option("--dump-triples", round_args.dump_triples,
                    "Write the dealt Beaver triples as JSON lines");
  round->add_option("--round", round_args.round, "Round index")->capture_default_str();
  round->add_flag("--shuffle", round_args.shuffle, "Seeded random subgroup assignment");
  add_globals(round);

  SimArgs sim_args;
  auto* sim = app.add_subcommand("sim", "Simulate signSGD with majority vote");
  sim->add_option("--n", sim_args.n, "Number of users")->capture_default_str();
  sim->add_option("--l", sim_args.l, "Number of subgroups")->capture_default_str();
  sim->add_option("--d", sim_args.d, "Model dimension")->capture_default_str();
  sim->add_option("--rounds", sim_args.rounds, "Global rounds")->capture_default_str();
  sim->add_option("--eta", sim_args.eta, "Learning rate")->capture_default_str();
  sim->add_option("--sigma", sim_args.sigma, "Gradient noise std")->capture_default_str();
  sim->add_option("--spread", sim_args.spread, "Spread of per-user targets")->capture_default_str();
  sim->add_option("--tie", sim_args.tie, "A1 or B1")
      ->check(CLI::IsMember({"A1", "B1"}))
      ->capture_default_str();
  sim->add_option("--mode", sim_args.mode, "plain, secure or both")
      ->check(CLI::IsMember({"plain", "secure", "both"}))
      ->capture_default_str();
  sim->add_option("--metrics", sim_args.metrics, "Write per-round metrics CSV here");
  add_globals(sim);

  LeakageArgs leak_args;
  auto* leak = app.add_subcommand("leakage", "Exhaustive residual-leakage census");
  leak->add_option("--n1", leak_args.n1, "Subgroup size (2..20)")->capture_default_str();
  leak->add_option("--n1-max", leak_args.n1_max, "Run the census for n1..n1-max");
  leak->add_option("--policy", leak_args.policy, "Intra-group sign(0) policy")
      ->check(CLI::IsMember({"minus", "plus", "zero"}))
      ->capture_default_str();
  add_globals(leak);

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Offline/online cost of one round with doubling d");
  bench->add_option("--n", bench_args.n, "Number of users")->capture_default_str();
  bench->add_option("--l", bench_args.l, "Number of subgroups")->capture_default_str();
  bench->add_option("--d", bench_args.d, "Starting model dimension")->capture_default_str();
  bench->add_option("--steps", bench_args.steps, "Number of doublings")->capture_default_str();
  add_globals(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*poly) CmdPoly(poly_args, g);
    if (*plan) CmdPlan(plan_args, g);
    if (*round) return CmdRound(round_args, g);
    if (*sim) return CmdSim(sim_args, g);
    if (*leak) CmdLeakage(leak_args, g);
    if (*bench) CmdBench(bench_args, g);
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ProtocolError& e) {
    std::cerr << "protocol error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
