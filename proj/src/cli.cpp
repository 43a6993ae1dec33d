// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "viewplan/cli.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "viewplan/belief.hpp"
#include "viewplan/errors.hpp"
#include "viewplan/model.hpp"
#include "viewplan/planner.hpp"
#include "viewplan/scenarios.hpp"
#include "viewplan/sim.hpp"

namespace viewplan {
namespace {

// Shortest round-trip decimal representation; keeps CSV output byte-stable.
std::string FormatDouble(double value) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, result.ptr);
}

void WriteFileOrThrow(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open file for writing: " + path);
  out << content;
  if (!out) throw Error("failed writing: " + path);
}

// --- generate ----------------------------------------------------------------

struct GenerateOptions {
  std::string type;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  // theorem1
  std::size_t n = 8;
  double unit_cost = 1.0;
  // random
  std::size_t hypotheses = 4;
  std::size_t features = 4;
  std::size_t locations = 4;
  double alpha = 0.1;
  std::size_t values = 2;
  bool unit_costs = false;
  bool random_prior = false;
  bool separable = false;
  double tau = 0.0;
  // polyhedra
  std::size_t classes = 5;
  std::size_t views = 24;
  std::string profile_path;
};

int CmdGenerate(const GenerateOptions& opt, std::ostream& out) {
  Scenario s;
  if (opt.type == "theorem1") {
    s = make_theorem1_instance(opt.n, opt.unit_cost);
  } else if (opt.type == "random") {
    if (!opt.seed)
      throw std::invalid_argument("--seed is required for --type random");
    RandomInstanceOptions ro;
    ro.n_values = opt.values;
    ro.unit_cost = opt.unit_costs;
    ro.random_prior = opt.random_prior;
    ro.ensure_separable = opt.separable;
    ro.tau = opt.tau;
    s = make_random_instance(opt.hypotheses, opt.features, opt.locations,
                             opt.alpha, *opt.seed, ro);
  } else if (opt.type == "polyhedra") {
    if (!opt.seed)
      throw std::invalid_argument("--seed is required for --type polyhedra");
    if (!opt.profile_path.empty()) {
      const CorrespondenceProfile profile =
          load_correspondence_profile(opt.profile_path);
      s = make_polyhedra_like_instance(opt.classes, opt.views, profile,
                                       *opt.seed);
    } else {
      s = make_polyhedra_like_instance(opt.classes, opt.views, *opt.seed);
    }
  } else {
    throw std::invalid_argument(
        "unknown --type \"" + opt.type + "\"; allowed: theorem1, random, "
        "polyhedra");
  }
  save_scenario(s, opt.out_path);
  out << "wrote " << opt.out_path << ": hypotheses=" << s.n_hypotheses()
      << " features=" << s.n_features() << " locations=" << s.n_locations()
      << " noiseless=" << (is_noiseless(s) ? "true" : "false") << "\n";
  return kExitOk;
}

// --- check -------------------------------------------------------------------

int CmdCheck(const std::string& scenario_path, std::ostream& out) {
  std::ifstream in(scenario_path);
  if (!in) {
    out << "cannot open scenario file: " << scenario_path << "\n";
    return kExitBadInput;
  }
  std::ostringstream buf;
  buf << in.rdbuf();

  // Parse without the validation throw so every violation can be listed.
  Scenario s;
  try {
    s = scenario_from_json_text(buf.str());
  } catch (const ValidationError& e) {
    out << "invalid scenario (" << e.violations().size() << " violations):\n";
    for (const std::string& v : e.violations()) out << "  - " << v << "\n";
    return kExitBadInput;
  } catch (const ParseError& e) {
    out << e.what() << "\n";
    return kExitBadInput;
  }
  out << "ok: hypotheses=" << s.n_hypotheses() << " features="
      << s.n_features() << " locations=" << s.n_locations()
      << " noiseless=" << (is_noiseless(s) ? "true" : "false") << "\n";
  return kExitOk;
}

// --- simulate ----------------------------------------------------------------

struct SimulateOptions {
  std::string scenario_path;
  std::string policy = "adaptive-ig";
  std::size_t runs = 100;
  std::uint64_t seed = 0;
  std::optional<double> tau;
  std::optional<std::size_t> budget;
  std::string out_path;
  bool allow_revisit = false;
};

std::string ResultsCsv(const Scenario& s,
                       const std::vector<EpisodeRecord>& records) {
  std::string csv =
      "run_id,policy,true_hypothesis,steps,cost,decision,loss,correct,"
      "final_entropy_bits\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const EpisodeRecord& r = records[i];
    csv += std::to_string(i);
    csv += ',';
    csv += r.policy;
    csv += ',';
    csv += s.hypotheses[r.true_hypothesis];
    csv += ',';
    csv += std::to_string(r.steps.size());
    csv += ',';
    csv += FormatDouble(r.total_cost);
    csv += ',';
    csv += s.hypotheses[r.decision];
    csv += ',';
    csv += FormatDouble(r.loss);
    csv += ',';
    csv += r.correct ? '1' : '0';
    csv += ',';
    csv += FormatDouble(r.final_entropy_bits);
    csv += '\n';
  }
  return csv;
}

int CmdSimulate(const SimulateOptions& opt, std::ostream& out) {
  const Scenario s = load_scenario(opt.scenario_path);
  PlannerConfig config;
  config.tau = opt.tau.value_or(s.tau);
  config.allow_revisit = opt.allow_revisit;
  const std::size_t max_steps = opt.budget.value_or(s.n_locations());
  const std::unique_ptr<Policy> policy = make_policy(opt.policy, s, config);

  std::vector<EpisodeRecord> records;
  const RunSummary summary =
      monte_carlo(s, *policy, opt.runs, opt.seed, max_steps, config,
                  opt.scenario_path, &records);
  const std::string csv = ResultsCsv(s, records);
  if (opt.out_path.empty()) {
    out << csv;
  } else {
    WriteFileOrThrow(opt.out_path, csv);
    out << "policy " << summary.policy << ": runs=" << summary.episodes
        << " mean_cost=" << FormatDouble(summary.mean_cost)
        << " stddev_cost=" << FormatDouble(summary.stddev_cost)
        << " mean_loss=" << FormatDouble(summary.mean_loss)
        << " accuracy=" << FormatDouble(summary.accuracy)
        << " mean_steps=" << FormatDouble(summary.mean_steps) << "\n"
        << "wrote " << opt.out_path << "\n";
  }
  return kExitOk;
}

// --- oracle ------------------------------------------------------------------

struct OracleOptions {
  std::string scenario_path;
  std::string mode = "adaptive";
  std::optional<double> tau;
  bool json = false;
};

std::string OutcomeLabel(const Scenario& s,
                         const std::vector<std::size_t>& features,
                         std::size_t rank) {
  // Decode the mixed-radix rank (first feature most significant).
  std::vector<std::size_t> digits(features.size(), 0);
  for (std::size_t i = features.size(); i-- > 0;) {
    digits[i] = rank % s.features[features[i]].n_values();
    rank /= s.features[features[i]].n_values();
  }
  std::string label;
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (i > 0) label += ' ';
    label += s.features[features[i]].name;
    label += '=';
    label += s.features[features[i]].values[digits[i]];
  }
  return label;
}

void PrintTree(const Scenario& s, const PolicyTree& tree, std::size_t node_idx,
               std::size_t indent, std::ostream& out) {
  const PolicyTree::Node& node = tree.nodes[node_idx];
  const std::string pad(indent * 2, ' ');
  if (node.is_leaf) {
    out << pad << "stop: declare " << s.hypotheses[node.decision]
        << " (expected_loss " << FormatDouble(node.expected_loss) << ")\n";
    return;
  }
  out << pad << "visit " << s.locations[node.location].name
      << " (expected_cost " << FormatDouble(node.expected_cost)
      << ", expected_loss " << FormatDouble(node.expected_loss) << ")\n";
  for (std::size_t rank = 0; rank < node.children.size(); ++rank) {
    if (node.children[rank] == kNoChild) continue;
    out << pad << "  [" << OutcomeLabel(s, node.new_features, rank) << "]\n";
    PrintTree(s, tree, node.children[rank], indent + 2, out);
  }
}

nlohmann::ordered_json TreeJson(const Scenario& s, const PolicyTree& tree,
                                std::size_t node_idx) {
  const PolicyTree::Node& node = tree.nodes[node_idx];
  nlohmann::ordered_json j;
  j["expected_cost"] = node.expected_cost;
  j["expected_loss"] = node.expected_loss;
  if (node.is_leaf) {
    j["stop"] = s.hypotheses[node.decision];
    return j;
  }
  j["visit"] = s.locations[node.location].name;
  j["children"] = nlohmann::ordered_json::object();
  for (std::size_t rank = 0; rank < node.children.size(); ++rank) {
    if (node.children[rank] == kNoChild) continue;
    j["children"][OutcomeLabel(s, node.new_features, rank)] =
        TreeJson(s, tree, node.children[rank]);
  }
  return j;
}

int CmdOracle(const OracleOptions& opt, std::ostream& out) {
  const Scenario s = load_scenario(opt.scenario_path);
  const double tau = opt.tau.value_or(s.tau);
  PlannerConfig config;
  config.tau = tau;

  if (opt.mode == "adaptive") {
    const PolicyTree tree = brute_force_optimal(s, tau, config);
    if (opt.json) {
      nlohmann::ordered_json j;
      j["mode"] = "adaptive";
      j["tau"] = tau;
      j["expected_cost"] = tree.expected_cost();
      j["expected_loss"] = tree.expected_loss();
      j["tree"] = TreeJson(s, tree, tree.root);
      out << j.dump(2) << "\n";
    } else {
      out << "mode adaptive\n"
          << "expected_cost " << FormatDouble(tree.expected_cost()) << "\n"
          << "expected_loss " << FormatDouble(tree.expected_loss()) << "\n";
      PrintTree(s, tree, tree.root, 0, out);
    }
    return kExitOk;
  }
  if (opt.mode == "nonadaptive") {
    const NonAdaptivePlan plan = brute_force_optimal_nonadaptive(s, tau, config);
    if (opt.json) {
      nlohmann::ordered_json j;
      j["mode"] = "nonadaptive";
      j["tau"] = tau;
      j["expected_cost"] = plan.expected_cost;
      j["expected_loss"] = plan.expected_loss;
      j["order"] = nlohmann::ordered_json::array();
      for (std::size_t l : plan.order) j["order"].push_back(s.locations[l].name);
      out << j.dump(2) << "\n";
    } else {
      out << "mode nonadaptive\n"
          << "expected_cost " << FormatDouble(plan.expected_cost) << "\n"
          << "expected_loss " << FormatDouble(plan.expected_loss) << "\n"
          << "order";
      if (plan.order.empty()) out << " (empty)";
      for (std::size_t l : plan.order) out << " " << s.locations[l].name;
      out << "\n";
    }
    return kExitOk;
  }
  throw std::invalid_argument("unknown --mode \"" + opt.mode +
                              "\"; allowed: adaptive, nonadaptive");
}

// --- compare -----------------------------------------------------------------

struct CompareOptions {
  std::string scenario_path;
  std::vector<std::string> policies;
  std::size_t runs = 100;
  std::uint64_t seed = 0;
  std::string out_path;
};

std::string ComparisonCsv(const ComparisonTable& table) {
  std::string csv = "budget";
  for (const std::string& name : table.policies) {
    csv += ',';
    csv += name + "_accuracy," + name + "_metric_mean," + name + "_metric_std";
  }
  csv += ",ig_risk_agreement\n";
  for (const ComparisonRow& row : table.rows) {
    csv += std::to_string(row.budget);
    for (std::size_t p = 0; p < table.policies.size(); ++p) {
      csv += ',';
      csv += FormatDouble(row.accuracy[p]);
      csv += ',';
      csv += FormatDouble(row.metric_mean[p]);
      csv += ',';
      csv += FormatDouble(row.metric_std[p]);
    }
    csv += ',';
    csv += FormatDouble(row.ig_risk_agreement);
    csv += '\n';
  }
  return csv;
}

int CmdCompare(const CompareOptions& opt, std::ostream& out) {
  if (opt.policies.size() < 2)
    throw std::invalid_argument("compare needs at least two --policies");
  const Scenario s = load_scenario(opt.scenario_path);
  // Budget truncation replaces the stopping rule for comparisons.
  PlannerConfig config;
  config.tau = 0.0;

  std::vector<std::unique_ptr<Policy>> owned;
  std::vector<const Policy*> policies;
  for (const std::string& name : opt.policies) {
    owned.push_back(make_policy(name, s, config));
    policies.push_back(owned.back().get());
  }
  std::vector<std::size_t> budgets(s.n_locations());
  for (std::size_t b = 0; b < budgets.size(); ++b) budgets[b] = b + 1;

  const ComparisonTable table =
      compare_policies(s, policies, opt.runs, opt.seed, budgets, config);
  const std::string csv = ComparisonCsv(table);
  if (opt.out_path.empty()) {
    out << csv;
  } else {
    WriteFileOrThrow(opt.out_path, csv);
    out << "wrote " << opt.out_path << " (" << table.rows.size()
        << " budgets x " << table.policies.size() << " policies)\n";
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{
      "viewplan: sequential view selection for object classification — "
      "scenario generation, belief-driven policies, brute force oracles and "
      "Monte Carlo comparison"};
  app.require_subcommand(1);

  GenerateOptions gen;
  CLI::App* generate =
      app.add_subcommand("generate", "Write a generated scenario file");
  generate->add_option("--type", gen.type, "theorem1 | random | polyhedra")
      ->required();
  generate->add_option("--out", gen.out_path, "output scenario path")
      ->required();
  std::uint64_t gen_seed = 0;
  CLI::Option* gen_seed_opt =
      generate->add_option("--seed", gen_seed, "generator seed");
  generate->add_option("--n", gen.n, "theorem1: hypothesis count (power of 2)");
  generate->add_option("--unit-cost", gen.unit_cost,
                       "theorem1: cost of every observation");
  generate->add_option("--hypotheses", gen.hypotheses, "random: hypotheses");
  generate->add_option("--features", gen.features, "random: features");
  generate->add_option("--locations", gen.locations, "random: locations");
  generate->add_option("--alpha", gen.alpha, "random: noise level in [0,0.5]");
  generate->add_option("--values", gen.values, "random: values per feature");
  generate->add_flag("--unit-costs", gen.unit_costs,
                     "random: unit travel costs");
  generate->add_flag("--random-prior", gen.random_prior,
                     "random: non-uniform prior");
  generate->add_flag("--separable", gen.separable,
                     "random: distinct clean signatures per hypothesis");
  generate->add_option("--tau", gen.tau, "random: stopping threshold");
  generate->add_option("--classes", gen.classes, "polyhedra: class count");
  generate->add_option("--views", gen.views, "polyhedra: view count");
  generate->add_option("--profile", gen.profile_path,
                       "polyhedra: correspondence profile json");

  std::string check_path;
  CLI::App* check = app.add_subcommand("check", "Validate a scenario file");
  check->add_option("--scenario", check_path, "scenario path")->required();

  SimulateOptions sim;
  double sim_tau = 0.0;
  std::size_t sim_budget = 0;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Run Monte Carlo episodes, emit CSV");
  simulate->add_option("--scenario", sim.scenario_path, "scenario path")
      ->required();
  simulate->add_option("--policy", sim.policy,
                       "adaptive-ig | nonadaptive-ig | cost-ig | horizon:<T> "
                       "| random");
  simulate->add_option("--runs", sim.runs, "episode count");
  simulate->add_option("--seed", sim.seed, "base seed (required)")->required();
  CLI::Option* sim_tau_opt =
      simulate->add_option("--tau", sim_tau, "stopping threshold override");
  CLI::Option* sim_budget_opt = simulate->add_option(
      "--budget", sim_budget, "max observations per episode (default M)");
  simulate->add_option("--out", sim.out_path, "CSV path (default: stdout)");
  simulate->add_flag("--allow-revisit", sim.allow_revisit,
                     "repeat visits re-observe features");

  OracleOptions oracle;
  double oracle_tau = 0.0;
  CLI::App* oracle_cmd = app.add_subcommand(
      "oracle", "Exact optimal policy by exhaustive search (small instances)");
  oracle_cmd->add_option("--scenario", oracle.scenario_path, "scenario path")
      ->required();
  oracle_cmd->add_option("--mode", oracle.mode, "adaptive | nonadaptive");
  CLI::Option* oracle_tau_opt = oracle_cmd->add_option(
      "--tau", oracle_tau, "expected loss threshold override");
  oracle_cmd->add_flag("--json", oracle.json, "machine readable output");

  CompareOptions cmp;
  std::string cmp_policies;
  CLI::App* compare = app.add_subcommand(
      "compare", "Paired-world policy comparison across budgets, emit CSV");
  compare->add_option("--scenario", cmp.scenario_path, "scenario path")
      ->required();
  compare->add_option("--policies", cmp_policies,
                      "comma separated policy names (at least two)")
      ->required();
  compare->add_option("--runs", cmp.runs, "paired episode count");
  compare->add_option("--seed", cmp.seed, "base seed (required)")->required();
  compare->add_option("--out", cmp.out_path, "CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitBadInput;
  }

  try {
    if (generate->parsed()) {
      if (gen_seed_opt->count() > 0) gen.seed = gen_seed;
      return CmdGenerate(gen, out);
    }
    if (check->parsed()) return CmdCheck(check_path, out);
    if (simulate->parsed()) {
      if (sim_tau_opt->count() > 0) sim.tau = sim_tau;
      if (sim_budget_opt->count() > 0) sim.budget = sim_budget;
      return CmdSimulate(sim, out);
    }
    if (oracle_cmd->parsed()) {
      if (oracle_tau_opt->count() > 0) oracle.tau = oracle_tau;
      return CmdOracle(oracle, out);
    }
    if (compare->parsed()) {
      std::stringstream names(cmp_policies);
      std::string name;
      while (std::getline(names, name, ','))
        if (!name.empty()) cmp.policies.push_back(name);
      return CmdCompare(cmp, out);
    }
  } catch (const StateSpaceTooLargeError& e) {
    err << e.what() << "\n";
    return kExitResourceLimit;
  } catch (const OutcomeSpaceTooLargeError& e) {
    err << e.what() << "\n";
    return kExitResourceLimit;
  } catch (const InfeasibleError& e) {
    err << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitBadInput;
  }
  err << "no subcommand given\n";
  return kExitBadInput;
}

}  // namespace viewplan
