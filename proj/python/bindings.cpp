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
//
// Python bindings for the viewplan core: scenario model and generators,
// belief updates and information measures, sensing policies, brute force
// oracles, and the episode simulator.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "viewplan/belief.hpp"
#include "viewplan/errors.hpp"
#include "viewplan/model.hpp"
#include "viewplan/planner.hpp"
#include "viewplan/rng.hpp"
#include "viewplan/scenarios.hpp"
#include "viewplan/sim.hpp"

namespace py = pybind11;
using namespace viewplan;

namespace {

// Exception type objects for the payload-attaching translator below. The
// register_exception storage keeps them alive for the interpreter lifetime.
PyObject* g_infeasible_type = nullptr;
PyObject* g_validation_type = nullptr;

void translate_payload_errors(std::exception_ptr p) {
  try {
    if (p) std::rethrow_exception(p);
  } catch (const InfeasibleError& e) {
    py::object inst =
        py::reinterpret_borrow<py::object>(g_infeasible_type)(e.what());
    inst.attr("best_achievable_loss") = e.best_achievable_loss();
    PyErr_SetObject(g_infeasible_type, inst.ptr());
  } catch (const ValidationError& e) {
    py::object inst =
        py::reinterpret_borrow<py::object>(g_validation_type)(e.what());
    inst.attr("violations") = e.violations();
    PyErr_SetObject(g_validation_type, inst.ptr());
  }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Active classification as sequential hypothesis testing: Bayesian "
      "belief updates over discrete features, information-gain sensing "
      "policies, brute force optimal oracles, and an episode simulator.";
  m.attr("__version__") = "0.1.0";
  m.attr("OUTCOME_ENUM_CAP") = kOutcomeEnumCap;
  m.attr("IG_SAMPLE_COUNT") = kIgSampleCount;
  m.attr("NO_CHILD") = kNoChild;

  // Exceptions. Derived classes are registered after the base (and the
  // payload-carrying translators last) so they take precedence.
  auto& exc_error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", exc_error);
  py::register_exception<ImpossibleEvidenceError>(m, "ImpossibleEvidenceError",
                                                  exc_error);
  py::register_exception<DuplicateFeatureError>(m, "DuplicateFeatureError",
                                                exc_error);
  py::register_exception<OutcomeSpaceTooLargeError>(
      m, "OutcomeSpaceTooLargeError", exc_error);
  py::register_exception<StateSpaceTooLargeError>(m, "StateSpaceTooLargeError",
                                                  exc_error);
  py::register_exception<NotNoiselessError>(m, "NotNoiselessError", exc_error);
  auto& exc_validation =
      py::register_exception<ValidationError>(m, "ValidationError", exc_error);
  auto& exc_infeasible =
      py::register_exception<InfeasibleError>(m, "InfeasibleError", exc_error);
  g_validation_type = exc_validation.ptr();
  g_infeasible_type = exc_infeasible.ptr();
  // Registered last so it runs first: attaches the structured payloads
  // (violations / best_achievable_loss) before the plain-message fallbacks.
  py::register_exception_translator(&translate_payload_errors);

  // Model --------------------------------------------------------------------
  py::class_<Feature>(m, "Feature")
      .def(py::init<>())
      .def_readwrite("name", &Feature::name)
      .def_readwrite("values", &Feature::values)
      .def_readwrite("cpt", &Feature::cpt)
      .def_property_readonly("n_values", &Feature::n_values);

  py::class_<Location>(m, "Location")
      .def(py::init<>())
      .def_readwrite("name", &Location::name)
      .def_readwrite("features", &Location::features)
      .def_readwrite("coords", &Location::coords);

  py::class_<Scenario>(m, "Scenario")
      .def(py::init<>())
      .def_readwrite("hypotheses", &Scenario::hypotheses)
      .def_readwrite("prior", &Scenario::prior)
      .def_readwrite("features", &Scenario::features)
      .def_readwrite("locations", &Scenario::locations)
      .def_readwrite("travel_cost", &Scenario::travel_cost)
      .def_readwrite("loss", &Scenario::loss)
      .def_readwrite("tau", &Scenario::tau)
      .def_property_readonly("n_hypotheses", &Scenario::n_hypotheses)
      .def_property_readonly("n_features", &Scenario::n_features)
      .def_property_readonly("n_locations", &Scenario::n_locations)
      .def("visit_cost", &Scenario::visit_cost, py::arg("target"),
           py::arg("from_location"),
           "Cost of observing `target` while sitting at `from_location`.");

  m.def("validate", &validate, py::arg("scenario"),
        "One message per violated structural rule; empty means valid.");
  m.def("validate_or_throw", &validate_or_throw, py::arg("scenario"));
  m.def("is_noiseless", &is_noiseless, py::arg("scenario"));
  m.def("load_scenario", &load_scenario, py::arg("path"));
  m.def("save_scenario", &save_scenario, py::arg("scenario"), py::arg("path"));
  m.def("scenario_from_json_text", &scenario_from_json_text, py::arg("text"));
  m.def("scenario_to_json_text", &scenario_to_json_text, py::arg("scenario"));

  // Belief -------------------------------------------------------------------
  py::class_<Observation>(m, "Observation")
      .def(py::init([](std::size_t feature, std::size_t value) {
             return Observation{feature, value};
           }),
           py::arg("feature"), py::arg("value"))
      .def_readwrite("feature", &Observation::feature)
      .def_readwrite("value", &Observation::value)
      .def("__eq__",
           [](const Observation& a, const Observation& b) { return a == b; })
      .def("__repr__", [](const Observation& o) {
        return "Observation(feature=" + std::to_string(o.feature) +
               ", value=" + std::to_string(o.value) + ")";
      });

  py::class_<Belief>(m, "Belief")
      .def(py::init<>())
      .def_readwrite("probs", &Belief::probs)
      .def_readwrite("history", &Belief::history)
      .def("has_feature", &Belief::has_feature, py::arg("feature"));

  py::class_<IgOptions>(m, "IgOptions")
      .def(py::init<>())
      .def_readwrite("outcome_enum_cap", &IgOptions::outcome_enum_cap)
      .def_readwrite("sample_count", &IgOptions::sample_count)
      .def_readwrite("allow_sampling", &IgOptions::allow_sampling);

  m.def("make_prior_belief", &make_prior_belief, py::arg("scenario"));
  m.def(
      "update",
      [](const Scenario& s, const Belief& b,
         const std::vector<Observation>& obs, bool allow_refresh) {
        return update(s, b, obs, allow_refresh);
      },
      py::arg("scenario"), py::arg("belief"), py::arg("observations"),
      py::arg("allow_refresh") = false,
      "Recursive Bayes update with a batch of observations.");
  m.def("entropy_bits",
        [](const Belief& b) { return entropy_bits(b); }, py::arg("belief"));
  m.def("entropy_bits",
        [](const std::vector<double>& p) {
          return entropy_bits(std::span<const double>(p));
        },
        py::arg("probs"));
  m.def(
      "expected_information_gain",
      [](const Scenario& s, const Belief& b, std::size_t location,
         const IgOptions& options) {
        return expected_information_gain(s, b, location, options);
      },
      py::arg("scenario"), py::arg("belief"), py::arg("location"),
      py::arg("options") = IgOptions{});
  m.def(
      "expected_information_gain_set",
      [](const Scenario& s, const Belief& b,
         const std::vector<std::size_t>& locations, const IgOptions& options) {
        return expected_information_gain_set(s, b, locations, options);
      },
      py::arg("scenario"), py::arg("belief"), py::arg("locations"),
      py::arg("options") = IgOptions{});
  m.def("bayes_risk", &bayes_risk, py::arg("scenario"), py::arg("belief"));
  m.def("map_decision", &map_decision, py::arg("scenario"), py::arg("belief"));
  m.def(
      "version_space_count",
      [](const Scenario& s, const std::vector<Observation>& history) {
        return version_space_count(s, history);
      },
      py::arg("scenario"), py::arg("history"));

  // Planner ------------------------------------------------------------------
  py::enum_<PolicyAction::Kind>(m, "ActionKind")
      .value("VISIT", PolicyAction::Kind::kVisit)
      .value("STOP", PolicyAction::Kind::kStop);

  py::class_<PolicyAction>(m, "PolicyAction")
      .def_static("visit", &PolicyAction::Visit, py::arg("location"))
      .def_static("stop", &PolicyAction::Stop, py::arg("decision"))
      .def_readonly("kind", &PolicyAction::kind)
      .def_readonly("index", &PolicyAction::index)
      .def("is_visit", &PolicyAction::is_visit)
      .def("is_stop", &PolicyAction::is_stop)
      .def("__eq__",
           [](const PolicyAction& a, const PolicyAction& b) { return a == b; })
      .def("__repr__", [](const PolicyAction& a) {
        return std::string(a.is_visit() ? "PolicyAction.visit("
                                        : "PolicyAction.stop(") +
               std::to_string(a.index) + ")";
      });

  py::enum_<HorizonObjective>(m, "HorizonObjective")
      .value("EXPECTED_ENTROPY", HorizonObjective::kExpectedEntropy)
      .value("EXPECTED_RISK", HorizonObjective::kExpectedRisk);

  py::class_<PlannerConfig>(m, "PlannerConfig")
      .def(py::init<>())
      .def_readwrite("tau", &PlannerConfig::tau)
      .def_readwrite("horizon", &PlannerConfig::horizon)
      .def_readwrite("allow_revisit", &PlannerConfig::allow_revisit)
      .def_readwrite("outcome_enum_cap", &PlannerConfig::outcome_enum_cap)
      .def_readwrite("sample_count", &PlannerConfig::sample_count)
      .def_readwrite("allow_sampling", &PlannerConfig::allow_sampling)
      .def_readwrite("horizon_objective", &PlannerConfig::horizon_objective)
      .def_readwrite("horizon_work_budget",
                     &PlannerConfig::horizon_work_budget)
      .def_readwrite("max_oracle_states", &PlannerConfig::max_oracle_states)
      .def_readwrite("max_nonadaptive_work",
                     &PlannerConfig::max_nonadaptive_work);

  py::class_<PolicyTree::Node>(m, "PolicyTreeNode")
      .def_readonly("is_leaf", &PolicyTree::Node::is_leaf)
      .def_readonly("decision", &PolicyTree::Node::decision)
      .def_readonly("location", &PolicyTree::Node::location)
      .def_readonly("new_features", &PolicyTree::Node::new_features)
      .def_readonly("children", &PolicyTree::Node::children)
      .def_readonly("expected_cost", &PolicyTree::Node::expected_cost)
      .def_readonly("expected_loss", &PolicyTree::Node::expected_loss);

  py::class_<PolicyTree>(m, "PolicyTree")
      .def_readonly("nodes", &PolicyTree::nodes)
      .def_readonly("root", &PolicyTree::root)
      .def("empty", &PolicyTree::empty)
      .def("expected_cost", &PolicyTree::expected_cost)
      .def("expected_loss", &PolicyTree::expected_loss);

  py::class_<NonAdaptivePlan>(m, "NonAdaptivePlan")
      .def_readonly("order", &NonAdaptivePlan::order)
      .def_readonly("expected_cost", &NonAdaptivePlan::expected_cost)
      .def_readonly("expected_loss", &NonAdaptivePlan::expected_loss);

  py::class_<PolicyEvaluation>(m, "PolicyEvaluation")
      .def_readonly("expected_cost", &PolicyEvaluation::expected_cost)
      .def_readonly("expected_loss", &PolicyEvaluation::expected_loss);

  py::class_<Policy>(m, "Policy")
      .def_property_readonly("name", &Policy::name)
      .def(
          "step",
          [](const Policy& self, const Scenario& s, const Belief& b,
             std::size_t current, const std::vector<bool>& visited,
             std::uint64_t seed) {
            Rng rng(seed);
            return self.step(s, b, current, visited, rng);
          },
          py::arg("scenario"), py::arg("belief"), py::arg("current"),
          py::arg("visited"), py::arg("seed") = 0,
          "One policy decision; `seed` only matters for randomized policies.");

  m.def("make_policy", &make_policy, py::arg("name"), py::arg("scenario"),
        py::arg("config"),
        "Builds 'adaptive-ig', 'nonadaptive-ig', 'cost-ig', 'horizon:<T>' or "
        "'random'.");
  m.def(
      "adaptive_greedy_step",
      [](const Scenario& s, const Belief& b, std::size_t current,
         const std::vector<bool>& visited, const PlannerConfig& c) {
        return adaptive_greedy_step(s, b, current, visited, c);
      },
      py::arg("scenario"), py::arg("belief"), py::arg("current"),
      py::arg("visited"), py::arg("config"));
  m.def(
      "cost_weighted_greedy_step",
      [](const Scenario& s, const Belief& b, std::size_t current,
         const std::vector<bool>& visited, const PlannerConfig& c) {
        return cost_weighted_greedy_step(s, b, current, visited, c);
      },
      py::arg("scenario"), py::arg("belief"), py::arg("current"),
      py::arg("visited"), py::arg("config"));
  m.def(
      "receding_horizon_step",
      [](const Scenario& s, const Belief& b, std::size_t current,
         const std::vector<bool>& visited, std::size_t horizon,
         const PlannerConfig& c) {
        return receding_horizon_step(s, b, current, visited, horizon, c);
      },
      py::arg("scenario"), py::arg("belief"), py::arg("current"),
      py::arg("visited"), py::arg("horizon"), py::arg("config"));
  m.def("nonadaptive_greedy_order", &nonadaptive_greedy_order,
        py::arg("scenario"), py::arg("budget_steps"), py::arg("config"));
  m.def("brute_force_optimal", &brute_force_optimal, py::arg("scenario"),
        py::arg("tau"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>(),
        "Optimal adaptive policy tree (exhaustive search with memoization).");
  m.def("brute_force_optimal_nonadaptive", &brute_force_optimal_nonadaptive,
        py::arg("scenario"), py::arg("tau"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>(),
        "Optimal fixed observation order (exhaustive search).");
  m.def(
      "evaluate_policy_exact",
      [](const Scenario& s, const PolicyTree& tree) {
        return evaluate_policy_exact(s, tree);
      },
      py::arg("scenario"), py::arg("tree"),
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "evaluate_policy_exact",
      [](const Scenario& s, const Policy& p, std::size_t max_steps,
         const PlannerConfig& c) {
        return evaluate_policy_exact(s, p, max_steps, c);
      },
      py::arg("scenario"), py::arg("policy"), py::arg("max_steps"),
      py::arg("config"), py::call_guard<py::gil_scoped_release>());

  // Scenario generators --------------------------------------------------------
  py::class_<RandomInstanceOptions>(m, "RandomInstanceOptions")
      .def(py::init<>())
      .def_readwrite("n_values", &RandomInstanceOptions::n_values)
      .def_readwrite("unit_cost", &RandomInstanceOptions::unit_cost)
      .def_readwrite("random_prior", &RandomInstanceOptions::random_prior)
      .def_readwrite("ensure_separable",
                     &RandomInstanceOptions::ensure_separable)
      .def_readwrite("tau", &RandomInstanceOptions::tau);

  py::class_<CorrespondenceProfile>(m, "CorrespondenceProfile")
      .def(py::init<>())
      .def_readwrite("name", &CorrespondenceProfile::name)
      .def_readwrite("mean_counts", &CorrespondenceProfile::mean_counts)
      .def_readwrite("sigma", &CorrespondenceProfile::sigma)
      .def_property_readonly("n_views", &CorrespondenceProfile::n_views);

  m.def("make_theorem1_instance", &make_theorem1_instance, py::arg("n"),
        py::arg("unit_cost") = 1.0,
        "Halving family: adaptive log2(n) observations vs n-1 fixed.");
  m.def("make_random_instance", &make_random_instance, py::arg("n_hypotheses"),
        py::arg("n_features"), py::arg("n_locations"), py::arg("noise"),
        py::arg("seed"), py::arg("options") = RandomInstanceOptions{});
  m.def("default_correspondence_profile", &default_correspondence_profile,
        py::arg("n_classes"), py::arg("n_views"), py::arg("seed"));
  m.def("load_correspondence_profile", &load_correspondence_profile,
        py::arg("path"));
  m.def("make_polyhedra_like_instance",
        py::overload_cast<std::size_t, std::size_t,
                          const CorrespondenceProfile&, std::uint64_t>(
            &make_polyhedra_like_instance),
        py::arg("n_classes"), py::arg("n_views"), py::arg("profile"),
        py::arg("seed"));
  m.def("make_polyhedra_like_instance",
        py::overload_cast<std::size_t, std::size_t, std::uint64_t>(
            &make_polyhedra_like_instance),
        py::arg("n_classes") = 5, py::arg("n_views") = 24, py::arg("seed") = 1);
  m.def("interpolate_informativeness", &interpolate_informativeness,
        py::arg("points"), py::arg("values"), py::arg("query"),
        py::arg("length_scale"));

  // Simulation -----------------------------------------------------------------
  py::class_<StepRecord>(m, "StepRecord")
      .def_readonly("location", &StepRecord::location)
      .def_readonly("observations", &StepRecord::observations)
      .def_readonly("entropy_bits", &StepRecord::entropy_bits)
      .def_readonly("cumulative_cost", &StepRecord::cumulative_cost)
      .def_readonly("map_decision", &StepRecord::map_decision);

  py::class_<EpisodeRecord>(m, "EpisodeRecord")
      .def_readonly("scenario_id", &EpisodeRecord::scenario_id)
      .def_readonly("policy", &EpisodeRecord::policy)
      .def_readonly("seed", &EpisodeRecord::seed)
      .def_readonly("true_hypothesis", &EpisodeRecord::true_hypothesis)
      .def_readonly("steps", &EpisodeRecord::steps)
      .def_readonly("decision", &EpisodeRecord::decision)
      .def_readonly("loss", &EpisodeRecord::loss)
      .def_readonly("correct", &EpisodeRecord::correct)
      .def_readonly("final_entropy_bits", &EpisodeRecord::final_entropy_bits)
      .def_readonly("total_cost", &EpisodeRecord::total_cost);

  py::class_<RunSummary>(m, "RunSummary")
      .def_readonly("policy", &RunSummary::policy)
      .def_readonly("episodes", &RunSummary::episodes)
      .def_readonly("mean_cost", &RunSummary::mean_cost)
      .def_readonly("stddev_cost", &RunSummary::stddev_cost)
      .def_readonly("mean_loss", &RunSummary::mean_loss)
      .def_readonly("stddev_loss", &RunSummary::stddev_loss)
      .def_readonly("accuracy", &RunSummary::accuracy)
      .def_readonly("mean_steps", &RunSummary::mean_steps)
      .def_readonly("mean_final_entropy_bits",
                    &RunSummary::mean_final_entropy_bits)
      .def_readonly("ig_curve", &RunSummary::ig_curve)
      .def_readonly("accuracy_curve", &RunSummary::accuracy_curve);

  py::class_<ComparisonRow>(m, "ComparisonRow")
      .def_readonly("budget", &ComparisonRow::budget)
      .def_readonly("accuracy", &ComparisonRow::accuracy)
      .def_readonly("metric_mean", &ComparisonRow::metric_mean)
      .def_readonly("metric_std", &ComparisonRow::metric_std)
      .def_readonly("ig_risk_agreement", &ComparisonRow::ig_risk_agreement);

  py::class_<ComparisonTable>(m, "ComparisonTable")
      .def_readonly("policies", &ComparisonTable::policies)
      .def_readonly("rows", &ComparisonTable::rows);

  m.def("run_episode", &run_episode, py::arg("scenario"), py::arg("policy"),
        py::arg("seed"), py::arg("max_steps"), py::arg("config"),
        py::arg("forced_hypothesis") = std::optional<std::size_t>{},
        py::arg("scenario_id") = std::string{},
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "monte_carlo",
      [](const Scenario& s, const Policy& p, std::size_t episodes,
         std::uint64_t base_seed, std::size_t max_steps,
         const PlannerConfig& c, const std::string& scenario_id) {
        return monte_carlo(s, p, episodes, base_seed, max_steps, c,
                           scenario_id);
      },
      py::arg("scenario"), py::arg("policy"), py::arg("episodes"),
      py::arg("base_seed"), py::arg("max_steps"), py::arg("config"),
      py::arg("scenario_id") = std::string{},
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "monte_carlo_records",
      [](const Scenario& s, const Policy& p, std::size_t episodes,
         std::uint64_t base_seed, std::size_t max_steps,
         const PlannerConfig& c, const std::string& scenario_id) {
        std::vector<EpisodeRecord> records;
        RunSummary summary =
            monte_carlo(s, p, episodes, base_seed, max_steps, c, scenario_id,
                        &records);
        return std::make_pair(std::move(summary), std::move(records));
      },
      py::arg("scenario"), py::arg("policy"), py::arg("episodes"),
      py::arg("base_seed"), py::arg("max_steps"), py::arg("config"),
      py::arg("scenario_id") = std::string{},
      py::call_guard<py::gil_scoped_release>(),
      "Like monte_carlo but also returns the per-episode records.");
  m.def("compare_policies", &compare_policies, py::arg("scenario"),
        py::arg("policies"), py::arg("episodes"), py::arg("base_seed"),
        py::arg("budgets"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>(),
        "Paired-world comparison table, one row per budget.");
}
