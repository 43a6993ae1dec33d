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
// Sensing policies: greedy information gain steps (plain, cost weighted,
// receding horizon), a fixed-order information gain policy, a random
// baseline, and brute force optimal oracles (adaptive policy trees and
// non-adaptive orders) for small instances.

#ifndef VIEWPLAN_PLANNER_HPP_
#define VIEWPLAN_PLANNER_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "viewplan/belief.hpp"
#include "viewplan/model.hpp"
#include "viewplan/rng.hpp"

namespace viewplan {

inline constexpr std::size_t kNoChild = std::numeric_limits<std::size_t>::max();

// Either "observe location `index` next" or "stop and declare hypothesis
// `index`".
struct PolicyAction {
  enum class Kind { kVisit, kStop };

  Kind kind = Kind::kStop;
  std::size_t index = 0;

  static PolicyAction Visit(std::size_t location) {
    return {Kind::kVisit, location};
  }
  static PolicyAction Stop(std::size_t decision) {
    return {Kind::kStop, decision};
  }
  bool is_visit() const { return kind == Kind::kVisit; }
  bool is_stop() const { return kind == Kind::kStop; }

  friend bool operator==(const PolicyAction&, const PolicyAction&) = default;
};

// An explicit adaptive sensing plan. Internal nodes visit a location and
// branch on the joint outcome of the features that are newly revealed there;
// leaves stop and declare. Children are indexed by mixed-radix outcome rank
// (first listed feature most significant); entries equal to kNoChild mark
// outcomes with zero probability at that node.
struct PolicyTree {
  struct Node {
    bool is_leaf = true;
    std::size_t decision = 0;                 // leaves
    std::size_t location = 0;                 // internal nodes
    std::vector<std::size_t> new_features;    // ascending feature indices
    std::vector<std::size_t> children;        // one slot per joint outcome
    double expected_cost = 0.0;               // conditional on reaching node
    double expected_loss = 0.0;
  };

  std::vector<Node> nodes;
  std::size_t root = 0;

  bool empty() const { return nodes.empty(); }
  double expected_cost() const { return nodes.at(root).expected_cost; }
  double expected_loss() const { return nodes.at(root).expected_loss; }
};

// Objective minimized at the lookahead frontier by receding_horizon_step.
enum class HorizonObjective {
  kExpectedEntropy,  // maximize cumulative information gain
  kExpectedRisk,     // minimize expected terminal Bayes risk
};

// Shared planner knobs. `tau` is the stopping threshold used by step
// policies (callers typically copy scenario.tau or override it); `horizon`
// is the default lookahead depth for policies built by make_policy.
struct PlannerConfig {
  double tau = 0.0;
  std::size_t horizon = 1;
  bool allow_revisit = false;
  std::size_t outcome_enum_cap = kOutcomeEnumCap;
  std::size_t sample_count = kIgSampleCount;
  bool allow_sampling = true;
  HorizonObjective horizon_objective = HorizonObjective::kExpectedEntropy;
  // Node budget for receding horizon lookahead trees.
  std::size_t horizon_work_budget = 1'000'000;
  // Live state budget for the adaptive brute force oracle.
  std::size_t max_oracle_states = 1'000'000;
  // Node budget for the non-adaptive brute force outcome sweep.
  std::size_t max_nonadaptive_work = 50'000'000;

  IgOptions ig_options() const {
    return {outcome_enum_cap, sample_count, allow_sampling};
  }
};

// One step of greedy expected information gain: stop and declare as soon as
// bayes_risk(belief) <= config.tau, otherwise visit the candidate location
// with maximal expected information gain (lowest index on ties). Candidates
// are the unvisited locations, or every location when allow_revisit is set.
// Stops as well when no candidate remains.
PolicyAction adaptive_greedy_step(const Scenario& scenario,
                                  const Belief& belief, std::size_t current,
                                  const std::vector<bool>& visited,
                                  const PlannerConfig& config);

// Like adaptive_greedy_step but ranks candidates by expected information
// gain divided by visit cost from `current` (cost floor 1e-9).
PolicyAction cost_weighted_greedy_step(const Scenario& scenario,
                                       const Belief& belief,
                                       std::size_t current,
                                       const std::vector<bool>& visited,
                                       const PlannerConfig& config);

// Fixed observation order chosen before any evidence arrives: repeatedly
// appends the location with the largest marginal joint information gain
// given the set chosen so far (lowest index on ties), for `budget_steps`
// picks. budget_steps must not exceed the number of locations.
std::vector<std::size_t> nonadaptive_greedy_order(const Scenario& scenario,
                                                  std::size_t budget_steps,
                                                  const PlannerConfig& config);

// Depth `horizon` lookahead: enumerates visit sequences (and their joint
// outcomes) up to the horizon, scores frontier beliefs with the configured
// objective, and returns the first move of the best sequence (ties resolved
// toward lower location indices at every level). horizon == 1 reproduces
// adaptive_greedy_step exactly. Stops on the same bayes-risk rule. Throws
// OutcomeSpaceTooLargeError when the lookahead tree would exceed
// config.horizon_work_budget nodes (use a smaller horizon).
PolicyAction receding_horizon_step(const Scenario& scenario,
                                   const Belief& belief, std::size_t current,
                                   const std::vector<bool>& visited,
                                   std::size_t horizon,
                                   const PlannerConfig& config);

// Uniformly random unvisited location; stops on the bayes-risk rule or when
// no candidate remains.
PolicyAction random_policy_step(const Scenario& scenario, const Belief& belief,
                                std::size_t current,
                                const std::vector<bool>& visited,
                                const PlannerConfig& config, Rng& rng);

// Exhaustive-search optimal adaptive policy: minimizes expected cost subject
// to expected loss <= tau, starting at location 0 with no observations.
// Ties prefer lower expected loss, then shallower trees, then lower location
// indices. Throws StateSpaceTooLargeError if the memoized search would
// exceed config.max_oracle_states distinct states, and InfeasibleError (with
// the best achievable expected loss) when even observing everything cannot
// reach tau.
PolicyTree brute_force_optimal(const Scenario& scenario, double tau,
                               const PlannerConfig& config);

// A fixed order together with its exactly evaluated cost and loss.
struct NonAdaptivePlan {
  std::vector<std::size_t> order;
  double expected_cost = 0.0;
  double expected_loss = 0.0;
};

// Exhaustive-search optimal non-adaptive plan: the order (fixed before any
// evidence; declaration happens after the full order is observed) that
// minimizes expected cost subject to expected loss <= tau. Ties prefer
// fewer visits, then lexicographically smaller orders. Throws
// StateSpaceTooLargeError when the outcome sweep would exceed
// config.max_nonadaptive_work nodes and InfeasibleError when no order
// reaches tau.
NonAdaptivePlan brute_force_optimal_nonadaptive(const Scenario& scenario,
                                                double tau,
                                                const PlannerConfig& config);

struct PolicyEvaluation {
  double expected_cost = 0.0;
  double expected_loss = 0.0;
};

// Exact expected cost and loss of an explicit policy tree, by recursing over
// every positive probability outcome branch from the prior at location 0.
PolicyEvaluation evaluate_policy_exact(const Scenario& scenario,
                                       const PolicyTree& tree);

// A stateless sensing policy; all episode state arrives via the arguments,
// so one instance can serve many episodes (and threads) concurrently.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string name() const = 0;
  virtual PolicyAction step(const Scenario& scenario, const Belief& belief,
                            std::size_t current,
                            const std::vector<bool>& visited,
                            Rng& rng) const = 0;
};

// Builds a policy from a command-line style name: "adaptive-ig",
// "nonadaptive-ig", "cost-ig", "horizon:<T>" (T >= 1) or "random". Throws
// std::invalid_argument for unknown names.
std::unique_ptr<Policy> make_policy(const std::string& name,
                                    const Scenario& scenario,
                                    const PlannerConfig& config);

// Exact expected cost and loss of a deterministic implicit policy, unrolled
// against every outcome branch (up to max_steps forced declarations). The
// policy must not consult the rng for the result to be meaningful.
PolicyEvaluation evaluate_policy_exact(const Scenario& scenario,
                                       const Policy& policy,
                                       std::size_t max_steps,
                                       const PlannerConfig& config);

}  // namespace viewplan

#endif  // VIEWPLAN_PLANNER_HPP_
