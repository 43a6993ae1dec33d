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

#include "viewplan/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "belief_internal.hpp"
#include "viewplan/errors.hpp"

namespace viewplan {
namespace {

// Candidate locations for the next visit, ascending. With revisits every
// location is always a candidate (a repeat visit draws fresh realizations).
std::vector<std::size_t> CandidateLocations(const Scenario& s,
                                            const std::vector<bool>& visited,
                                            bool allow_revisit) {
  std::vector<std::size_t> out;
  for (std::size_t l = 0; l < s.n_locations(); ++l)
    if (allow_revisit || !visited[l]) out.push_back(l);
  return out;
}

// Features whose realizations a visit to `location` would add. Without
// revisits these are the unseen features; with revisits every feature of the
// location is drawn fresh, so all of them count (and duplicates against the
// history are intentional).
std::vector<std::size_t> RevealedFeatures(const Scenario& s,
                                          const Belief& belief,
                                          std::size_t location,
                                          bool allow_revisit) {
  std::vector<std::size_t> out;
  for (std::size_t f : s.locations[location].features)
    if (allow_revisit || !belief.has_feature(f)) out.push_back(f);
  std::sort(out.begin(), out.end());
  return out;
}

double LocationGain(const Scenario& s, const Belief& belief,
                    std::size_t location, const PlannerConfig& config) {
  if (!config.allow_revisit)
    return expected_information_gain(s, belief, location, config.ig_options());
  const std::vector<std::size_t> fresh =
      RevealedFeatures(s, belief, location, /*allow_revisit=*/true);
  if (fresh.empty()) return 0.0;
  const double ig = entropy_bits(belief) -
                    detail::ExpectedPosteriorEntropy(
                        s, belief.probs, fresh, config.ig_options(),
                        "expected_information_gain");
  return std::max(ig, 0.0);
}

PolicyAction GreedyByScore(const Scenario& s, const Belief& belief,
                           std::size_t current,
                           const std::vector<bool>& visited,
                           const PlannerConfig& config, bool cost_weighted) {
  if (bayes_risk(s, belief) <= config.tau)
    return PolicyAction::Stop(map_decision(s, belief));
  const std::vector<std::size_t> candidates =
      CandidateLocations(s, visited, config.allow_revisit);
  if (candidates.empty())
    return PolicyAction::Stop(map_decision(s, belief));

  std::size_t best = candidates.front();
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t l : candidates) {
    double score = LocationGain(s, belief, l, config);
    if (cost_weighted)
      score /= std::max(s.visit_cost(l, current), 1e-9);
    if (score > best_score) {
      best_score = score;
      best = l;
    }
  }
  return PolicyAction::Visit(best);
}

}  // namespace

PolicyAction adaptive_greedy_step(const Scenario& s, const Belief& belief,
                                  std::size_t current,
                                  const std::vector<bool>& visited,
                                  const PlannerConfig& config) {
  (void)current;
  return GreedyByScore(s, belief, current, visited, config,
                       /*cost_weighted=*/false);
}

PolicyAction cost_weighted_greedy_step(const Scenario& s, const Belief& belief,
                                       std::size_t current,
                                       const std::vector<bool>& visited,
                                       const PlannerConfig& config) {
  return GreedyByScore(s, belief, current, visited, config,
                       /*cost_weighted=*/true);
}

std::vector<std::size_t> nonadaptive_greedy_order(const Scenario& s,
                                                  std::size_t budget_steps,
                                                  const PlannerConfig& config) {
  if (budget_steps > s.n_locations())
    throw std::invalid_argument(
        "nonadaptive_greedy_order: budget exceeds the number of locations");
  const Belief prior = make_prior_belief(s);
  const IgOptions options = config.ig_options();

  std::vector<std::size_t> chosen;
  std::vector<bool> taken(s.n_locations(), false);
  double base_gain = 0.0;
  while (chosen.size() < budget_steps) {
    std::size_t best = 0;
    double best_gain = -std::numeric_limits<double>::infinity();
    double best_total = 0.0;
    for (std::size_t l = 0; l < s.n_locations(); ++l) {
      if (taken[l]) continue;
      chosen.push_back(l);
      const double total =
          expected_information_gain_set(s, prior, chosen, options);
      chosen.pop_back();
      const double gain = total - base_gain;
      if (gain > best_gain) {
        best_gain = gain;
        best_total = total;
        best = l;
      }
    }
    chosen.push_back(best);
    taken[best] = true;
    base_gain = best_total;
  }
  return chosen;
}

namespace {

struct HorizonSearch {
  const Scenario& s;
  const PlannerConfig& config;
  std::size_t nodes = 0;

  void CountNode() {
    if (++nodes > config.horizon_work_budget)
      throw OutcomeSpaceTooLargeError(
          "receding_horizon_step: lookahead tree exceeds the work budget of " +
          std::to_string(config.horizon_work_budget) +
          " nodes; use a smaller horizon");
  }

  double TerminalValue(std::span<const double> probs) const {
    if (config.horizon_objective == HorizonObjective::kExpectedRisk) {
      Belief b;
      b.probs.assign(probs.begin(), probs.end());
      return bayes_risk(s, b);
    }
    return entropy_bits(probs);
  }

  // Minimum achievable expected terminal value from this state with `depth`
  // visits left. `realized` marks features whose values are already known
  // along this lookahead branch.
  double Value(const std::vector<double>& probs, std::vector<bool>& visited,
               std::vector<bool>& realized, std::size_t current,
               std::size_t depth) {
    if (depth == 0) return TerminalValue(probs);
    double best = std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t l = 0; l < s.n_locations(); ++l) {
      if (!config.allow_revisit && visited[l]) continue;
      any = true;
      const double v = ExpandVisit(probs, visited, realized, current, l, depth);
      if (v < best) best = v;
    }
    return any ? best : TerminalValue(probs);
  }

  // Expected value of visiting `l` now and continuing optimally.
  double ExpandVisit(const std::vector<double>& probs,
                     std::vector<bool>& visited, std::vector<bool>& realized,
                     std::size_t current, std::size_t l, std::size_t depth) {
    (void)current;
    CountNode();
    std::vector<std::size_t> fresh;
    for (std::size_t f : s.locations[l].features)
      if (config.allow_revisit || !realized[f]) fresh.push_back(f);

    const bool was_visited = visited[l];
    visited[l] = true;
    std::vector<char> was_realized(fresh.size());
    for (std::size_t i = 0; i < fresh.size(); ++i) {
      was_realized[i] = realized[fresh[i]];
      realized[fresh[i]] = true;
    }

    double result;
    if (fresh.empty()) {
      result = Value(probs, visited, realized, l, depth - 1);
    } else {
      if (detail::JointOutcomeCount(s, fresh) > config.outcome_enum_cap)
        throw OutcomeSpaceTooLargeError(
            "receding_horizon_step: joint outcome space exceeds the "
            "enumeration cap; use a smaller horizon");
      const std::size_t n = probs.size();
      std::vector<std::size_t> digits(fresh.size(), 0);
      std::vector<double> post(n);
      const std::size_t total = detail::JointOutcomeCount(s, fresh);
      double acc = 0.0;
      for (std::size_t rank = 0; rank < total; ++rank) {
        double mass = 0.0;
        for (std::size_t h = 0; h < n; ++h) {
          double w = probs[h];
          for (std::size_t i = 0; i < fresh.size() && w > 0.0; ++i)
            w *= s.features[fresh[i]].cpt[h][digits[i]];
          post[h] = w;
          mass += w;
        }
        if (mass > 0.0) {
          for (double& p : post) p /= mass;
          acc += mass * Value(post, visited, realized, l, depth - 1);
        }
        for (std::size_t i = fresh.size(); i-- > 0;) {
          if (++digits[i] < s.features[fresh[i]].n_values()) break;
          digits[i] = 0;
        }
      }
      result = acc;
    }

    visited[l] = was_visited;
    for (std::size_t i = 0; i < fresh.size(); ++i)
      realized[fresh[i]] = was_realized[i];
    return result;
  }
};

}  // namespace

PolicyAction receding_horizon_step(const Scenario& s, const Belief& belief,
                                   std::size_t current,
                                   const std::vector<bool>& visited,
                                   std::size_t horizon,
                                   const PlannerConfig& config) {
  if (horizon < 1)
    throw std::invalid_argument("receding_horizon_step: horizon must be >= 1");
  // Depth one under the entropy objective is exactly the greedy step
  // (including its sampling fallback for large outcome spaces).
  if (horizon == 1 &&
      config.horizon_objective == HorizonObjective::kExpectedEntropy)
    return adaptive_greedy_step(s, belief, current, visited, config);

  if (bayes_risk(s, belief) <= config.tau)
    return PolicyAction::Stop(map_decision(s, belief));
  const std::vector<std::size_t> candidates =
      CandidateLocations(s, visited, config.allow_revisit);
  if (candidates.empty())
    return PolicyAction::Stop(map_decision(s, belief));

  HorizonSearch search{s, config};
  std::vector<bool> scratch_visited = visited;
  std::vector<bool> realized(s.n_features(), false);
  for (const Observation& o : belief.history) realized[o.feature] = true;

  std::size_t best = candidates.front();
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t l : candidates) {
    const double v = search.ExpandVisit(belief.probs, scratch_visited,
                                        realized, current, l, horizon);
    if (v < best_value) {
      best_value = v;
      best = l;
    }
  }
  return PolicyAction::Visit(best);
}

PolicyAction random_policy_step(const Scenario& s, const Belief& belief,
                                std::size_t current,
                                const std::vector<bool>& visited,
                                const PlannerConfig& config, Rng& rng) {
  (void)current;
  if (bayes_risk(s, belief) <= config.tau)
    return PolicyAction::Stop(map_decision(s, belief));
  const std::vector<std::size_t> candidates =
      CandidateLocations(s, visited, config.allow_revisit);
  if (candidates.empty())
    return PolicyAction::Stop(map_decision(s, belief));
  return PolicyAction::Visit(candidates[rng.UniformIndex(candidates.size())]);
}

// --- named policies ----------------------------------------------------------

namespace {

class AdaptiveIgPolicy final : public Policy {
 public:
  explicit AdaptiveIgPolicy(PlannerConfig config) : config_(config) {}
  std::string name() const override { return "adaptive-ig"; }
  PolicyAction step(const Scenario& s, const Belief& belief,
                    std::size_t current, const std::vector<bool>& visited,
                    Rng&) const override {
    return adaptive_greedy_step(s, belief, current, visited, config_);
  }

 private:
  PlannerConfig config_;
};

class CostWeightedIgPolicy final : public Policy {
 public:
  explicit CostWeightedIgPolicy(PlannerConfig config) : config_(config) {}
  std::string name() const override { return "cost-ig"; }
  PolicyAction step(const Scenario& s, const Belief& belief,
                    std::size_t current, const std::vector<bool>& visited,
                    Rng&) const override {
    return cost_weighted_greedy_step(s, belief, current, visited, config_);
  }

 private:
  PlannerConfig config_;
};

class NonAdaptiveIgPolicy final : public Policy {
 public:
  NonAdaptiveIgPolicy(const Scenario& s, PlannerConfig config)
      : config_(config),
        order_(nonadaptive_greedy_order(s, s.n_locations(), config)) {}
  std::string name() const override { return "nonadaptive-ig"; }
  PolicyAction step(const Scenario& s, const Belief& belief, std::size_t,
                    const std::vector<bool>& visited, Rng&) const override {
    if (bayes_risk(s, belief) <= config_.tau)
      return PolicyAction::Stop(map_decision(s, belief));
    for (std::size_t l : order_)
      if (!visited[l]) return PolicyAction::Visit(l);
    return PolicyAction::Stop(map_decision(s, belief));
  }

 private:
  PlannerConfig config_;
  std::vector<std::size_t> order_;
};

class RecedingHorizonPolicy final : public Policy {
 public:
  RecedingHorizonPolicy(std::size_t horizon, PlannerConfig config)
      : horizon_(horizon), config_(config) {}
  std::string name() const override {
    return "horizon:" + std::to_string(horizon_);
  }
  PolicyAction step(const Scenario& s, const Belief& belief,
                    std::size_t current, const std::vector<bool>& visited,
                    Rng&) const override {
    return receding_horizon_step(s, belief, current, visited, horizon_,
                                 config_);
  }

 private:
  std::size_t horizon_;
  PlannerConfig config_;
};

class RandomPolicy final : public Policy {
 public:
  explicit RandomPolicy(PlannerConfig config) : config_(config) {}
  std::string name() const override { return "random"; }
  PolicyAction step(const Scenario& s, const Belief& belief,
                    std::size_t current, const std::vector<bool>& visited,
                    Rng& rng) const override {
    return random_policy_step(s, belief, current, visited, config_, rng);
  }

 private:
  PlannerConfig config_;
};

}  // namespace

std::unique_ptr<Policy> make_policy(const std::string& name,
                                    const Scenario& scenario,
                                    const PlannerConfig& config) {
  if (name == "adaptive-ig") return std::make_unique<AdaptiveIgPolicy>(config);
  if (name == "cost-ig") return std::make_unique<CostWeightedIgPolicy>(config);
  if (name == "nonadaptive-ig")
    return std::make_unique<NonAdaptiveIgPolicy>(scenario, config);
  if (name == "random") return std::make_unique<RandomPolicy>(config);
  if (name == "horizon" || name.rfind("horizon:", 0) == 0) {
    std::size_t horizon = config.horizon;
    if (name.size() > 8) {
      const std::string arg = name.substr(8);
      std::size_t pos = 0;
      unsigned long parsed = 0;
      try {
        parsed = std::stoul(arg, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != arg.size() || parsed < 1)
        throw std::invalid_argument("invalid horizon in policy name \"" +
                                    name + "\"; use horizon:<T> with T >= 1");
      horizon = parsed;
    }
    if (horizon < 1)
      throw std::invalid_argument("policy horizon must be >= 1");
    return std::make_unique<RecedingHorizonPolicy>(horizon, config);
  }
  throw std::invalid_argument(
      "unknown policy \"" + name +
      "\"; allowed: adaptive-ig, nonadaptive-ig, cost-ig, horizon:<T>, "
      "random");
}

// --- exact evaluation ---------------------------------------------------------

namespace {

struct TreeEval {
  const Scenario& s;
  const PolicyTree& tree;

  PolicyEvaluation Node(std::size_t idx, const std::vector<double>& probs,
                        std::size_t current) const {
    const PolicyTree::Node& node = tree.nodes.at(idx);
    if (node.is_leaf) {
      double loss = 0.0;
      for (std::size_t h = 0; h < probs.size(); ++h)
        loss += probs[h] * s.loss[node.decision][h];
      return {0.0, loss};
    }
    PolicyEvaluation out{s.visit_cost(node.location, current), 0.0};
    const std::size_t n = probs.size();
    const std::size_t total = node.children.size();
    std::vector<std::size_t> digits(node.new_features.size(), 0);
    std::vector<double> post(n);
    for (std::size_t rank = 0; rank < total; ++rank) {
      double mass = 0.0;
      for (std::size_t h = 0; h < n; ++h) {
        double w = probs[h];
        for (std::size_t i = 0; i < node.new_features.size() && w > 0.0; ++i)
          w *= s.features[node.new_features[i]].cpt[h][digits[i]];
        post[h] = w;
        mass += w;
      }
      if (mass > 0.0) {
        if (node.children[rank] == kNoChild)
          throw Error("policy tree: missing child for a reachable outcome");
        for (double& p : post) p /= mass;
        const PolicyEvaluation sub = Node(node.children[rank], post, node.location);
        out.expected_cost += mass * sub.expected_cost;
        out.expected_loss += mass * sub.expected_loss;
      }
      for (std::size_t i = node.new_features.size(); i-- > 0;) {
        if (++digits[i] < s.features[node.new_features[i]].n_values()) break;
        digits[i] = 0;
      }
    }
    return out;
  }
};

struct StepPolicyEval {
  const Scenario& s;
  const Policy& policy;
  const PlannerConfig& config;
  std::size_t nodes = 0;
  Rng rng{0};  // the policy must be deterministic for exactness

  PolicyEvaluation Run(const Belief& belief, std::vector<bool>& visited,
                       std::size_t current, std::size_t steps_left) {
    if (++nodes > config.max_oracle_states)
      throw StateSpaceTooLargeError(
          "evaluate_policy_exact: unrolled policy exceeds the state budget");
    PolicyAction act = steps_left == 0
                           ? PolicyAction::Stop(map_decision(s, belief))
                           : policy.step(s, belief, current, visited, rng);
    if (act.is_stop()) {
      double loss = 0.0;
      for (std::size_t h = 0; h < belief.probs.size(); ++h)
        loss += belief.probs[h] * s.loss[act.index][h];
      return {0.0, loss};
    }

    const std::size_t l = act.index;
    const std::vector<std::size_t> fresh =
        RevealedFeatures(s, belief, l, config.allow_revisit);
    const bool was_visited = visited[l];
    visited[l] = true;
    PolicyEvaluation out{s.visit_cost(l, current), 0.0};
    if (fresh.empty()) {
      const PolicyEvaluation sub = Run(belief, visited, l, steps_left - 1);
      out.expected_cost += sub.expected_cost;
      out.expected_loss += sub.expected_loss;
    } else {
      const std::size_t n = belief.probs.size();
      const std::size_t total = detail::JointOutcomeCount(s, fresh);
      std::vector<std::size_t> digits(fresh.size(), 0);
      for (std::size_t rank = 0; rank < total; ++rank) {
        Belief next;
        next.probs.resize(n);
        double mass = 0.0;
        for (std::size_t h = 0; h < n; ++h) {
          double w = belief.probs[h];
          for (std::size_t i = 0; i < fresh.size() && w > 0.0; ++i)
            w *= s.features[fresh[i]].cpt[h][digits[i]];
          next.probs[h] = w;
          mass += w;
        }
        if (mass > 0.0) {
          for (double& p : next.probs) p /= mass;
          next.history = belief.history;
          for (std::size_t i = 0; i < fresh.size(); ++i)
            next.history.push_back({fresh[i], digits[i]});
          const PolicyEvaluation sub = Run(next, visited, l, steps_left - 1);
          out.expected_cost += mass * sub.expected_cost;
          out.expected_loss += mass * sub.expected_loss;
        }
        for (std::size_t i = fresh.size(); i-- > 0;) {
          if (++digits[i] < s.features[fresh[i]].n_values()) break;
          digits[i] = 0;
        }
      }
    }
    visited[l] = was_visited;
    return out;
  }
};

}  // namespace

PolicyEvaluation evaluate_policy_exact(const Scenario& s,
                                       const PolicyTree& tree) {
  if (tree.empty()) throw Error("evaluate_policy_exact: empty policy tree");
  return TreeEval{s, tree}.Node(tree.root, s.prior, 0);
}

PolicyEvaluation evaluate_policy_exact(const Scenario& s, const Policy& policy,
                                       std::size_t max_steps,
                                       const PlannerConfig& config) {
  StepPolicyEval eval{s, policy, config};
  std::vector<bool> visited(s.n_locations(), false);
  Belief prior = make_prior_belief(s);
  return eval.Run(prior, visited, 0, max_steps);
}

}  // namespace viewplan
