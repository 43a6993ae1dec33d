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
// Brute force oracles.
//
// Adaptive: depth first search over belief states keyed by (visited set,
// current location, posterior). Because every location reveals a fixed
// feature set and locations are visited at most once, the realized features
// are determined by the visited set, so the posterior captures everything
// the history can influence — the memoization is exact. Each state stores a
// Pareto front of achievable (expected cost, expected loss) pairs; fronts of
// child outcomes are combined by weighted folding with dominance pruning,
// which is exact because later fold steps add the same weighted terms to
// every partial combination.
//
// Non-adaptive: the expected loss of a fixed plan depends only on the SET of
// observed locations, so one shared sweep over all joint outcome assignments
// accumulates the loss of every subset at once; the cheapest observation
// order per subset is a Held–Karp dynamic program over (subset, last
// location).

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "belief_internal.hpp"
#include "viewplan/errors.hpp"
#include "viewplan/planner.hpp"

namespace viewplan {
namespace {

using Mask = std::uint64_t;

constexpr std::size_t kNoState = std::numeric_limits<std::size_t>::max();

double DecisionLoss(const Scenario& s, const std::vector<double>& probs,
                    std::size_t decision) {
  double loss = 0.0;
  for (std::size_t h = 0; h < probs.size(); ++h)
    loss += probs[h] * s.loss[decision][h];
  return loss;
}

// --- adaptive oracle ---------------------------------------------------------

struct FrontPoint {
  double cost = 0.0;
  double loss = 0.0;
  int depth = 0;  // levels below this point; a stop is 0
  bool is_stop = true;
  std::size_t index = 0;  // decision (stop) or location (visit)
  // For visits: one entry per positive-mass outcome rank of the newly
  // revealed features: (outcome rank, child state, point within its front).
  std::vector<std::array<std::size_t, 3>> branches;
};

struct OracleState {
  Mask mask = 0;
  std::size_t current = 0;
  std::vector<double> probs;
  std::vector<FrontPoint> front;  // cost ascending, loss strictly descending
};

class AdaptiveOracle {
 public:
  AdaptiveOracle(const Scenario& s, double tau, const PlannerConfig& config)
      : s_(s), tau_(tau), config_(config) {
    const std::size_t m = s.n_locations();
    if (m > 8 * sizeof(Mask))
      throw StateSpaceTooLargeError(
          "brute_force_optimal: too many locations for the search mask");
    // When the travel cost depends only on the target, the current location
    // never influences costs or pruning, so memo keys can ignore it.
    target_only_costs_ = true;
    for (std::size_t i = 0; i < m && target_only_costs_; ++i)
      for (std::size_t j = 1; j < m; ++j)
        if (s.travel_cost[i][j] != s.travel_cost[i][0]) {
          target_only_costs_ = false;
          break;
        }
    // realized_[mask] is implicit: a feature is realized iff some visited
    // location observes it; recomputed from the mask on demand.
    location_features_.resize(m);
    for (std::size_t l = 0; l < m; ++l)
      location_features_[l] = s.locations[l].features;
  }

  PolicyTree Solve() {
    std::vector<double> prior = s_.prior;
    const std::size_t root = SolveState(0, 0, std::move(prior));
    const std::vector<FrontPoint>& front = states_[root].front;
    // Front is cost ascending with strictly decreasing loss; the first
    // point meeting tau is the optimum. Ties already resolved during
    // pruning (lower loss, then shallower, then insertion order = stop
    // first then ascending locations).
    const FrontPoint* chosen = nullptr;
    double best_loss = std::numeric_limits<double>::infinity();
    for (const FrontPoint& p : front) {
      best_loss = std::min(best_loss, p.loss);
      if (p.loss <= tau_) {
        chosen = &p;
        break;
      }
    }
    if (chosen == nullptr)
      throw InfeasibleError(
          "brute_force_optimal: no policy reaches expected loss <= " +
              std::to_string(tau_) + "; best achievable is " +
              std::to_string(best_loss),
          best_loss);

    PolicyTree tree;
    tree.root = EmitNode(root, *chosen, &tree);
    return tree;
  }

 private:
  std::vector<std::size_t> RealizedFeatureFlags(Mask mask) const {
    std::vector<std::size_t> realized(s_.n_features(), 0);
    for (std::size_t l = 0; l < s_.n_locations(); ++l)
      if (mask & (Mask{1} << l))
        for (std::size_t f : location_features_[l]) realized[f] = 1;
    return realized;
  }

  // True when no feature in `fresh` can change the posterior: every value
  // column is constant across the support of `probs`.
  bool SupportUninformative(const std::vector<std::size_t>& fresh,
                            const std::vector<double>& probs) const {
    for (std::size_t f : fresh) {
      const Feature& feat = s_.features[f];
      for (std::size_t v = 0; v < feat.n_values(); ++v) {
        double seen = -1.0;
        for (std::size_t h = 0; h < probs.size(); ++h) {
          if (probs[h] <= 0.0) continue;
          if (seen < 0.0)
            seen = feat.cpt[h][v];
          else if (feat.cpt[h][v] != seen)
            return false;
        }
      }
    }
    return true;
  }

  // Skipping `l` is safe when moving somewhere else directly is never more
  // expensive than detouring through l.
  bool TriangleSafe(std::size_t l, std::size_t current, Mask mask) const {
    for (std::size_t x = 0; x < s_.n_locations(); ++x) {
      if (x == l || (mask & (Mask{1} << x))) continue;
      if (s_.visit_cost(x, current) >
          s_.visit_cost(l, current) + s_.visit_cost(x, l))
        return false;
    }
    return true;
  }

  std::string StateKey(Mask mask, std::size_t current,
                       const std::vector<double>& probs) const {
    if (target_only_costs_) current = 0;
    std::string key;
    key.resize(sizeof(Mask) + sizeof(std::size_t) +
               probs.size() * sizeof(double));
    char* out = key.data();
    std::memcpy(out, &mask, sizeof(Mask));
    out += sizeof(Mask);
    std::memcpy(out, &current, sizeof(std::size_t));
    out += sizeof(std::size_t);
    std::memcpy(out, probs.data(), probs.size() * sizeof(double));
    return key;
  }

  std::size_t SolveState(Mask mask, std::size_t current,
                         std::vector<double> probs) {
    std::string key = StateKey(mask, current, probs);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    if (states_.size() >= config_.max_oracle_states)
      throw StateSpaceTooLargeError(
          "brute_force_optimal: state budget of " +
          std::to_string(config_.max_oracle_states) + " states exceeded");

    const std::size_t idx = states_.size();
    states_.push_back({mask, current, probs, {}});
    memo_.emplace(std::move(key), idx);

    std::vector<FrontPoint> front;
    {  // Stopping now is always available.
      FrontPoint stop;
      stop.is_stop = true;
      stop.index = MapDecision(probs);
      stop.cost = 0.0;
      stop.loss = DecisionLoss(s_, probs, stop.index);
      stop.depth = 0;
      front.push_back(std::move(stop));
    }

    const std::vector<std::size_t> realized = RealizedFeatureFlags(mask);
    for (std::size_t l = 0; l < s_.n_locations(); ++l) {
      if (mask & (Mask{1} << l)) continue;
      std::vector<std::size_t> fresh;
      for (std::size_t f : location_features_[l])
        if (!realized[f]) fresh.push_back(f);
      std::sort(fresh.begin(), fresh.end());

      // Visits that cannot move the posterior only ever pay off as travel
      // shortcuts; when the direct move is never worse, skip them. Restricted
      // to tau == 0: with a positive slack an optimal tree may still branch
      // on an uninformative outcome to mix two sub-plans.
      if (tau_ == 0.0 && SupportUninformative(fresh, probs) &&
          TriangleSafe(l, current, mask)) {
        continue;
      }

      AppendVisitPoints(idx, l, fresh, &front);
    }

    PruneFront(&front);
    states_[idx].front = std::move(front);
    return idx;
  }

  std::size_t MapDecision(const std::vector<double>& probs) const {
    std::size_t best = 0;
    double best_loss = std::numeric_limits<double>::infinity();
    for (std::size_t d = 0; d < s_.n_hypotheses(); ++d) {
      const double loss = DecisionLoss(s_, probs, d);
      if (loss < best_loss) {
        best_loss = loss;
        best = d;
      }
    }
    return best;
  }

  void AppendVisitPoints(std::size_t state_idx, std::size_t l,
                         const std::vector<std::size_t>& fresh,
                         std::vector<FrontPoint>* front) {
    // Copy what we need: states_ may reallocate during child solves.
    const Mask mask = states_[state_idx].mask;
    const std::size_t current = states_[state_idx].current;
    const std::vector<double> probs = states_[state_idx].probs;
    const double travel = s_.visit_cost(l, current);
    const std::size_t n = probs.size();

    struct Combo {
      double cost;
      double loss;
      int depth;
      std::vector<std::array<std::size_t, 3>> branches;
    };
    std::vector<Combo> combos{{travel, 0.0, 0, {}}};

    const std::size_t total = detail::JointOutcomeCount(s_, fresh);
    std::vector<std::size_t> digits(fresh.size(), 0);
    std::vector<double> post(n);
    for (std::size_t rank = 0; rank < total; ++rank) {
      double mass = 0.0;
      for (std::size_t h = 0; h < n; ++h) {
        double w = probs[h];
        for (std::size_t i = 0; i < fresh.size() && w > 0.0; ++i)
          w *= s_.features[fresh[i]].cpt[h][digits[i]];
        post[h] = w;
        mass += w;
      }
      if (mass > 0.0) {
        for (double& p : post) p /= mass;
        const std::size_t child = SolveState(mask | (Mask{1} << l), l, post);
        const std::vector<FrontPoint>& child_front = states_[child].front;
        std::vector<Combo> next;
        next.reserve(combos.size() * child_front.size());
        for (const Combo& c : combos) {
          for (std::size_t q = 0; q < child_front.size(); ++q) {
            CountWork();
            Combo ext = c;
            ext.cost += mass * child_front[q].cost;
            ext.loss += mass * child_front[q].loss;
            ext.depth = std::max(ext.depth, child_front[q].depth);
            ext.branches.push_back({rank, child, q});
            next.push_back(std::move(ext));
          }
        }
        // Dominance pruning of partial combinations is exact: the remaining
        // outcomes contribute identical additive terms to every combo.
        std::stable_sort(next.begin(), next.end(),
                         [](const Combo& a, const Combo& b) {
                           if (a.cost != b.cost) return a.cost < b.cost;
                           if (a.loss != b.loss) return a.loss < b.loss;
                           return a.depth < b.depth;
                         });
        combos.clear();
        double best_loss = std::numeric_limits<double>::infinity();
        for (Combo& c : next) {
          if (c.loss < best_loss) {
            best_loss = c.loss;
            combos.push_back(std::move(c));
          }
        }
      }
      for (std::size_t i = fresh.size(); i-- > 0;) {
        if (++digits[i] < s_.features[fresh[i]].n_values()) break;
        digits[i] = 0;
      }
    }

    for (Combo& c : combos) {
      FrontPoint p;
      p.cost = c.cost;
      p.loss = c.loss;
      p.depth = c.depth + 1;
      p.is_stop = false;
      p.index = l;
      p.branches = std::move(c.branches);
      front->push_back(std::move(p));
    }
  }

  void CountWork() {
    if (++work_ > 64 * config_.max_oracle_states)
      throw StateSpaceTooLargeError(
          "brute_force_optimal: front combination work budget exceeded");
  }

  // Keep the Pareto front: cost ascending, loss strictly descending. The
  // stable sort preserves insertion order (stop first, then locations
  // ascending) among exact ties, matching the tie-break contract together
  // with the depth comparison.
  void PruneFront(std::vector<FrontPoint>* front) const {
    std::stable_sort(front->begin(), front->end(),
                     [](const FrontPoint& a, const FrontPoint& b) {
                       if (a.cost != b.cost) return a.cost < b.cost;
                       if (a.loss != b.loss) return a.loss < b.loss;
                       return a.depth < b.depth;
                     });
    std::vector<FrontPoint> kept;
    double best_loss = std::numeric_limits<double>::infinity();
    for (FrontPoint& p : *front) {
      if (p.loss < best_loss) {
        best_loss = p.loss;
        kept.push_back(std::move(p));
      }
    }
    *front = std::move(kept);
    // With a zero loss budget, outcome weights are positive and losses
    // non-negative, so a plan is feasible only when every sub-plan it uses
    // has loss exactly zero: points with positive loss can never enter a
    // feasible combination. Only the last front point (minimum loss, and the
    // cheapest zero-loss plan when one exists) matters to any parent.
    if (tau_ == 0.0 && front->size() > 1)
      front->erase(front->begin(), front->end() - 1);
  }

  std::size_t EmitNode(std::size_t state_idx, const FrontPoint& point,
                       PolicyTree* tree) {
    PolicyTree::Node node;
    node.expected_cost = point.cost;
    node.expected_loss = point.loss;
    if (point.is_stop) {
      node.is_leaf = true;
      node.decision = point.index;
      tree->nodes.push_back(std::move(node));
      return tree->nodes.size() - 1;
    }
    node.is_leaf = false;
    node.location = point.index;
    const OracleState& state = states_[state_idx];
    const std::vector<std::size_t> realized = RealizedFeatureFlags(state.mask);
    for (std::size_t f : location_features_[point.index])
      if (!realized[f]) node.new_features.push_back(f);
    std::sort(node.new_features.begin(), node.new_features.end());
    node.children.assign(detail::JointOutcomeCount(s_, node.new_features),
                         kNoChild);
    // Children must be emitted after the node to fill ranks; reserve slot.
    tree->nodes.push_back(std::move(node));
    const std::size_t slot = tree->nodes.size() - 1;
    for (const auto& [rank, child_state, child_point] : point.branches) {
      const std::size_t child_slot = EmitNode(
          child_state, states_[child_state].front[child_point], tree);
      tree->nodes[slot].children[rank] = child_slot;
    }
    return slot;
  }

  const Scenario& s_;
  double tau_;
  const PlannerConfig& config_;
  bool target_only_costs_ = false;
  std::vector<std::vector<std::size_t>> location_features_;
  std::unordered_map<std::string, std::size_t> memo_;
  std::vector<OracleState> states_;
  std::size_t work_ = 0;
};

// --- non-adaptive oracle -------------------------------------------------------

bool IsUnitLoss(const Scenario& s) {
  const std::size_t n = s.n_hypotheses();
  for (std::size_t d = 0; d < n; ++d)
    for (std::size_t h = 0; h < n; ++h)
      if (s.loss[d][h] != (d == h ? 0.0 : 1.0)) return false;
  return true;
}

// min over decisions of the unnormalized expected loss of these weights.
double LeafRisk(const Scenario& s, bool unit_loss,
                const std::vector<double>& weights) {
  const std::size_t n = weights.size();
  if (unit_loss) {
    double sum = 0.0, best = 0.0;
    for (double w : weights) {
      sum += w;
      best = std::max(best, w);
    }
    return sum - best;
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t d = 0; d < n; ++d) {
    double loss = 0.0;
    for (std::size_t h = 0; h < n; ++h) loss += weights[h] * s.loss[d][h];
    best = std::min(best, loss);
  }
  return best;
}

// Accumulates, for every subset of locations, the expected loss of
// observing exactly that subset and then declaring optimally. One depth
// first sweep over joint outcome assignments: at each location level the
// branch "absent" leaves the weights untouched, and each value branch
// multiplies in the location's cpt columns. Requires disjoint per-location
// feature sets (otherwise a shared feature would be multiplied in twice).
class SubsetLossSweep {
 public:
  SubsetLossSweep(const Scenario& s) : s_(s), unit_loss_(IsUnitLoss(s)) {
    const std::size_t m = s.n_locations();
    loss_.assign(std::size_t{1} << m, 0.0);
    // Per-location joint value tuples (product over its features).
    for (std::size_t l = 0; l < m; ++l) {
      const auto& features = s.locations[l].features;
      std::vector<std::size_t> sorted(features.begin(), features.end());
      std::sort(sorted.begin(), sorted.end());
      location_features_.push_back(std::move(sorted));
    }
  }

  // Expected loss (prior-weighted, already normalized) per subset mask.
  std::vector<double> Run() {
    std::vector<double> weights = s_.prior;
    Descend(0, 0, weights);
    return std::move(loss_);
  }

 private:
  void Descend(std::size_t level, Mask mask, std::vector<double>& weights) {
    if (level == s_.n_locations()) {
      loss_[mask] += LeafRisk(s_, unit_loss_, weights);
      return;
    }
    // Location absent from the subset.
    Descend(level + 1, mask, weights);
    // Present: enumerate the joint values of its features. Features shared
    // with other locations would double-count here; the guard in
    // brute_force_optimal_nonadaptive rejects such scenarios.
    const std::vector<std::size_t>& fs = location_features_[level];
    const std::size_t total = detail::JointOutcomeCount(s_, fs);
    std::vector<std::size_t> digits(fs.size(), 0);
    const std::size_t n = weights.size();
    std::vector<double> next(n);
    for (std::size_t rank = 0; rank < total; ++rank) {
      double mass = 0.0;
      for (std::size_t h = 0; h < n; ++h) {
        double w = weights[h];
        for (std::size_t i = 0; i < fs.size() && w > 0.0; ++i)
          w *= s_.features[fs[i]].cpt[h][digits[i]];
        next[h] = w;
        mass += w;
      }
      if (mass > 0.0) {
        std::swap(weights, next);
        Descend(level + 1, mask | (Mask{1} << level), weights);
        std::swap(weights, next);
      }
      for (std::size_t i = fs.size(); i-- > 0;) {
        if (++digits[i] < s_.features[fs[i]].n_values()) break;
        digits[i] = 0;
      }
    }
  }

  const Scenario& s_;
  bool unit_loss_;
  std::vector<std::vector<std::size_t>> location_features_;
  std::vector<double> loss_;
};

// General (slower) path for scenarios where locations share features: the
// expected loss of each subset is computed from the joint outcomes of the
// union of its feature sets.
std::vector<double> SubsetLossesByUnion(const Scenario& s) {
  const std::size_t m = s.n_locations();
  const bool unit_loss = IsUnitLoss(s);
  const std::size_t n = s.n_hypotheses();
  std::vector<double> loss(std::size_t{1} << m, 0.0);
  for (Mask mask = 0; mask < (Mask{1} << m); ++mask) {
    std::vector<std::size_t> fs;
    for (std::size_t l = 0; l < m; ++l)
      if (mask & (Mask{1} << l))
        fs.insert(fs.end(), s.locations[l].features.begin(),
                  s.locations[l].features.end());
    std::sort(fs.begin(), fs.end());
    fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
    const std::size_t total = detail::JointOutcomeCount(s, fs);
    std::vector<std::size_t> digits(fs.size(), 0);
    std::vector<double> w(n);
    double acc = 0.0;
    for (std::size_t rank = 0; rank < total; ++rank) {
      for (std::size_t h = 0; h < n; ++h) {
        double x = s.prior[h];
        for (std::size_t i = 0; i < fs.size() && x > 0.0; ++i)
          x *= s.features[fs[i]].cpt[h][digits[i]];
        w[h] = x;
      }
      acc += LeafRisk(s, unit_loss, w);
      for (std::size_t i = fs.size(); i-- > 0;) {
        if (++digits[i] < s.features[fs[i]].n_values()) break;
        digits[i] = 0;
      }
    }
    loss[mask] = acc;
  }
  return loss;
}

bool DisjointLocationFeatures(const Scenario& s) {
  std::vector<char> seen(s.n_features(), 0);
  for (const Location& l : s.locations)
    for (std::size_t f : l.features) {
      if (seen[f]) return false;
      seen[f] = 1;
    }
  return true;
}

}  // namespace

PolicyTree brute_force_optimal(const Scenario& s, double tau,
                               const PlannerConfig& config) {
  if (!(tau >= 0.0))
    throw std::invalid_argument("brute_force_optimal: tau must be >= 0");
  return AdaptiveOracle(s, tau, config).Solve();
}

NonAdaptivePlan brute_force_optimal_nonadaptive(const Scenario& s, double tau,
                                                const PlannerConfig& config) {
  if (!(tau >= 0.0))
    throw std::invalid_argument(
        "brute_force_optimal_nonadaptive: tau must be >= 0");
  const std::size_t m = s.n_locations();
  if (m > 18)
    throw StateSpaceTooLargeError(
        "brute_force_optimal_nonadaptive: more than 18 locations");
  {
    // Outcome sweep size: product over locations of (1 + joint values).
    double work = 1.0;
    for (const Location& l : s.locations) {
      double values = 1.0;
      for (std::size_t f : l.features)
        values *= static_cast<double>(s.features[f].n_values());
      work *= 1.0 + values;
    }
    if (work > static_cast<double>(config.max_nonadaptive_work))
      throw StateSpaceTooLargeError(
          "brute_force_optimal_nonadaptive: outcome sweep of ~" +
          std::to_string(work) + " nodes exceeds the work budget");
  }
  const std::vector<double> subset_loss = DisjointLocationFeatures(s)
                                              ? SubsetLossSweep(s).Run()
                                              : SubsetLossesByUnion(s);

  // comp[mask][last]: cheapest way to observe every location in `mask`
  // starting from location 0, ending at `last` (which must be in mask).
  const std::size_t n_masks = std::size_t{1} << m;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> comp(n_masks,
                                        std::vector<double>(m, kInf));
  for (std::size_t l = 0; l < m; ++l)
    comp[std::size_t{1} << l][l] = s.visit_cost(l, 0);
  for (Mask mask = 1; mask < n_masks; ++mask) {
    for (std::size_t last = 0; last < m; ++last) {
      const double base = comp[mask][last];
      if (base == kInf || !(mask & (Mask{1} << last))) continue;
      for (std::size_t next = 0; next < m; ++next) {
        if (mask & (Mask{1} << next)) continue;
        const Mask ext = mask | (Mask{1} << next);
        const double cost = base + s.visit_cost(next, last);
        if (cost < comp[ext][next]) comp[ext][next] = cost;
      }
    }
  }
  auto mask_cost = [&](Mask mask) {
    if (mask == 0) return 0.0;
    double best = kInf;
    for (std::size_t last = 0; last < m; ++last)
      best = std::min(best, comp[mask][last]);
    return best;
  };

  // Lexicographically smallest minimum-cost order of `mask`: grow from the
  // front, always taking the smallest location whose completion still meets
  // the optimum. Completion costs from an arbitrary head are rebuilt from
  // comp by reversing the remaining tour — instead we recompute a forward
  // table keyed on (remaining set, head) on demand; masks are small.
  auto reconstruct = [&](Mask mask) {
    std::vector<std::size_t> order;
    // comp2[remaining][head]: cheapest completion observing `remaining`
    // starting at `head`. Memoized recursion.
    std::unordered_map<std::uint64_t, double> memo;
    auto completion = [&](auto&& self, Mask remaining,
                          std::size_t head) -> double {
      if (remaining == 0) return 0.0;
      const std::uint64_t key =
          (static_cast<std::uint64_t>(remaining) << 8) | head;
      if (auto it = memo.find(key); it != memo.end()) return it->second;
      double best = kInf;
      for (std::size_t l = 0; l < m; ++l) {
        if (!(remaining & (Mask{1} << l))) continue;
        const double c =
            s.visit_cost(l, head) + self(self, remaining & ~(Mask{1} << l), l);
        if (c < best) best = c;
      }
      memo.emplace(key, best);
      return best;
    };
    Mask remaining = mask;
    std::size_t head = 0;
    while (remaining != 0) {
      const double target = completion(completion, remaining, head);
      for (std::size_t l = 0; l < m; ++l) {
        if (!(remaining & (Mask{1} << l))) continue;
        if (s.visit_cost(l, head) +
                completion(completion, remaining & ~(Mask{1} << l), l) ==
            target) {
          order.push_back(l);
          remaining &= ~(Mask{1} << l);
          head = l;
          break;
        }
      }
    }
    return order;
  };

  Mask best_mask = 0;
  double best_cost = kInf;
  bool feasible = false;
  double best_achievable = kInf;
  std::vector<std::size_t> best_order;
  for (Mask mask = 0; mask < n_masks; ++mask) {
    best_achievable = std::min(best_achievable, subset_loss[mask]);
    if (subset_loss[mask] > tau) continue;
    const double cost = mask_cost(mask);
    const int size = std::popcount(mask);
    if (!feasible || cost < best_cost ||
        (cost == best_cost && size < std::popcount(best_mask))) {
      feasible = true;
      best_cost = cost;
      best_mask = mask;
      best_order = reconstruct(mask);
    } else if (cost == best_cost && size == std::popcount(best_mask)) {
      std::vector<std::size_t> order = reconstruct(mask);
      if (order < best_order) {
        best_mask = mask;
        best_order = std::move(order);
      }
    }
  }
  if (!feasible)
    throw InfeasibleError(
        "brute_force_optimal_nonadaptive: no fixed order reaches expected "
        "loss <= " +
            std::to_string(tau) + "; best achievable is " +
            std::to_string(best_achievable),
        best_achievable);

  NonAdaptivePlan plan;
  plan.order = std::move(best_order);
  plan.expected_cost = best_mask == 0 ? 0.0 : best_cost;
  plan.expected_loss = subset_loss[best_mask];
  return plan;
}

}  // namespace viewplan
