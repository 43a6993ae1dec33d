#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <set>
#include <utility>
#include <vector>

#include "viewplan/belief.hpp"
#include "viewplan/errors.hpp"
#include "viewplan/model.hpp"
#include "viewplan/planner.hpp"
#include "viewplan/scenarios.hpp"

using namespace viewplan;

namespace {

double MinDecisionLoss(const Scenario& s, const std::vector<double>& probs) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t d = 0; d < s.n_hypotheses(); ++d) {
    double loss = 0.0;
    for (std::size_t h = 0; h < probs.size(); ++h)
      loss += probs[h] * s.loss[d][h];
    best = std::min(best, loss);
  }
  return best;
}

// Reference enumeration of EVERY deterministic sensing policy from a state:
// no memoization, no dominance pruning, no location skipping. Each policy is
// summarized as (expected cost, expected loss). Exponential, for tiny
// instances only.
std::vector<std::pair<double, double>> AllPolicies(
    const Scenario& s, std::vector<bool>& visited,
    std::vector<bool>& realized, std::size_t current,
    const std::vector<double>& probs) {
  std::vector<std::pair<double, double>> out;
  out.push_back({0.0, MinDecisionLoss(s, probs)});  // stop now

  for (std::size_t l = 0; l < s.n_locations(); ++l) {
    if (visited[l]) continue;
    std::vector<std::size_t> fresh;
    for (std::size_t f : s.locations[l].features)
      if (!realized[f]) fresh.push_back(f);
    std::sort(fresh.begin(), fresh.end());

    std::size_t total = 1;
    for (std::size_t f : fresh) total *= s.features[f].n_values();

    visited[l] = true;
    for (std::size_t f : fresh) realized[f] = true;

    // Cartesian product of per-outcome sub-policy choices.
    std::vector<std::pair<double, double>> combos{
        {s.visit_cost(l, current), 0.0}};
    std::vector<std::size_t> digits(fresh.size(), 0);
    for (std::size_t rank = 0; rank < total; ++rank) {
      std::vector<double> post(probs.size());
      double mass = 0.0;
      for (std::size_t h = 0; h < probs.size(); ++h) {
        double w = probs[h];
        for (std::size_t i = 0; i < fresh.size(); ++i)
          w *= s.features[fresh[i]].cpt[h][digits[i]];
        post[h] = w;
        mass += w;
      }
      if (mass > 0.0) {
        for (double& p : post) p /= mass;
        const auto child = AllPolicies(s, visited, realized, l, post);
        std::vector<std::pair<double, double>> next;
        next.reserve(combos.size() * child.size());
        for (const auto& c : combos)
          for (const auto& q : child)
            next.push_back(
                {c.first + mass * q.first, c.second + mass * q.second});
        combos = std::move(next);
      }
      for (std::size_t i = fresh.size(); i-- > 0;) {
        if (++digits[i] < s.features[fresh[i]].n_values()) break;
        digits[i] = 0;
      }
    }

    visited[l] = false;
    for (std::size_t f : fresh) realized[f] = false;
    out.insert(out.end(), combos.begin(), combos.end());
  }
  return out;
}

struct ReferenceAnswer {
  bool feasible = false;
  double cost = 0.0;
  double best_loss = 0.0;
};

ReferenceAnswer ReferenceAdaptive(const Scenario& s, double tau) {
  std::vector<bool> visited(s.n_locations(), false);
  std::vector<bool> realized(s.n_features(), false);
  const auto all = AllPolicies(s, visited, realized, 0, s.prior);
  ReferenceAnswer ans;
  ans.best_loss = std::numeric_limits<double>::infinity();
  double best_cost = std::numeric_limits<double>::infinity();
  for (const auto& [cost, loss] : all) {
    ans.best_loss = std::min(ans.best_loss, loss);
    if (loss <= tau) {
      ans.feasible = true;
      best_cost = std::min(best_cost, cost);
    }
  }
  ans.cost = best_cost;
  return ans;
}

// Independent expected loss of observing a fixed location set and then
// declaring optimally: enumerate the joint outcomes of the union of the
// set's features.
double ReferenceSubsetLoss(const Scenario& s,
                           const std::vector<std::size_t>& subset) {
  std::set<std::size_t> union_features;
  for (std::size_t l : subset)
    union_features.insert(s.locations[l].features.begin(),
                          s.locations[l].features.end());
  const std::vector<std::size_t> fs(union_features.begin(),
                                    union_features.end());
  std::size_t total = 1;
  for (std::size_t f : fs) total *= s.features[f].n_values();

  double loss = 0.0;
  std::vector<std::size_t> digits(fs.size(), 0);
  for (std::size_t rank = 0; rank < total; ++rank) {
    std::vector<double> w(s.n_hypotheses());
    double mass = 0.0;
    for (std::size_t h = 0; h < s.n_hypotheses(); ++h) {
      w[h] = s.prior[h];
      for (std::size_t i = 0; i < fs.size(); ++i)
        w[h] *= s.features[fs[i]].cpt[h][digits[i]];
      mass += w[h];
    }
    if (mass > 0.0) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t d = 0; d < s.n_hypotheses(); ++d) {
        double dl = 0.0;
        for (std::size_t h = 0; h < s.n_hypotheses(); ++h)
          dl += w[h] * s.loss[d][h];
        best = std::min(best, dl);
      }
      loss += best;  // unnormalized weights already carry the outcome mass
    }
    for (std::size_t i = fs.size(); i-- > 0;) {
      if (++digits[i] < s.features[fs[i]].n_values()) break;
      digits[i] = 0;
    }
  }
  return loss;
}

struct ReferenceNonAdaptive {
  bool feasible = false;
  std::vector<std::size_t> order;
  double cost = 0.0;
  double loss = 0.0;
  double best_loss = 0.0;
};

ReferenceNonAdaptive ReferenceNonAdaptiveSolve(const Scenario& s, double tau) {
  const std::size_t m = s.n_locations();
  ReferenceNonAdaptive ans;
  ans.best_loss = std::numeric_limits<double>::infinity();
  ans.cost = std::numeric_limits<double>::infinity();

  std::vector<std::size_t> all(m);
  for (std::size_t i = 0; i < m; ++i) all[i] = i;

  for (std::size_t mask = 0; mask < (1u << m); ++mask) {
    std::vector<std::size_t> subset;
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (1u << i)) subset.push_back(i);
    const double loss = ReferenceSubsetLoss(s, subset);
    ans.best_loss = std::min(ans.best_loss, loss);
    if (loss > tau) continue;

    std::sort(subset.begin(), subset.end());
    do {  // every visiting order of this subset
      double cost = 0.0;
      std::size_t at = 0;
      for (std::size_t l : subset) {
        cost += s.visit_cost(l, at);
        at = l;
      }
      std::vector<std::size_t> as_set = subset;
      std::sort(as_set.begin(), as_set.end());
      const bool better =
          !ans.feasible || cost < ans.cost ||
          (cost == ans.cost && (subset.size() < ans.order.size() ||
                                (subset.size() == ans.order.size() &&
                                 as_set < ans.order)));
      if (better) {
        ans.feasible = true;
        ans.cost = cost;
        ans.loss = loss;
        ans.order = as_set;  // the chosen set; ans.cost is its best route
      }
    } while (std::next_permutation(subset.begin(), subset.end()));
  }
  return ans;
}

}  // namespace

TEST_CASE("adaptive oracle agrees with full policy enumeration") {
  PlannerConfig config;
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    RandomInstanceOptions opts;
    opts.n_values = 2;
    const double noise = (seed % 3 == 0) ? 0.0 : 0.2;
    const double tau = (seed % 2 == 0) ? 0.1 : 0.35;
    const Scenario s = make_random_instance(3, 3, 3, noise, seed, opts);
    const ReferenceAnswer ref = ReferenceAdaptive(s, tau);
    CAPTURE(seed);
    CAPTURE(noise);
    CAPTURE(tau);
    if (ref.feasible) {
      const PolicyTree tree = brute_force_optimal(s, tau, config);
      CHECK(tree.expected_cost() == doctest::Approx(ref.cost).epsilon(1e-9));
      CHECK(tree.expected_loss() <= tau);
      // The tree's claim is confirmed by exact replay.
      const PolicyEvaluation ev = evaluate_policy_exact(s, tree);
      CHECK(ev.expected_cost ==
            doctest::Approx(tree.expected_cost()).epsilon(1e-12));
      CHECK(ev.expected_loss ==
            doctest::Approx(tree.expected_loss()).epsilon(1e-12));
    } else {
      try {
        brute_force_optimal(s, tau, config);
        FAIL("expected InfeasibleError");
      } catch (const InfeasibleError& e) {
        CHECK(e.best_achievable_loss() ==
              doctest::Approx(ref.best_loss).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("adaptive oracle handles noiseless four-location instances") {
  PlannerConfig config;
  for (std::uint64_t seed = 20; seed <= 26; ++seed) {
    RandomInstanceOptions opts;
    opts.ensure_separable = true;
    const Scenario s = make_random_instance(4, 4, 4, 0.0, seed, opts);
    const ReferenceAnswer ref = ReferenceAdaptive(s, 0.0);
    REQUIRE(ref.feasible);  // separable noiseless instances always are
    const PolicyTree tree = brute_force_optimal(s, 0.0, config);
    CAPTURE(seed);
    CHECK(tree.expected_cost() == doctest::Approx(ref.cost).epsilon(1e-9));
    CHECK(tree.expected_loss() == 0.0);
  }
}

TEST_CASE("adaptive oracle with overlapping location features") {
  Scenario s;
  s.hypotheses = {"a", "b", "c"};
  s.prior = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  s.features = {
      {"f0", {"0", "1"}, {{0.0, 1.0}, {1.0, 0.0}, {1.0, 0.0}}},
      {"f1", {"0", "1"}, {{1.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}}},
      {"f2", {"0", "1"}, {{0.9, 0.1}, {0.1, 0.9}, {0.5, 0.5}}},
  };
  s.locations = {{"L0", {0, 1}, {}}, {"L1", {1, 2}, {}}, {"L2", {2, 0}, {}}};
  s.travel_cost = {{0.7, 1.3, 2.0}, {1.1, 0.4, 1.6}, {2.2, 0.9, 0.5}};
  s.loss = {{0.0, 1.0, 1.0}, {1.0, 0.0, 1.0}, {1.0, 1.0, 0.0}};

  PlannerConfig config;
  for (double tau : {0.0, 0.15}) {
    const ReferenceAnswer ref = ReferenceAdaptive(s, tau);
    REQUIRE(ref.feasible);
    const PolicyTree tree = brute_force_optimal(s, tau, config);
    CAPTURE(tau);
    CHECK(tree.expected_cost() == doctest::Approx(ref.cost).epsilon(1e-9));
  }
}

TEST_CASE("adaptive oracle on the halving family") {
  PlannerConfig config;
  const PolicyTree t4 = brute_force_optimal(make_theorem1_instance(4), 0.0,
                                            config);
  CHECK(t4.expected_cost() == 2.0);
  CHECK(t4.expected_loss() == 0.0);
  const PolicyTree t8 = brute_force_optimal(make_theorem1_instance(8), 0.0,
                                            config);
  CHECK(t8.expected_cost() == 3.0);
  CHECK(t8.expected_loss() == 0.0);
}

TEST_CASE("adaptive oracle reports infeasibility with the best reachable loss") {
  // A single dud feature cannot shrink the uniform prior.
  Scenario s;
  s.hypotheses = {"a", "b"};
  s.prior = {0.5, 0.5};
  s.features = {{"dud", {"0", "1"}, {{0.5, 0.5}, {0.5, 0.5}}}};
  s.locations = {{"L0", {0}, {}}};
  s.travel_cost = {{1.0}};
  s.loss = {{0.0, 1.0}, {1.0, 0.0}};
  PlannerConfig config;
  try {
    brute_force_optimal(s, 0.0, config);
    FAIL("expected InfeasibleError");
  } catch (const InfeasibleError& e) {
    CHECK(e.best_achievable_loss() == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("adaptive oracle state and width guards") {
  PlannerConfig config;
  config.max_oracle_states = 3;
  CHECK_THROWS_AS(
      brute_force_optimal(make_theorem1_instance(8), 0.0, config),
      StateSpaceTooLargeError);

  const Scenario wide = make_random_instance(2, 65, 65, 0.1, 1);
  PlannerConfig wide_config;
  CHECK_THROWS_AS(brute_force_optimal(wide, 0.5, wide_config),
                  StateSpaceTooLargeError);
}

TEST_CASE("non-adaptive oracle agrees with the permutation sweep") {
  PlannerConfig config;
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const double noise = (seed % 3 == 0) ? 0.0 : 0.25;
    const double tau = (seed % 2 == 0) ? 0.12 : 0.4;
    const Scenario s = make_random_instance(4, 5, 4, noise, seed);
    const ReferenceNonAdaptive ref = ReferenceNonAdaptiveSolve(s, tau);
    CAPTURE(seed);
    CAPTURE(noise);
    CAPTURE(tau);
    if (ref.feasible) {
      const NonAdaptivePlan plan =
          brute_force_optimal_nonadaptive(s, tau, config);
      CHECK(plan.expected_cost == doctest::Approx(ref.cost).epsilon(1e-9));
      CHECK(plan.expected_loss <= tau);
      // Random real costs make exact cost ties essentially impossible, so
      // the chosen set must match outright.
      std::vector<std::size_t> sorted = plan.order;
      std::sort(sorted.begin(), sorted.end());
      CHECK(sorted == ref.order);
    } else {
      try {
        brute_force_optimal_nonadaptive(s, tau, config);
        FAIL("expected InfeasibleError");
      } catch (const InfeasibleError& e) {
        CHECK(e.best_achievable_loss() ==
              doctest::Approx(ref.best_loss).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("non-adaptive oracle with shared features across locations") {
  Scenario s;
  s.hypotheses = {"a", "b", "c"};
  s.prior = {0.2, 0.5, 0.3};
  s.features = {
      {"f0", {"0", "1"}, {{0.0, 1.0}, {1.0, 0.0}, {1.0, 0.0}}},
      {"f1", {"0", "1"}, {{0.8, 0.2}, {0.3, 0.7}, {0.1, 0.9}}},
      {"f2", {"0", "1", "2"},
       {{0.6, 0.2, 0.2}, {0.2, 0.6, 0.2}, {0.2, 0.2, 0.6}}},
  };
  s.locations = {{"L0", {0, 1}, {}}, {"L1", {1, 2}, {}}, {"L2", {0, 2}, {}}};
  s.travel_cost = {{0.6, 1.7, 1.2}, {0.9, 0.3, 1.8}, {1.4, 1.1, 0.2}};
  s.loss = {{0.0, 2.0, 1.0}, {1.0, 0.0, 1.0}, {2.0, 1.0, 0.0}};

  PlannerConfig config;
  // Observing everything attains the floor (risk contracts with evidence),
  // so thresholds are placed relative to the full-set loss.
  const double floor = ReferenceSubsetLoss(s, {0, 1, 2});
  REQUIRE(floor > 0.0);  // noisy features leave residual confusion

  for (double tau : {floor + 0.02, floor + 0.25}) {
    const ReferenceNonAdaptive ref = ReferenceNonAdaptiveSolve(s, tau);
    CAPTURE(tau);
    REQUIRE(ref.feasible);
    const NonAdaptivePlan plan = brute_force_optimal_nonadaptive(s, tau, config);
    CHECK(plan.expected_cost == doctest::Approx(ref.cost).epsilon(1e-9));
    CHECK(plan.expected_loss == doctest::Approx(ref.loss).epsilon(1e-9));
  }

  // Below the floor both sides agree on infeasibility and on the floor.
  try {
    brute_force_optimal_nonadaptive(s, floor * 0.5, config);
    FAIL("expected InfeasibleError");
  } catch (const InfeasibleError& e) {
    CHECK(e.best_achievable_loss() == doctest::Approx(floor).epsilon(1e-9));
  }
}

TEST_CASE("non-adaptive oracle on the halving family needs every location") {
  PlannerConfig config;
  const NonAdaptivePlan p4 =
      brute_force_optimal_nonadaptive(make_theorem1_instance(4), 0.0, config);
  CHECK(p4.expected_cost == 3.0);
  CHECK(p4.expected_loss == 0.0);
  // Equal unit costs leave full ties; the contract picks the
  // lexicographically smallest order.
  CHECK(p4.order == std::vector<std::size_t>{0, 1, 2});

  const NonAdaptivePlan p8 =
      brute_force_optimal_nonadaptive(make_theorem1_instance(8), 0.0, config);
  CHECK(p8.expected_cost == 7.0);
}

TEST_CASE("non-adaptive tie breaking prefers fewer visits then lex order") {
  // Two interchangeable strong locations and one dud; stopping after either
  // strong location alone meets the threshold.
  Scenario s;
  s.hypotheses = {"a", "b"};
  s.prior = {0.5, 0.5};
  s.features = {
      {"f0", {"0", "1"}, {{0.0, 1.0}, {1.0, 0.0}}},
      {"f1", {"0", "1"}, {{0.0, 1.0}, {1.0, 0.0}}},
      {"dud", {"0", "1"}, {{0.5, 0.5}, {0.5, 0.5}}},
  };
  s.locations = {{"L0", {2}, {}}, {"L1", {0}, {}}, {"L2", {1}, {}}};
  s.travel_cost = std::vector<std::vector<double>>(3, std::vector<double>(3, 1.0));
  s.loss = {{0.0, 1.0}, {1.0, 0.0}};
  PlannerConfig config;
  const NonAdaptivePlan plan = brute_force_optimal_nonadaptive(s, 0.0, config);
  CHECK(plan.order == std::vector<std::size_t>{1});
  CHECK(plan.expected_cost == 1.0);
  CHECK(plan.expected_loss == 0.0);

  // An empty order is optimal when the prior already meets the threshold.
  const NonAdaptivePlan lazy = brute_force_optimal_nonadaptive(s, 0.5, config);
  CHECK(lazy.order.empty());
  CHECK(lazy.expected_cost == 0.0);
}

TEST_CASE("non-adaptive oracle resource guards") {
  PlannerConfig config;
  const Scenario big = make_random_instance(2, 19, 19, 0.1, 1);
  CHECK_THROWS_AS(brute_force_optimal_nonadaptive(big, 0.5, config),
                  StateSpaceTooLargeError);

  PlannerConfig tight;
  tight.max_nonadaptive_work = 5;
  CHECK_THROWS_AS(
      brute_force_optimal_nonadaptive(make_theorem1_instance(8), 0.0, tight),
      StateSpaceTooLargeError);
}

TEST_CASE("oracle rejects negative thresholds") {
  PlannerConfig config;
  const Scenario s = make_theorem1_instance(4);
  CHECK_THROWS_AS(brute_force_optimal(s, -0.1, config), std::invalid_argument);
  CHECK_THROWS_AS(brute_force_optimal_nonadaptive(s, -0.1, config),
                  std::invalid_argument);
}
