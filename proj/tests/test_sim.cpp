#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstddef>
#include <set>
#include <vector>

#include "viewplan/belief.hpp"
#include "viewplan/model.hpp"
#include "viewplan/planner.hpp"
#include "viewplan/scenarios.hpp"
#include "viewplan/sim.hpp"

using namespace viewplan;

namespace {

PlannerConfig ZeroTau() {
  PlannerConfig config;
  config.tau = 0.0;
  return config;
}

}  // namespace

TEST_CASE("episodes are deterministic in the seed") {
  const Scenario s = make_polyhedra_like_instance(5, 24, 1);
  const PlannerConfig config = ZeroTau();
  const auto policy = make_policy("adaptive-ig", s, config);

  const EpisodeRecord a = run_episode(s, *policy, 77, 10, config);
  const EpisodeRecord b = run_episode(s, *policy, 77, 10, config);
  const EpisodeRecord c = run_episode(s, *policy, 78, 10, config);

  CHECK(a.true_hypothesis == b.true_hypothesis);
  CHECK(a.decision == b.decision);
  CHECK(a.total_cost == b.total_cost);
  REQUIRE(a.steps.size() == b.steps.size());
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    CHECK(a.steps[i].location == b.steps[i].location);
    CHECK(a.steps[i].observations == b.steps[i].observations);
    CHECK(a.steps[i].entropy_bits == b.steps[i].entropy_bits);
  }
  // A different seed eventually changes something observable.
  const bool differs = a.true_hypothesis != c.true_hypothesis ||
                       a.steps.size() != c.steps.size() ||
                       a.final_entropy_bits != c.final_entropy_bits;
  CHECK(differs);
}

TEST_CASE("forced hypotheses drive the sampled world") {
  const Scenario s = make_theorem1_instance(8);
  const PlannerConfig config = ZeroTau();
  const auto policy = make_policy("adaptive-ig", s, config);
  for (std::size_t h = 0; h < 8; ++h) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const EpisodeRecord r =
          run_episode(s, *policy, seed, s.n_locations(), config, h);
      CAPTURE(h);
      CAPTURE(seed);
      CHECK(r.true_hypothesis == h);
      CHECK(r.steps.size() == 3);  // log2(8) halving steps
      CHECK(r.decision == h);
      CHECK(r.loss == 0.0);
      CHECK(r.correct);
      CHECK(r.final_entropy_bits == 0.0);
      CHECK(r.total_cost == 3.0);
    }
  }
  CHECK_THROWS(run_episode(s, *policy, 0, 8, config, std::size_t{99}));
}

TEST_CASE("episode budgets force a declaration") {
  const Scenario s = make_theorem1_instance(8);
  const PlannerConfig config = ZeroTau();
  const auto policy = make_policy("adaptive-ig", s, config);
  const EpisodeRecord r = run_episode(s, *policy, 5, 1, config);
  CHECK(r.steps.size() == 1);
  // One halving observation cannot certify any of eight hypotheses.
  CHECK(r.final_entropy_bits > 0.0);
  CHECK(r.decision == r.steps.back().map_decision);
}

TEST_CASE("step records track costs and entropy along the trace") {
  const Scenario s = make_theorem1_instance(4);
  const PlannerConfig config = ZeroTau();
  const auto policy = make_policy("adaptive-ig", s, config);
  const EpisodeRecord r = run_episode(s, *policy, 9, 3, config);
  REQUIRE(r.steps.size() == 2);
  CHECK(r.steps[0].cumulative_cost == 1.0);
  CHECK(r.steps[1].cumulative_cost == 2.0);
  CHECK(r.steps[0].entropy_bits == 1.0);  // four -> two live hypotheses
  CHECK(r.steps[1].entropy_bits == 0.0);
  CHECK(r.total_cost == 2.0);
  // Each step revealed exactly the location's one feature.
  std::set<std::size_t> seen;
  for (const StepRecord& st : r.steps) {
    REQUIRE(st.observations.size() == 1);
    seen.insert(st.observations[0].feature);
  }
  CHECK(seen.size() == 2);
}

TEST_CASE("revisits resample features instead of repeating them") {
  // One location with one noisy feature: progress requires fresh draws.
  Scenario s;
  s.hypotheses = {"a", "b"};
  s.prior = {0.5, 0.5};
  s.features = {{"f", {"0", "1"}, {{0.1, 0.9}, {0.9, 0.1}}}};
  s.locations = {{"L0", {0}, {}}};
  s.travel_cost = {{1.0}};
  s.loss = {{0.0, 1.0}, {1.0, 0.0}};
  PlannerConfig config = ZeroTau();
  config.tau = 0.05;
  config.allow_revisit = true;
  const auto policy = make_policy("adaptive-ig", s, config);
  const EpisodeRecord r = run_episode(s, *policy, 3, 12, config);
  CHECK(r.steps.size() > 1);
  for (const StepRecord& st : r.steps) CHECK(st.location == 0);
  // Repeated noisy readings eventually pin the hypothesis down.
  CHECK(r.final_entropy_bits < 1.0);

  // Without the flag the episode stops after the single visit.
  PlannerConfig strict = ZeroTau();
  const auto once = make_policy("adaptive-ig", s, strict);
  const EpisodeRecord r2 = run_episode(s, *once, 3, 12, strict);
  CHECK(r2.steps.size() == 1);
}

TEST_CASE("monte carlo aggregation on the halving instance is exact") {
  const Scenario s = make_theorem1_instance(4);
  const PlannerConfig config = ZeroTau();
  const auto policy = make_policy("adaptive-ig", s, config);
  std::vector<EpisodeRecord> records;
  const RunSummary sum =
      monte_carlo(s, *policy, 64, 5, s.n_locations(), config, "t4", &records);
  CHECK(sum.policy == "adaptive-ig");
  CHECK(sum.episodes == 64);
  REQUIRE(records.size() == 64);
  CHECK(sum.mean_cost == 2.0);
  CHECK(sum.stddev_cost == 0.0);
  CHECK(sum.mean_loss == 0.0);
  CHECK(sum.accuracy == 1.0);
  CHECK(sum.mean_steps == 2.0);
  CHECK(sum.mean_final_entropy_bits == 0.0);
  REQUIRE(sum.ig_curve.size() == 3);
  REQUIRE(sum.accuracy_curve.size() == 3);
  // One halving step gains one bit; two resolve both bits; budget three
  // carries the final state forward.
  CHECK(sum.ig_curve[0] == 1.0);
  CHECK(sum.ig_curve[1] == 2.0);
  CHECK(sum.ig_curve[2] == 2.0);
  CHECK(sum.accuracy_curve[1] == 1.0);
  CHECK(sum.accuracy_curve[2] == 1.0);
  for (const EpisodeRecord& r : records) {
    CHECK(r.scenario_id == "t4");
    CHECK(r.policy == "adaptive-ig");
  }
  // A fresh run reproduces the records bit for bit.
  std::vector<EpisodeRecord> again;
  monte_carlo(s, *policy, 64, 5, s.n_locations(), config, "t4", &again);
  for (std::size_t i = 0; i < 64; ++i) {
    CHECK(records[i].seed == again[i].seed);
    CHECK(records[i].true_hypothesis == again[i].true_hypothesis);
    CHECK(records[i].total_cost == again[i].total_cost);
    CHECK(records[i].final_entropy_bits == again[i].final_entropy_bits);
  }
}

TEST_CASE("parallel batches equal small sequential batches per episode") {
  // 300 episodes exceeds the parallel threshold; episode i must still equal
  // a solo run with the same derived seed.
  const Scenario s = make_polyhedra_like_instance(2, 24, 1);
  const PlannerConfig config = ZeroTau();
  const auto policy = make_policy("adaptive-ig", s, config);
  std::vector<EpisodeRecord> batch;
  monte_carlo(s, *policy, 300, 11, 6, config, "", &batch);
  REQUIRE(batch.size() == 300);
  for (std::size_t i : {std::size_t{0}, std::size_t{137}, std::size_t{299}}) {
    const EpisodeRecord solo =
        run_episode(s, *policy, batch[i].seed, 6, config);
    CHECK(solo.true_hypothesis == batch[i].true_hypothesis);
    CHECK(solo.total_cost == batch[i].total_cost);
    CHECK(solo.final_entropy_bits == batch[i].final_entropy_bits);
    CHECK(solo.steps.size() == batch[i].steps.size());
  }
}

TEST_CASE("paired worlds: different policies see identical hypotheses") {
  const Scenario s = make_polyhedra_like_instance(5, 24, 1);
  const PlannerConfig config = ZeroTau();
  const auto a = make_policy("adaptive-ig", s, config);
  const auto b = make_policy("random", s, config);
  std::vector<EpisodeRecord> ra, rb;
  monte_carlo(s, *a, 50, 21, 8, config, "", &ra);
  monte_carlo(s, *b, 50, 21, 8, config, "", &rb);
  for (std::size_t i = 0; i < 50; ++i)
    CHECK(ra[i].true_hypothesis == rb[i].true_hypothesis);
}

TEST_CASE("comparison tables cover the requested budgets") {
  const Scenario s = make_polyhedra_like_instance(2, 24, 1);
  const PlannerConfig config = ZeroTau();
  const auto a = make_policy("adaptive-ig", s, config);
  const auto r = make_policy("random", s, config);
  const std::vector<const Policy*> policies = {a.get(), r.get()};
  const std::vector<std::size_t> budgets = {1, 3, 6};

  const ComparisonTable table =
      compare_policies(s, policies, 40, 13, budgets, config);
  CHECK(table.policies ==
        std::vector<std::string>{"adaptive-ig", "random"});
  REQUIRE(table.rows.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    const ComparisonRow& row = table.rows[i];
    CHECK(row.budget == budgets[i]);
    REQUIRE(row.accuracy.size() == 2);
    REQUIRE(row.metric_mean.size() == 2);
    REQUIRE(row.metric_std.size() == 2);
    for (double acc : row.accuracy) {
      CHECK(acc >= 0.0);
      CHECK(acc <= 1.0);
    }
    for (double m : row.metric_mean) CHECK(m >= 0.0);
    CHECK(row.ig_risk_agreement >= 0.0);
    CHECK(row.ig_risk_agreement <= 1.0);
  }
  // Larger budgets can only help the cumulative information gain.
  CHECK(table.rows[1].metric_mean[0] >= table.rows[0].metric_mean[0]);
  CHECK(table.rows[2].metric_mean[0] >= table.rows[1].metric_mean[0]);

  // Determinism of the full table.
  const ComparisonTable again =
      compare_policies(s, policies, 40, 13, budgets, config);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(again.rows[i].accuracy == table.rows[i].accuracy);
    CHECK(again.rows[i].metric_mean == table.rows[i].metric_mean);
    CHECK(again.rows[i].metric_std == table.rows[i].metric_std);
    CHECK(again.rows[i].ig_risk_agreement == table.rows[i].ig_risk_agreement);
  }
}

TEST_CASE("comparison also works on the halving family with exact values") {
  const Scenario s = make_theorem1_instance(4);
  const PlannerConfig config = ZeroTau();
  const auto a = make_policy("adaptive-ig", s, config);
  const auto n = make_policy("nonadaptive-ig", s, config);
  const std::vector<const Policy*> policies = {a.get(), n.get()};
  const std::vector<std::size_t> budgets = {1, 2, 3};
  const ComparisonTable table =
      compare_policies(s, policies, 32, 3, budgets, config);
  // With all three observations in, both policies always classify correctly.
  CHECK(table.rows[2].accuracy[0] == 1.0);
  CHECK(table.rows[2].accuracy[1] == 1.0);
  // The adaptive policy already resolves everything within two steps.
  CHECK(table.rows[1].accuracy[0] == 1.0);
  CHECK(table.rows[1].metric_mean[0] == 2.0);
}

TEST_CASE("a policy compared against itself yields identical column groups") {
  const Scenario s = make_polyhedra_like_instance(2, 8, 4);
  const PlannerConfig config = ZeroTau();
  const auto a = make_policy("adaptive-ig", s, config);
  const auto b = make_policy("adaptive-ig", s, config);
  const std::vector<const Policy*> policies = {a.get(), b.get()};
  const ComparisonTable table =
      compare_policies(s, policies, 25, 6, {2, 4, 8}, config);
  for (const ComparisonRow& row : table.rows) {
    CHECK(row.accuracy[0] == row.accuracy[1]);
    CHECK(row.metric_mean[0] == row.metric_mean[1]);
    CHECK(row.metric_std[0] == row.metric_std[1]);
  }
}

TEST_CASE("empirical mean loss converges to the exact policy evaluation") {
  // Noisy scenario with a loose threshold: declarations are sometimes wrong,
  // so the realized loss is a nontrivial random variable.
  const Scenario s = make_random_instance(3, 3, 3, 0.2, 77);
  PlannerConfig config;
  config.tau = 0.1;
  const auto policy = make_policy("adaptive-ig", s, config);

  const PolicyEvaluation exact =
      evaluate_policy_exact(s, *policy, s.n_locations(), config);
  const std::size_t n_runs = 10000;
  const RunSummary sum =
      monte_carlo(s, *policy, n_runs, 5, s.n_locations(), config);

  const double stderr_loss = sum.stddev_loss / std::sqrt(double(n_runs));
  REQUIRE(stderr_loss > 0.0);
  CHECK(std::abs(sum.mean_loss - exact.expected_loss) <= 4.0 * stderr_loss);
  CHECK(std::abs(sum.mean_cost - exact.expected_cost) <=
        4.0 * sum.stddev_cost / std::sqrt(double(n_runs)) + 1e-12);
}
