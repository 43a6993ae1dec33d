"""Smoke tests for the python bindings: every major operation is exercised
once against known-good values. Plain asserts, no test framework."""

import json
import math
import os
import tempfile

import viewplan as vp


def test_generators_and_model():
    s = vp.make_theorem1_instance(8)
    assert s.n_hypotheses == 8
    assert s.n_features == 7
    assert s.n_locations == 7
    assert vp.validate(s) == []
    assert not vp.is_noiseless(s)  # features are coin tosses off their range
    assert s.visit_cost(3, 0) == 1.0
    assert s.tau == 0.0

    text = vp.scenario_to_json_text(s)
    again = vp.scenario_from_json_text(text)
    assert vp.scenario_to_json_text(again) == text

    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "scenario.json")
        vp.save_scenario(s, path)
        loaded = vp.load_scenario(path)
        assert vp.scenario_to_json_text(loaded) == text

    r = vp.make_random_instance(3, 4, 4, 0.2, seed=7)
    assert vp.validate(r) == []

    opts = vp.RandomInstanceOptions()
    opts.ensure_separable = True
    opts.unit_cost = True
    sep = vp.make_random_instance(4, 3, 3, 0.0, seed=11, options=opts)
    assert vp.is_noiseless(sep)

    poly = vp.make_polyhedra_like_instance(5, 24, 1)
    assert poly.n_locations == 24
    assert len(poly.locations[0].coords) == 2


def test_validation_error_payload():
    s = vp.make_theorem1_instance(4)
    s.prior = [0.9, 0.9, 0.1, 0.1]
    problems = vp.validate(s)
    assert any("prior" in p for p in problems)
    try:
        vp.validate_or_throw(s)
    except vp.ValidationError as e:
        assert e.violations == problems
    else:
        raise AssertionError("expected ValidationError")


def test_belief_updates():
    s = vp.make_theorem1_instance(4)
    b = vp.make_prior_belief(s)
    assert b.probs == [0.25, 0.25, 0.25, 0.25]
    assert abs(vp.entropy_bits(b) - 2.0) < 1e-12

    # Root feature reads 1 on {0,1} and 0 on {2,3}.
    b1 = vp.update(s, b, [vp.Observation(0, 1)])
    assert max(abs(p - q) for p, q in zip(b1.probs, [0.5, 0.5, 0.0, 0.0])) < 1e-12
    assert b1.has_feature(0)
    assert abs(vp.entropy_bits(b1) - 1.0) < 1e-12

    gain = vp.expected_information_gain(s, b, 0)
    assert abs(gain - 1.0) < 1e-12
    joint = vp.expected_information_gain_set(s, b, [0, 1, 2])
    assert abs(joint - 2.0) < 1e-12

    assert vp.bayes_risk(s, b1) == 0.5
    assert vp.map_decision(s, b1) == 0

    try:
        vp.update(s, b1, [vp.Observation(0, 1)])
    except vp.DuplicateFeatureError:
        pass
    else:
        raise AssertionError("expected DuplicateFeatureError")


def test_policies_and_oracles():
    s = vp.make_theorem1_instance(8)
    config = vp.PlannerConfig()
    config.tau = 0.0

    tree = vp.brute_force_optimal(s, 0.0, config)
    assert tree.expected_cost() == 3.0
    assert tree.expected_loss() == 0.0
    root = tree.nodes[tree.root]
    assert not root.is_leaf and root.location == 0

    plan = vp.brute_force_optimal_nonadaptive(s, 0.0, config)
    assert plan.expected_cost == 7.0
    assert list(plan.order) == [0, 1, 2, 3, 4, 5, 6]

    policy = vp.make_policy("adaptive-ig", s, config)
    assert policy.name == "adaptive-ig"
    ev = vp.evaluate_policy_exact(s, policy, s.n_locations, config)
    assert ev.expected_cost == 3.0 and ev.expected_loss == 0.0
    ev_tree = vp.evaluate_policy_exact(s, tree)
    assert ev_tree.expected_cost == 3.0

    b = vp.make_prior_belief(s)
    action = vp.adaptive_greedy_step(s, b, 0, [False] * 7, config)
    assert action.is_visit() and action.index == 0
    assert vp.nonadaptive_greedy_order(s, 3, config) == [0, 1, 2]

    try:
        vp.make_policy("no-such-policy", s, config)
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError")


def test_infeasible_payload():
    s = vp.make_theorem1_instance(4)
    # Alias every location to the root feature: the pairs {0,1} and {2,3}
    # can then never be separated, so zero loss is out of reach.
    locations = s.locations
    for loc in locations:
        loc.features = [0]
    s.locations = locations
    config = vp.PlannerConfig()
    try:
        vp.brute_force_optimal(s, 0.0, config)
    except vp.InfeasibleError as e:
        assert e.best_achievable_loss > 0.0
    else:
        raise AssertionError("expected InfeasibleError")


def test_simulation():
    s = vp.make_theorem1_instance(8)
    config = vp.PlannerConfig()
    config.tau = 0.0
    policy = vp.make_policy("adaptive-ig", s, config)

    ep = vp.run_episode(s, policy, seed=5, max_steps=7, config=config,
                        forced_hypothesis=6)
    assert ep.true_hypothesis == 6
    assert ep.decision == 6 and ep.correct and ep.loss == 0.0
    assert len(ep.steps) == 3 and ep.total_cost == 3.0
    assert ep.steps[-1].entropy_bits == 0.0

    summary = vp.monte_carlo(s, policy, episodes=32, base_seed=9,
                             max_steps=7, config=config)
    assert summary.episodes == 32
    assert summary.accuracy == 1.0
    assert summary.mean_cost == 3.0
    assert len(summary.ig_curve) == 7

    again, records = vp.monte_carlo_records(s, policy, episodes=32,
                                            base_seed=9, max_steps=7,
                                            config=config)
    assert len(records) == 32
    assert again.mean_cost == summary.mean_cost
    assert records[4].seed != records[5].seed

    random_policy = vp.make_policy("random", s, config)
    table = vp.compare_policies(s, [policy, random_policy], episodes=40,
                                base_seed=3, budgets=[1, 2, 3], config=config)
    assert table.policies == ["adaptive-ig", "random"]
    assert [row.budget for row in table.rows] == [1, 2, 3]
    assert table.rows[2].accuracy[0] == 1.0  # halving finishes in 3 steps
    assert all(0.0 <= a <= 1.0 for row in table.rows for a in row.accuracy)


def test_interpolation():
    points = [[0.0, 0.0], [1.0, 0.0]]
    values = [1.0, 3.0]
    mid = vp.interpolate_informativeness(points, values, [0.5, 0.0], 0.5)
    assert abs(mid - 2.0) < 1e-9
    near = vp.interpolate_informativeness(points, values, [0.01, 0.0], 0.05)
    assert abs(near - 1.0) < 1e-6


def main():
    tests = [
        test_generators_and_model,
        test_validation_error_payload,
        test_belief_updates,
        test_policies_and_oracles,
        test_infeasible_payload,
        test_simulation,
        test_interpolation,
    ]
    for test in tests:
        test()
        print("ok:", test.__name__)
    print("all python smoke tests passed")


if __name__ == "__main__":
    main()
