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

#include "viewplan/sim.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <thread>
#include <vector>

#include "viewplan/errors.hpp"
#include "viewplan/rng.hpp"

namespace viewplan {
namespace {

// Episodes worth launching worker threads for.
constexpr std::size_t kParallelThreshold = 256;

double SampleStddev(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double acc = 0.0;
  for (double x : xs) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

// Runs fn(i) for i in [0, count), in parallel for large counts. fn must only
// touch its own index's state.
template <typename Fn>
void ForEachIndex(std::size_t count, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(
      std::max(1u, std::thread::hardware_concurrency()), 16);
  if (count < kParallelThreshold || workers < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::future<void>> futures;
  futures.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    futures.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < count; i += workers) fn(i);
    }));
  }
  for (auto& f : futures) f.get();
}

struct PrefixView {
  double entropy = 0.0;
  bool correct = false;
};

// Episode state at observation budget b (1-based); budgets past the episode
// length carry the final state forward.
PrefixView AtBudget(const EpisodeRecord& record, std::size_t budget) {
  if (budget >= 1 && budget <= record.steps.size()) {
    const StepRecord& s = record.steps[budget - 1];
    return {s.entropy_bits, s.map_decision == record.true_hypothesis};
  }
  return {record.final_entropy_bits, record.correct};
}

}  // namespace

EpisodeRecord run_episode(const Scenario& s, const Policy& policy,
                          std::uint64_t seed, std::size_t max_steps,
                          const PlannerConfig& config,
                          std::optional<std::size_t> forced_hypothesis,
                          const std::string& scenario_id) {
  Rng rng(seed);
  // World draws come first and in a fixed order so that every policy sees
  // the same world for the same seed (paired comparisons).
  const std::size_t true_h =
      forced_hypothesis ? *forced_hypothesis : rng.SampleWeighted(s.prior);
  if (true_h >= s.n_hypotheses())
    throw std::out_of_range("run_episode: hypothesis index out of range");
  std::vector<std::size_t> world(s.n_features());
  for (std::size_t f = 0; f < s.n_features(); ++f)
    world[f] = rng.SampleWeighted(s.features[f].cpt[true_h]);

  EpisodeRecord record;
  record.scenario_id = scenario_id;
  record.policy = policy.name();
  record.seed = seed;
  record.true_hypothesis = true_h;

  Belief belief = make_prior_belief(s);
  std::vector<bool> visited(s.n_locations(), false);
  std::size_t current = 0;
  double cost = 0.0;
  std::size_t decision = 0;

  for (;;) {
    if (record.steps.size() >= max_steps) {
      decision = map_decision(s, belief);
      break;
    }
    const PolicyAction act = policy.step(s, belief, current, visited, rng);
    if (act.is_stop()) {
      decision = act.index;
      break;
    }
    const std::size_t l = act.index;

    std::vector<Observation> observations;
    for (std::size_t f : s.locations[l].features) {
      if (!belief.has_feature(f)) {
        observations.push_back({f, world[f]});
      } else if (config.allow_revisit) {
        // Fresh independent realization for a repeat observation.
        observations.push_back({f, rng.SampleWeighted(s.features[f].cpt[true_h])});
      }
    }
    std::sort(observations.begin(), observations.end(),
              [](const Observation& a, const Observation& b) {
                return a.feature < b.feature;
              });
    if (!observations.empty())
      belief = update(s, belief, observations, config.allow_revisit);

    cost += s.visit_cost(l, current);
    current = l;
    visited[l] = true;
    record.steps.push_back({l, std::move(observations), entropy_bits(belief),
                            cost, map_decision(s, belief)});
  }

  record.decision = decision;
  record.loss = s.loss[decision][true_h];
  record.correct = decision == true_h;
  record.final_entropy_bits = entropy_bits(belief);
  record.total_cost = cost;
  return record;
}

RunSummary monte_carlo(const Scenario& s, const Policy& policy,
                       std::size_t episodes, std::uint64_t base_seed,
                       std::size_t max_steps, const PlannerConfig& config,
                       const std::string& scenario_id,
                       std::vector<EpisodeRecord>* records) {
  std::vector<EpisodeRecord> all(episodes);
  ForEachIndex(episodes, [&](std::size_t i) {
    all[i] = run_episode(s, policy, MixSeed(base_seed, i), max_steps, config,
                         {}, scenario_id);
  });

  RunSummary summary;
  summary.policy = policy.name();
  summary.episodes = episodes;
  const double h_prior = entropy_bits(s.prior);

  std::vector<double> costs, losses;
  costs.reserve(episodes);
  losses.reserve(episodes);
  double steps_total = 0.0, entropy_total = 0.0, correct_total = 0.0;
  std::vector<double> ig_total(max_steps, 0.0), correct_at(max_steps, 0.0);
  for (const EpisodeRecord& r : all) {
    costs.push_back(r.total_cost);
    losses.push_back(r.loss);
    steps_total += static_cast<double>(r.steps.size());
    entropy_total += r.final_entropy_bits;
    correct_total += r.correct ? 1.0 : 0.0;
    for (std::size_t b = 1; b <= max_steps; ++b) {
      const PrefixView view = AtBudget(r, b);
      ig_total[b - 1] += std::max(h_prior - view.entropy, 0.0);
      correct_at[b - 1] += view.correct ? 1.0 : 0.0;
    }
  }
  const double n = episodes > 0 ? static_cast<double>(episodes) : 1.0;
  for (double c : costs) summary.mean_cost += c / n;
  for (double l : losses) summary.mean_loss += l / n;
  summary.stddev_cost = SampleStddev(costs, summary.mean_cost);
  summary.stddev_loss = SampleStddev(losses, summary.mean_loss);
  summary.accuracy = correct_total / n;
  summary.mean_steps = steps_total / n;
  summary.mean_final_entropy_bits = entropy_total / n;
  summary.ig_curve.resize(max_steps);
  summary.accuracy_curve.resize(max_steps);
  for (std::size_t b = 0; b < max_steps; ++b) {
    summary.ig_curve[b] = ig_total[b] / n;
    summary.accuracy_curve[b] = correct_at[b] / n;
  }

  if (records != nullptr) *records = std::move(all);
  return summary;
}

namespace {

// Per-episode agreement samples between the greedy IG choice and the greedy
// one-step-risk choice along an adaptive IG trajectory.
std::vector<bool> AgreementFlags(const Scenario& s, std::uint64_t seed,
                                 std::size_t max_steps,
                                 const PlannerConfig& config) {
  Rng rng(seed);
  const std::size_t true_h = rng.SampleWeighted(s.prior);
  std::vector<std::size_t> world(s.n_features());
  for (std::size_t f = 0; f < s.n_features(); ++f)
    world[f] = rng.SampleWeighted(s.features[f].cpt[true_h]);

  PlannerConfig greedy_config = config;
  greedy_config.tau = 0.0;
  greedy_config.allow_revisit = false;
  const IgOptions ig_options = greedy_config.ig_options();

  Belief belief = make_prior_belief(s);
  std::vector<bool> visited(s.n_locations(), false);
  std::size_t current = 0;
  std::vector<bool> flags;

  for (std::size_t step = 0; step < max_steps; ++step) {
    if (bayes_risk(s, belief) <= 0.0) break;

    // One-step expected posterior risk per candidate, by exact enumeration.
    std::size_t ig_pick = s.n_locations(), risk_pick = s.n_locations();
    double best_ig = -std::numeric_limits<double>::infinity();
    double best_risk = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < s.n_locations(); ++l) {
      if (visited[l]) continue;
      const double gain = expected_information_gain(s, belief, l, ig_options);
      if (gain > best_ig) {
        best_ig = gain;
        ig_pick = l;
      }
      std::vector<std::size_t> fresh;
      for (std::size_t f : s.locations[l].features)
        if (!belief.has_feature(f)) fresh.push_back(f);
      std::sort(fresh.begin(), fresh.end());
      double risk = 0.0;
      if (fresh.empty()) {
        risk = bayes_risk(s, belief);
      } else {
        const std::size_t n = belief.probs.size();
        std::size_t total = 1;
        for (std::size_t f : fresh) total *= s.features[f].n_values();
        std::vector<std::size_t> digits(fresh.size(), 0);
        std::vector<double> post(n);
        for (std::size_t rank = 0; rank < total; ++rank) {
          double mass = 0.0;
          for (std::size_t h = 0; h < n; ++h) {
            double w = belief.probs[h];
            for (std::size_t i = 0; i < fresh.size() && w > 0.0; ++i)
              w *= s.features[fresh[i]].cpt[h][digits[i]];
            post[h] = w;
            mass += w;
          }
          if (mass > 0.0) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t d = 0; d < n; ++d) {
              double dl = 0.0;
              for (std::size_t h = 0; h < n; ++h)
                dl += post[h] * s.loss[d][h];
              best = std::min(best, dl);
            }
            risk += best;  // mass folded into the unnormalized posterior
          }
          for (std::size_t i = fresh.size(); i-- > 0;) {
            if (++digits[i] < s.features[fresh[i]].n_values()) break;
            digits[i] = 0;
          }
        }
      }
      if (risk < best_risk) {
        best_risk = risk;
        risk_pick = l;
      }
    }
    if (ig_pick == s.n_locations()) break;  // no candidates left
    flags.push_back(ig_pick == risk_pick);

    // Follow the IG trajectory.
    std::vector<Observation> observations;
    for (std::size_t f : s.locations[ig_pick].features)
      if (!belief.has_feature(f)) observations.push_back({f, world[f]});
    std::sort(observations.begin(), observations.end(),
              [](const Observation& a, const Observation& b) {
                return a.feature < b.feature;
              });
    if (!observations.empty()) belief = update(s, belief, observations);
    visited[ig_pick] = true;
    current = ig_pick;
    (void)current;
  }
  return flags;
}

}  // namespace

ComparisonTable compare_policies(const Scenario& s,
                                 const std::vector<const Policy*>& policies,
                                 std::size_t episodes, std::uint64_t base_seed,
                                 const std::vector<std::size_t>& budgets,
                                 const PlannerConfig& config) {
  ComparisonTable table;
  for (const Policy* p : policies) table.policies.push_back(p->name());
  if (budgets.empty() || policies.empty()) return table;
  const std::size_t max_budget =
      *std::max_element(budgets.begin(), budgets.end());
  const double h_prior = entropy_bits(s.prior);

  // Trajectories per (policy, episode), plus agreement flags per episode.
  std::vector<std::vector<EpisodeRecord>> runs(policies.size());
  for (auto& r : runs) r.resize(episodes);
  std::vector<std::vector<bool>> agreement(episodes);
  ForEachIndex(episodes, [&](std::size_t i) {
    const std::uint64_t seed = MixSeed(base_seed, i);
    for (std::size_t p = 0; p < policies.size(); ++p)
      runs[p][i] =
          run_episode(s, *policies[p], seed, max_budget, config, {}, "");
    agreement[i] = AgreementFlags(s, seed, max_budget, config);
  });

  for (std::size_t budget : budgets) {
    ComparisonRow row;
    row.budget = budget;
    for (std::size_t p = 0; p < policies.size(); ++p) {
      double correct = 0.0;
      std::vector<double> gains(episodes, 0.0);
      for (std::size_t i = 0; i < episodes; ++i) {
        const PrefixView view = AtBudget(runs[p][i], budget);
        correct += view.correct ? 1.0 : 0.0;
        gains[i] = std::max(h_prior - view.entropy, 0.0);
      }
      const double n = episodes > 0 ? static_cast<double>(episodes) : 1.0;
      double mean = 0.0;
      for (double g : gains) mean += g / n;
      row.accuracy.push_back(correct / n);
      row.metric_mean.push_back(mean);
      row.metric_std.push_back(SampleStddev(gains, mean));
    }
    std::size_t agree = 0, total = 0;
    for (const auto& flags : agreement) {
      const std::size_t upto = std::min(budget, flags.size());
      for (std::size_t t = 0; t < upto; ++t) {
        ++total;
        if (flags[t]) ++agree;
      }
    }
    row.ig_risk_agreement =
        total == 0 ? 1.0
                   : static_cast<double>(agree) / static_cast<double>(total);
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace viewplan
