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
// Episode simulation and Monte Carlo aggregation: run a policy against
// sampled worlds, collect per-step traces, and compare policies on paired
// worlds across observation budgets.

#ifndef VIEWPLAN_SIM_HPP_
#define VIEWPLAN_SIM_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "viewplan/belief.hpp"
#include "viewplan/model.hpp"
#include "viewplan/planner.hpp"

namespace viewplan {

// One executed observation with the resulting belief summary.
struct StepRecord {
  std::size_t location = 0;
  std::vector<Observation> observations;  // newly revealed features
  double entropy_bits = 0.0;              // posterior entropy after the step
  double cumulative_cost = 0.0;
  std::size_t map_decision = 0;           // declaration if forced to stop now
};

// Full trace of one episode.
struct EpisodeRecord {
  std::string scenario_id;
  std::string policy;
  std::uint64_t seed = 0;
  std::size_t true_hypothesis = 0;
  std::vector<StepRecord> steps;
  std::size_t decision = 0;
  double loss = 0.0;
  bool correct = false;
  double final_entropy_bits = 0.0;
  double total_cost = 0.0;
};

// Aggregates over a batch of episodes. The per-budget curves have one entry
// per observation budget 1..max_steps: mean information gain achieved within
// the budget and the fraction of episodes whose forced declaration at that
// budget is correct (episodes that stopped earlier carry their final state
// forward).
struct RunSummary {
  std::string policy;
  std::size_t episodes = 0;
  double mean_cost = 0.0;
  double stddev_cost = 0.0;
  double mean_loss = 0.0;
  double stddev_loss = 0.0;
  double accuracy = 0.0;
  double mean_steps = 0.0;
  double mean_final_entropy_bits = 0.0;
  std::vector<double> ig_curve;
  std::vector<double> accuracy_curve;
};

// Runs one episode: samples the true hypothesis from the prior (unless
// forced) and one value per feature up front, then steps the policy from
// location 0 until it stops, it runs out of steps (forced declaration), or
// max_steps is reached. With config.allow_revisit, repeat visits resample
// their features fresh. All randomness derives from `seed`.
EpisodeRecord run_episode(const Scenario& scenario, const Policy& policy,
                          std::uint64_t seed, std::size_t max_steps,
                          const PlannerConfig& config,
                          std::optional<std::size_t> forced_hypothesis = {},
                          const std::string& scenario_id = "");

// Runs `episodes` independent episodes (episode i uses MixSeed(base_seed,
// i)) and aggregates. The aggregation is a fixed-order reduction over the
// episode index, so results are identical regardless of execution order or
// parallelism.
RunSummary monte_carlo(const Scenario& scenario, const Policy& policy,
                       std::size_t episodes, std::uint64_t base_seed,
                       std::size_t max_steps, const PlannerConfig& config,
                       const std::string& scenario_id = "",
                       std::vector<EpisodeRecord>* records = nullptr);

// Policy comparison table on paired worlds: row per budget, and per policy
// the accuracy of the forced declaration within that budget, plus mean and
// stddev of the information gain achieved within it.
struct ComparisonRow {
  std::size_t budget = 0;
  std::vector<double> accuracy;     // aligned with ComparisonTable::policies
  std::vector<double> metric_mean;  // information gain, bits
  std::vector<double> metric_std;
  // Fraction of steps within this budget, along a dedicated greedy
  // information gain trajectory per episode, where the one-step expected-risk
  // minimizer picks the same location as the information gain maximizer.
  double ig_risk_agreement = 0.0;
};

struct ComparisonTable {
  std::vector<std::string> policies;
  std::vector<ComparisonRow> rows;
};

// Runs every policy against the same `episodes` sampled worlds (same true
// hypothesis and feature realizations per episode index) with stopping
// disabled (tau forced to 0 and declarations forced at the budget), one
// table row per requested budget. The agreement column is measured along a
// dedicated greedy information gain trajectory per episode, independent of
// the policy list.
ComparisonTable compare_policies(const Scenario& scenario,
                                 const std::vector<const Policy*>& policies,
                                 std::size_t episodes, std::uint64_t base_seed,
                                 const std::vector<std::size_t>& budgets,
                                 const PlannerConfig& config);

}  // namespace viewplan

#endif  // VIEWPLAN_SIM_HPP_
