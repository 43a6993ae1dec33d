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
// Posterior maintenance and the information/risk quantities that drive the
// planners: recursive Bayes updates over observed features, Shannon entropy,
// expected information gain of locations (single and joint), Bayes risk and
// the loss-weighted maximum a posteriori decision.

#ifndef VIEWPLAN_BELIEF_HPP_
#define VIEWPLAN_BELIEF_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "viewplan/model.hpp"

namespace viewplan {

// One observed feature value.
struct Observation {
  std::size_t feature;
  std::size_t value;

  friend bool operator==(const Observation&, const Observation&) = default;
};

// A posterior over hypotheses together with the observations that produced
// it. `probs` is normalized; `history` holds at most one entry per feature
// unless updates were made with allow_refresh.
struct Belief {
  std::vector<double> probs;
  std::vector<Observation> history;

  bool has_feature(std::size_t feature) const {
    for (const auto& o : history)
      if (o.feature == feature) return true;
    return false;
  }
};

// Uniformly small probability mass below which joint evidence is treated as
// impossible.
inline constexpr double kEvidenceFloor = 1e-300;

// Exact joint-outcome enumeration is used while the outcome space has at
// most this many elements; beyond it estimators fall back to sampling.
inline constexpr std::size_t kOutcomeEnumCap = 4096;

// Sample count for the Monte Carlo information gain estimator.
inline constexpr std::size_t kIgSampleCount = 2048;

// Belief over the scenario prior with empty history.
Belief make_prior_belief(const Scenario& scenario);

// Recursive Bayes update with a batch of observations. Throws
// DuplicateFeatureError if a feature repeats within the batch or against the
// history (unless allow_refresh, which treats the new sample as independent
// evidence), and ImpossibleEvidenceError when the joint evidence mass falls
// below kEvidenceFloor.
Belief update(const Scenario& scenario, const Belief& belief,
              std::span<const Observation> observations,
              bool allow_refresh = false);

// Shannon entropy in bits with the 0 log 0 = 0 convention.
double entropy_bits(std::span<const double> probs);
double entropy_bits(const Belief& belief);

// Tuning knobs for expected information gain estimation.
struct IgOptions {
  std::size_t outcome_enum_cap = kOutcomeEnumCap;
  std::size_t sample_count = kIgSampleCount;
  // When false, outcome spaces beyond the cap raise OutcomeSpaceTooLargeError
  // instead of switching to the sampling estimator.
  bool allow_sampling = true;
};

// Expected entropy reduction from visiting `location`: features of the
// location already present in the belief history contribute nothing. Exact
// when the joint outcome space of the new features fits the enumeration cap,
// otherwise estimated with a deterministically seeded sampler. Never
// negative.
double expected_information_gain(const Scenario& scenario,
                                 const Belief& belief, std::size_t location,
                                 const IgOptions& options = {});

// Joint expected entropy reduction of visiting a set of locations (union of
// their unseen features). Exact only; throws OutcomeSpaceTooLargeError when
// the joint outcome space exceeds the cap and options.allow_sampling is
// false, otherwise falls back to the sampling estimator.
double expected_information_gain_set(const Scenario& scenario,
                                     const Belief& belief,
                                     std::span<const std::size_t> locations,
                                     const IgOptions& options = {});

// Minimum over decisions of the expected loss under `belief`.
double bayes_risk(const Scenario& scenario, const Belief& belief);

// The loss-weighted decision: argmin over d of sum_h belief[h] * loss[d][h],
// lowest index on ties.
std::size_t map_decision(const Scenario& scenario, const Belief& belief);

// Number of hypotheses consistent with every observation in `history`
// (positive cpt probability for each observed value). Requires a noiseless
// scenario; throws NotNoiselessError otherwise.
std::size_t version_space_count(const Scenario& scenario,
                                std::span<const Observation> history);

}  // namespace viewplan

#endif  // VIEWPLAN_BELIEF_HPP_
