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
// Problem model: a finite set of hypotheses with a prior, discrete sensed
// features with per-hypothesis outcome distributions, and sensing locations
// that each reveal a fixed subset of features at a travel dependent cost.

#ifndef VIEWPLAN_MODEL_HPP_
#define VIEWPLAN_MODEL_HPP_

#include <cstddef>
#include <string>
#include <vector>

namespace viewplan {

// A discrete feature. `cpt[h][v]` is the probability that the feature takes
// value `v` when hypothesis `h` is true; each row sums to one.
struct Feature {
  std::string name;
  std::vector<std::string> values;
  std::vector<std::vector<double>> cpt;

  std::size_t n_values() const { return values.size(); }
};

// A sensing location. Visiting it reveals one sample of every feature listed
// in `features` (indices into Scenario::features). `coords` is optional
// metadata (empty, 2d or 3d) used by generators and interpolation helpers.
struct Location {
  std::string name;
  std::vector<std::size_t> features;
  std::vector<double> coords;
};

// A complete problem instance.
//
// Conventions used throughout the library:
//   * `travel_cost[i][j]` is the cost of observing location i while the
//     sensor currently sits at location j; the diagonal holds the cost of
//     re-observing without moving.
//   * `loss[d][h]` is the penalty for declaring hypothesis d when h is true.
//   * `tau` is the expected-loss threshold below which it is acceptable to
//     stop sensing and declare.
struct Scenario {
  std::vector<std::string> hypotheses;
  std::vector<double> prior;
  std::vector<Feature> features;
  std::vector<Location> locations;
  std::vector<std::vector<double>> travel_cost;
  std::vector<std::vector<double>> loss;
  double tau = 0.05;

  std::size_t n_hypotheses() const { return hypotheses.size(); }
  std::size_t n_features() const { return features.size(); }
  std::size_t n_locations() const { return locations.size(); }

  // Cost of observing `target` from `from` (see travel_cost convention).
  double visit_cost(std::size_t target, std::size_t from) const {
    return travel_cost[target][from];
  }
};

// Returns one message per violated structural rule; empty means valid.
// Checked rules include: at least two hypotheses, a normalized prior,
// unique names, stochastic cpt rows of shape [hypotheses x values], at
// least one feature per location with in-range indices, a square
// non-negative travel cost matrix, a square non-negative loss matrix and a
// finite non-negative threshold.
std::vector<std::string> validate(const Scenario& scenario);

// Throws ValidationError when validate() reports any violation.
void validate_or_throw(const Scenario& scenario);

// True when every cpt entry is exactly 0 or 1, i.e. features are a
// deterministic function of the hypothesis.
bool is_noiseless(const Scenario& scenario);

// Json (de)serialization. load_scenario throws ParseError on malformed
// documents and ValidationError on well formed but invalid scenarios.
// save -> load is an identity on valid scenarios.
Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& scenario, const std::string& path);
Scenario scenario_from_json_text(const std::string& text);
std::string scenario_to_json_text(const Scenario& scenario);

}  // namespace viewplan

#endif  // VIEWPLAN_MODEL_HPP_
