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
// Scenario generators: a binary halving family with a provable gap between
// adaptive and non-adaptive sensing, random noisy instances, and a
// viewpoint-classification family with face/edge/vertex style view tiers.
// Plus a smooth spatial interpolator for view informativeness maps.

#ifndef VIEWPLAN_SCENARIOS_HPP_
#define VIEWPLAN_SCENARIOS_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "viewplan/model.hpp"

namespace viewplan {

// Hard instance family on n hypotheses (n a power of two, >= 4) with a
// uniform prior and n-1 binary features arranged as the internal nodes of a
// complete binary tree over the hypothesis range: the feature for interval
// [a,b) reads 1 on the left half, 0 on the right half, and is an even coin
// toss outside [a,b). One location per feature, every observation costs
// `unit_cost`, 0/1 loss, tau = 0. Adaptive halving identifies the truth in
// log2(n) observations while any fixed order needs n-1.
Scenario make_theorem1_instance(std::size_t n, double unit_cost = 1.0);

// Options for make_random_instance. `noise` is the probability that a
// feature reading deviates from its clean value (spread evenly over the
// other values); 0 gives a noiseless scenario, and for binary features 0.5
// makes every reading an even coin toss.
struct RandomInstanceOptions {
  std::size_t n_values = 2;
  bool unit_cost = false;        // all travel costs 1 instead of random
  bool random_prior = false;     // random normalized prior instead of uniform
  // Redraw (then derandomize) clean values until every hypothesis has a
  // distinct clean feature signature. Requires n_values^n_features >=
  // n_hypotheses.
  bool ensure_separable = false;
  double tau = 0.0;
};

Scenario make_random_instance(std::size_t n_hypotheses,
                              std::size_t n_features,
                              std::size_t n_locations, double noise,
                              std::uint64_t seed,
                              const RandomInstanceOptions& options = {});

// Per-view correspondence count statistics driving the viewpoint
// classification generator: the count feature observed at view v under
// class c is an 8-bin discretized bell curve centered at mean_counts[v][c]
// with spread sigma[v].
struct CorrespondenceProfile {
  std::string name;
  std::vector<std::vector<double>> mean_counts;  // [view][class]
  std::vector<double> sigma;                     // [view]

  std::size_t n_views() const { return mean_counts.size(); }
};

// The synthetic built-in profile ("platonic-default"): views cycle through
// three informativeness tiers — flat views whose counts are identically
// distributed under every class (zero gain), pair views that separate one
// pair of classes from the rest (and weakly within the pair), and spike
// views that single out one class. `seed` adds mild per-view jitter to the
// means so repeated calls with different seeds vary; flat views stay exactly
// uninformative because the jitter is shared across classes.
CorrespondenceProfile default_correspondence_profile(std::size_t n_classes,
                                                     std::size_t n_views,
                                                     std::uint64_t seed);

// Reads a profile from a json file of the form
// {"correspondence_profile": {"name": ..., "mean_counts": [[...]],
//  "sigma": [...]}}. Throws ParseError on malformed documents.
CorrespondenceProfile load_correspondence_profile(const std::string& path);

// Viewpoint classification instance: `n_views` camera poses on a unit
// circle, each revealing one 8-bin count feature distributed per the
// profile. Unit travel costs, 0/1 loss, tau = 0. The profile must cover
// n_views views and n_classes classes.
Scenario make_polyhedra_like_instance(std::size_t n_classes,
                                      std::size_t n_views,
                                      const CorrespondenceProfile& profile,
                                      std::uint64_t seed);

// Same with the built-in profile for (n_classes, n_views, seed).
Scenario make_polyhedra_like_instance(std::size_t n_classes = 5,
                                      std::size_t n_views = 24,
                                      std::uint64_t seed = 1);

// Squared-exponential (RBF) interpolation of scalar samples at known
// coordinates: weight exp(-|q - x_i|^2 / (2 length_scale^2)). Falls back to
// the nearest sample when every weight underflows. Coordinates must share
// one dimensionality.
double interpolate_informativeness(
    const std::vector<std::vector<double>>& points,
    const std::vector<double>& values, const std::vector<double>& query,
    double length_scale);

}  // namespace viewplan

#endif  // VIEWPLAN_SCENARIOS_HPP_
