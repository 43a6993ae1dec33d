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

#include "viewplan/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "viewplan/errors.hpp"
#include "viewplan/rng.hpp"

namespace viewplan {
namespace {

constexpr std::size_t kCountBins = 8;

std::vector<std::vector<double>> UnitLoss(std::size_t n) {
  std::vector<std::vector<double>> loss(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i) loss[i][i] = 0.0;
  return loss;
}

bool IsPowerOfTwo(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Discretized bell curve over kCountBins integer bins; strictly positive.
std::vector<double> BinnedCounts(double mean, double sigma) {
  std::vector<double> row(kCountBins);
  double total = 0.0;
  for (std::size_t b = 0; b < kCountBins; ++b) {
    const double z = (static_cast<double>(b) - mean) / sigma;
    row[b] = std::exp(-0.5 * z * z);
    total += row[b];
  }
  for (double& p : row) p /= total;
  return row;
}

}  // namespace

Scenario make_theorem1_instance(std::size_t n, double unit_cost) {
  if (!IsPowerOfTwo(n) || n < 4)
    throw std::invalid_argument(
        "make_theorem1_instance: n must be a power of two >= 4, got " +
        std::to_string(n));
  if (!(unit_cost > 0.0) || !std::isfinite(unit_cost))
    throw std::invalid_argument(
        "make_theorem1_instance: unit_cost must be positive and finite");

  Scenario s;
  for (std::size_t h = 0; h < n; ++h) {
    s.hypotheses.push_back("h" + std::to_string(h + 1));
    s.prior.push_back(1.0 / static_cast<double>(n));
  }

  // One binary feature per internal node of the complete binary tree over
  // [0, n), in breadth-first order: the feature for [a, b) reads 1 on
  // [a, mid), 0 on [mid, b), and is an even coin toss outside [a, b).
  std::vector<std::pair<std::size_t, std::size_t>> intervals{{0, n}};
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const auto [a, b] = intervals[i];
    const std::size_t mid = (a + b) / 2;
    Feature f;
    f.name = "F" + std::to_string(i + 1);
    f.values = {"0", "1"};
    f.cpt.resize(n);
    for (std::size_t h = 0; h < n; ++h) {
      if (h >= a && h < mid)
        f.cpt[h] = {0.0, 1.0};
      else if (h >= mid && h < b)
        f.cpt[h] = {1.0, 0.0};
      else
        f.cpt[h] = {0.5, 0.5};
    }
    s.features.push_back(std::move(f));
    if (mid - a >= 2) intervals.emplace_back(a, mid);
    if (b - mid >= 2) intervals.emplace_back(mid, b);
  }

  for (std::size_t i = 0; i < s.features.size(); ++i)
    s.locations.push_back({"L" + std::to_string(i + 1), {i}, {}});

  const std::size_t m = s.locations.size();
  s.travel_cost.assign(m, std::vector<double>(m, unit_cost));
  s.loss = UnitLoss(n);
  s.tau = 0.0;
  return s;
}

Scenario make_random_instance(std::size_t n_hypotheses,
                              std::size_t n_features,
                              std::size_t n_locations, double noise,
                              std::uint64_t seed,
                              const RandomInstanceOptions& options) {
  if (n_hypotheses < 2)
    throw std::invalid_argument("make_random_instance: need >= 2 hypotheses");
  if (n_features < 1 || n_locations < 1)
    throw std::invalid_argument(
        "make_random_instance: need >= 1 feature and location");
  if (!(noise >= 0.0 && noise <= 0.5))
    throw std::invalid_argument(
        "make_random_instance: noise must lie in [0, 0.5]");
  const std::size_t n_values = options.n_values;
  if (n_values < 2)
    throw std::invalid_argument("make_random_instance: need >= 2 values");

  Rng rng(MixSeed(seed, 0x72616e64));  // "rand" stream

  Scenario s;
  for (std::size_t h = 0; h < n_hypotheses; ++h)
    s.hypotheses.push_back("h" + std::to_string(h));
  if (options.random_prior) {
    double total = 0.0;
    for (std::size_t h = 0; h < n_hypotheses; ++h) {
      s.prior.push_back(rng.UniformReal(0.1, 1.0));
      total += s.prior.back();
    }
    for (double& p : s.prior) p /= total;
  } else {
    s.prior.assign(n_hypotheses, 1.0 / static_cast<double>(n_hypotheses));
  }

  // Clean value of each feature under each hypothesis; the cpt concentrates
  // 1 - noise there and spreads the rest evenly.
  std::vector<std::vector<std::size_t>> clean(
      n_features, std::vector<std::size_t>(n_hypotheses));
  for (auto& row : clean)
    for (auto& v : row) v = rng.UniformIndex(n_values);

  if (options.ensure_separable) {
    // n_values^n_features distinct signatures must exist.
    double capacity = 1.0;
    for (std::size_t f = 0; f < n_features; ++f)
      capacity *= static_cast<double>(n_values);
    if (capacity < static_cast<double>(n_hypotheses))
      throw std::invalid_argument(
          "make_random_instance: ensure_separable needs n_values^n_features "
          ">= n_hypotheses");
    auto distinct = [&] {
      std::set<std::vector<std::size_t>> sigs;
      for (std::size_t h = 0; h < n_hypotheses; ++h) {
        std::vector<std::size_t> sig(n_features);
        for (std::size_t f = 0; f < n_features; ++f) sig[f] = clean[f][h];
        if (!sigs.insert(std::move(sig)).second) return false;
      }
      return true;
    };
    for (int attempt = 0; attempt < 200 && !distinct(); ++attempt)
      for (auto& row : clean)
        for (auto& v : row) v = rng.UniformIndex(n_values);
    if (!distinct()) {
      // Deterministic fallback: base-n_values digits of the hypothesis index.
      for (std::size_t h = 0; h < n_hypotheses; ++h) {
        std::size_t code = h;
        for (std::size_t f = 0; f < n_features; ++f) {
          clean[f][h] = code % n_values;
          code /= n_values;
        }
      }
    }
  }

  const double off = noise / static_cast<double>(n_values - 1);
  for (std::size_t f = 0; f < n_features; ++f) {
    Feature feat;
    feat.name = "F" + std::to_string(f);
    for (std::size_t v = 0; v < n_values; ++v)
      feat.values.push_back("v" + std::to_string(v));
    feat.cpt.assign(n_hypotheses, std::vector<double>(n_values, off));
    for (std::size_t h = 0; h < n_hypotheses; ++h)
      feat.cpt[h][clean[f][h]] = 1.0 - noise;
    s.features.push_back(std::move(feat));
  }

  // Feature f lives at location f mod M (covers every feature), extra
  // features sprinkled on top; locations left empty pick up one at random.
  std::vector<std::set<std::size_t>> assigned(n_locations);
  for (std::size_t f = 0; f < n_features; ++f)
    assigned[f % n_locations].insert(f);
  for (std::size_t l = 0; l < n_locations; ++l) {
    if (assigned[l].empty()) assigned[l].insert(rng.UniformIndex(n_features));
    if (rng.NextDouble() < 0.4) assigned[l].insert(rng.UniformIndex(n_features));
  }
  for (std::size_t l = 0; l < n_locations; ++l)
    s.locations.push_back(
        {"L" + std::to_string(l),
         std::vector<std::size_t>(assigned[l].begin(), assigned[l].end()),
         {}});

  s.travel_cost.assign(n_locations, std::vector<double>(n_locations, 1.0));
  if (!options.unit_cost)
    for (auto& row : s.travel_cost)
      for (double& c : row) c = rng.UniformReal(0.5, 2.0);

  s.loss = UnitLoss(n_hypotheses);
  s.tau = options.tau;
  return s;
}

CorrespondenceProfile default_correspondence_profile(std::size_t n_classes,
                                                     std::size_t n_views,
                                                     std::uint64_t seed) {
  if (n_classes < 2)
    throw std::invalid_argument("profile: need >= 2 classes");
  if (n_views < 1) throw std::invalid_argument("profile: need >= 1 view");

  CorrespondenceProfile p;
  p.name = "platonic-default";
  p.mean_counts.assign(n_views, std::vector<double>(n_classes, 0.0));
  p.sigma.assign(n_views, 1.0);

  Rng rng(MixSeed(seed, 0x706f6c79));  // "poly" stream
  for (std::size_t v = 0; v < n_views; ++v) {
    // Jitter is shared across classes within a view so flat views keep
    // exactly identical rows (zero information gain).
    const double jitter = rng.UniformReal(-0.25, 0.25);
    const double spread = rng.UniformReal(0.0, 0.15);
    const std::size_t anchor = (v / 3) % n_classes;
    switch (v % 3) {
      case 0:  // flat: face-on views see the same count everywhere
        for (std::size_t c = 0; c < n_classes; ++c)
          p.mean_counts[v][c] = 3.0 + jitter;
        p.sigma[v] = 2.0 + spread;
        break;
      case 1: {  // pair: an edge-on view separating two classes from the rest
        const std::size_t other = (anchor + 1) % n_classes;
        for (std::size_t c = 0; c < n_classes; ++c)
          p.mean_counts[v][c] = 2.0 + jitter;
        p.mean_counts[v][anchor] = 5.0 + jitter;
        p.mean_counts[v][other] = 6.0 + jitter;
        p.sigma[v] = 1.3 + spread;
        break;
      }
      default:  // spike: a vertex-on view singling out one class
        for (std::size_t c = 0; c < n_classes; ++c)
          p.mean_counts[v][c] = 1.5 + jitter;
        p.mean_counts[v][anchor] = 7.0 + jitter;
        p.sigma[v] = 1.1 + spread;
        break;
    }
  }
  return p;
}

CorrespondenceProfile load_correspondence_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open profile file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("profile json: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("correspondence_profile"))
    throw ParseError("profile json: missing key \"correspondence_profile\"");
  const auto& body = doc["correspondence_profile"];
  CorrespondenceProfile p;
  try {
    p.name = body.value("name", std::string("custom"));
    p.mean_counts =
        body.at("mean_counts").get<std::vector<std::vector<double>>>();
    p.sigma = body.at("sigma").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("profile json: ") + e.what());
  }
  if (p.mean_counts.empty() || p.sigma.size() != p.mean_counts.size())
    throw ParseError(
        "profile json: mean_counts and sigma must list the same number of "
        "views");
  for (const auto& row : p.mean_counts)
    if (row.size() != p.mean_counts.front().size())
      throw ParseError("profile json: ragged mean_counts rows");
  for (double sg : p.sigma)
    if (!(sg > 0.0) || !std::isfinite(sg))
      throw ParseError("profile json: sigma entries must be positive");
  return p;
}

Scenario make_polyhedra_like_instance(std::size_t n_classes,
                                      std::size_t n_views,
                                      const CorrespondenceProfile& profile,
                                      std::uint64_t seed) {
  (void)seed;  // the profile carries all randomness
  if (n_classes < 2)
    throw std::invalid_argument("make_polyhedra_like_instance: need >= 2 classes");
  if (n_views < 1)
    throw std::invalid_argument("make_polyhedra_like_instance: need >= 1 view");
  if (profile.mean_counts.size() < n_views)
    throw std::invalid_argument(
        "make_polyhedra_like_instance: profile covers fewer views than requested");
  for (const auto& row : profile.mean_counts)
    if (row.size() < n_classes)
      throw std::invalid_argument(
          "make_polyhedra_like_instance: profile covers fewer classes than "
          "requested");

  static const char* kSolids[] = {"tetrahedron", "cube", "octahedron",
                                  "dodecahedron", "icosahedron"};
  Scenario s;
  for (std::size_t c = 0; c < n_classes; ++c) {
    s.hypotheses.push_back(c < 5 ? kSolids[c] : "class" + std::to_string(c));
    s.prior.push_back(1.0 / static_cast<double>(n_classes));
  }

  for (std::size_t v = 0; v < n_views; ++v) {
    Feature f;
    f.name = "count_view" + std::to_string(v);
    for (std::size_t b = 0; b < kCountBins; ++b)
      f.values.push_back("c" + std::to_string(b));
    f.cpt.reserve(n_classes);
    for (std::size_t c = 0; c < n_classes; ++c)
      f.cpt.push_back(BinnedCounts(profile.mean_counts[v][c], profile.sigma[v]));
    s.features.push_back(std::move(f));

    const double angle = 2.0 * std::numbers::pi * static_cast<double>(v) /
                         static_cast<double>(n_views);
    s.locations.push_back(
        {"view" + std::to_string(v), {v}, {std::cos(angle), std::sin(angle)}});
  }

  s.travel_cost.assign(n_views, std::vector<double>(n_views, 1.0));
  s.loss = UnitLoss(n_classes);
  s.tau = 0.0;
  return s;
}

Scenario make_polyhedra_like_instance(std::size_t n_classes,
                                      std::size_t n_views,
                                      std::uint64_t seed) {
  return make_polyhedra_like_instance(
      n_classes, n_views,
      default_correspondence_profile(n_classes, n_views, seed), seed);
}

double interpolate_informativeness(
    const std::vector<std::vector<double>>& points,
    const std::vector<double>& values, const std::vector<double>& query,
    double length_scale) {
  if (points.empty() || points.size() != values.size())
    throw std::invalid_argument(
        "interpolate_informativeness: need matching nonempty points/values");
  if (!(length_scale > 0.0))
    throw std::invalid_argument(
        "interpolate_informativeness: length_scale must be positive");
  for (const auto& p : points)
    if (p.size() != query.size())
      throw std::invalid_argument(
          "interpolate_informativeness: dimension mismatch");

  double wsum = 0.0;
  double acc = 0.0;
  double best_d2 = std::numeric_limits<double>::infinity();
  std::size_t nearest = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    double d2 = 0.0;
    for (std::size_t k = 0; k < query.size(); ++k) {
      const double d = query[k] - points[i][k];
      d2 += d * d;
    }
    if (d2 < best_d2) {
      best_d2 = d2;
      nearest = i;
    }
    const double w = std::exp(-d2 / (2.0 * length_scale * length_scale));
    wsum += w;
    acc += w * values[i];
  }
  // All weights underflow far from every sample: fall back to the nearest.
  if (wsum < 1e-300) return values[nearest];
  return acc / wsum;
}

}  // namespace viewplan
