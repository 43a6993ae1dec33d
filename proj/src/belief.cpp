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

#include "viewplan/belief.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "belief_internal.hpp"
#include "viewplan/errors.hpp"
#include "viewplan/rng.hpp"

namespace viewplan {
namespace {

void CheckObservationIndices(const Scenario& s, const Observation& o) {
  if (o.feature >= s.n_features())
    throw std::out_of_range("observation feature index " +
                            std::to_string(o.feature) + " out of range");
  if (o.value >= s.features[o.feature].n_values())
    throw std::out_of_range("observation value index " +
                            std::to_string(o.value) + " out of range for " +
                            s.features[o.feature].name);
}

// FNV-1a over raw bytes; used to derive reproducible sampler seeds from the
// call site (belief contents plus the queried features).
class ByteHash {
 public:
  void Mix(const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      state_ ^= bytes[i];
      state_ *= 0x100000001b3ULL;
    }
  }
  void MixU64(std::uint64_t v) { Mix(&v, sizeof v); }
  std::uint64_t value() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::uint64_t SamplerSeed(std::span<const double> probs,
                          std::span<const std::size_t> features,
                          std::size_t sample_count) {
  ByteHash h;
  h.Mix(probs.data(), probs.size() * sizeof(double));
  for (std::size_t f : features) h.MixU64(f);
  h.MixU64(sample_count);
  return h.value();
}

// Sorted feature indices revealed by `location` that the belief has not seen
// yet (all of them when ignore_history, the refresh/revisit semantics).
std::vector<std::size_t> UnseenFeatures(const Scenario& s,
                                        const Belief& belief,
                                        std::size_t location,
                                        bool ignore_history) {
  std::vector<std::size_t> out;
  for (std::size_t f : s.locations[location].features)
    if (ignore_history || !belief.has_feature(f)) out.push_back(f);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

namespace detail {

// Number of joint outcomes of `features`, saturating at SIZE_MAX / 2.
std::size_t JointOutcomeCount(const Scenario& s,
                              std::span<const std::size_t> features) {
  std::size_t count = 1;
  constexpr std::size_t kCap = std::numeric_limits<std::size_t>::max() / 2;
  for (std::size_t f : features) {
    const std::size_t v = s.features[f].n_values();
    if (count > kCap / v) return kCap;
    count *= v;
  }
  return count;
}

// Exact expected posterior entropy after jointly observing `features`
// (conditionally independent given the hypothesis), by enumerating every
// joint outcome in mixed-radix order with the first feature most
// significant.
double ExactExpectedPosteriorEntropy(const Scenario& s,
                                     std::span<const double> probs,
                                     std::span<const std::size_t> features) {
  const std::size_t n = probs.size();
  const std::size_t q = features.size();
  const std::size_t total = JointOutcomeCount(s, features);
  std::vector<std::size_t> digits(q, 0);
  std::vector<double> post(n);
  double acc = 0.0;
  for (std::size_t rank = 0; rank < total; ++rank) {
    double mass = 0.0;
    for (std::size_t h = 0; h < n; ++h) {
      double w = probs[h];
      for (std::size_t i = 0; i < q && w > 0.0; ++i)
        w *= s.features[features[i]].cpt[h][digits[i]];
      post[h] = w;
      mass += w;
    }
    if (mass > 0.0) {
      double ent = 0.0;
      for (std::size_t h = 0; h < n; ++h) {
        const double p = post[h] / mass;
        if (p > 0.0) ent -= p * std::log2(p);
      }
      acc += mass * ent;
    }
    // Advance mixed-radix digits, last feature least significant.
    for (std::size_t i = q; i-- > 0;) {
      if (++digits[i] < s.features[features[i]].n_values()) break;
      digits[i] = 0;
    }
  }
  return acc;
}

// Monte Carlo estimate of the same quantity: ancestral sampling of
// (hypothesis, outcome) pairs from the belief. Deterministic for a fixed
// (belief, features, sample_count) triple.
double SampledExpectedPosteriorEntropy(const Scenario& s,
                                       std::span<const double> probs,
                                       std::span<const std::size_t> features,
                                       std::size_t sample_count) {
  const std::size_t n = probs.size();
  Rng rng(SamplerSeed(probs, features, sample_count));
  std::vector<double> post(n);
  double acc = 0.0;
  for (std::size_t draw = 0; draw < sample_count; ++draw) {
    const std::size_t truth = rng.SampleWeighted(probs);
    double mass = 0.0;
    for (std::size_t h = 0; h < n; ++h) post[h] = probs[h];
    for (std::size_t f : features) {
      const auto& cpt = s.features[f].cpt;
      const std::size_t v = rng.SampleWeighted(cpt[truth]);
      for (std::size_t h = 0; h < n; ++h) post[h] *= cpt[h][v];
    }
    for (std::size_t h = 0; h < n; ++h) mass += post[h];
    if (mass <= 0.0) continue;  // unreachable: the drawn outcome has mass
    double ent = 0.0;
    for (std::size_t h = 0; h < n; ++h) {
      const double p = post[h] / mass;
      if (p > 0.0) ent -= p * std::log2(p);
    }
    acc += ent;
  }
  return acc / static_cast<double>(sample_count);
}

double ExpectedPosteriorEntropy(const Scenario& s, std::span<const double> probs,
                                std::span<const std::size_t> features,
                                const IgOptions& options,
                                const char* operation) {
  if (JointOutcomeCount(s, features) <= options.outcome_enum_cap)
    return ExactExpectedPosteriorEntropy(s, probs, features);
  if (!options.allow_sampling)
    throw OutcomeSpaceTooLargeError(
        std::string(operation) + ": joint outcome space exceeds the " +
        "enumeration cap of " + std::to_string(options.outcome_enum_cap));
  return SampledExpectedPosteriorEntropy(s, probs, features,
                                         options.sample_count);
}

}  // namespace detail

Belief make_prior_belief(const Scenario& s) {
  Belief b;
  b.probs = s.prior;
  return b;
}

Belief update(const Scenario& s, const Belief& belief,
              std::span<const Observation> observations, bool allow_refresh) {
  const std::size_t n = belief.probs.size();
  for (std::size_t i = 0; i < observations.size(); ++i) {
    CheckObservationIndices(s, observations[i]);
    for (std::size_t j = 0; j < i; ++j)
      if (observations[j].feature == observations[i].feature)
        throw DuplicateFeatureError(
            "feature " + s.features[observations[i].feature].name +
            " appears twice in one observation batch");
    if (!allow_refresh && belief.has_feature(observations[i].feature))
      throw DuplicateFeatureError(
          "feature " + s.features[observations[i].feature].name +
          " was already observed");
  }

  Belief out;
  out.probs.resize(n);
  double mass = 0.0;
  for (std::size_t h = 0; h < n; ++h) {
    double w = belief.probs[h];
    for (const Observation& o : observations) w *= s.features[o.feature].cpt[h][o.value];
    out.probs[h] = w;
    mass += w;
  }
  if (!(mass >= kEvidenceFloor))
    throw ImpossibleEvidenceError(
        "observation batch has (near) zero probability under every "
        "hypothesis; evidence mass " +
        std::to_string(mass));
  for (double& p : out.probs) p /= mass;

  out.history = belief.history;
  out.history.insert(out.history.end(), observations.begin(),
                     observations.end());
  return out;
}

double entropy_bits(std::span<const double> probs) {
  double ent = 0.0;
  for (double p : probs)
    if (p > 0.0) ent -= p * std::log2(p);
  return ent;
}

double entropy_bits(const Belief& belief) { return entropy_bits(belief.probs); }

double expected_information_gain(const Scenario& s, const Belief& belief,
                                 std::size_t location,
                                 const IgOptions& options) {
  if (location >= s.n_locations())
    throw std::out_of_range("location index out of range");
  const std::vector<std::size_t> unseen =
      UnseenFeatures(s, belief, location, /*ignore_history=*/false);
  if (unseen.empty()) return 0.0;
  const double ig =
      entropy_bits(belief) -
      detail::ExpectedPosteriorEntropy(s, belief.probs, unseen, options,
                                       "expected_information_gain");
  return std::max(ig, 0.0);
}

double expected_information_gain_set(const Scenario& s, const Belief& belief,
                                     std::span<const std::size_t> locations,
                                     const IgOptions& options) {
  std::vector<std::size_t> unseen;
  for (std::size_t l : locations) {
    if (l >= s.n_locations())
      throw std::out_of_range("location index out of range");
    for (std::size_t f : s.locations[l].features)
      if (!belief.has_feature(f)) unseen.push_back(f);
  }
  std::sort(unseen.begin(), unseen.end());
  unseen.erase(std::unique(unseen.begin(), unseen.end()), unseen.end());
  if (unseen.empty()) return 0.0;
  const double ig =
      entropy_bits(belief) -
      detail::ExpectedPosteriorEntropy(s, belief.probs, unseen, options,
                                       "expected_information_gain_set");
  return std::max(ig, 0.0);
}

double bayes_risk(const Scenario& s, const Belief& belief) {
  const std::size_t n = belief.probs.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t d = 0; d < n; ++d) {
    double risk = 0.0;
    for (std::size_t h = 0; h < n; ++h) risk += belief.probs[h] * s.loss[d][h];
    best = std::min(best, risk);
  }
  return best;
}

std::size_t map_decision(const Scenario& s, const Belief& belief) {
  const std::size_t n = belief.probs.size();
  std::size_t best = 0;
  double best_risk = std::numeric_limits<double>::infinity();
  for (std::size_t d = 0; d < n; ++d) {
    double risk = 0.0;
    for (std::size_t h = 0; h < n; ++h) risk += belief.probs[h] * s.loss[d][h];
    if (risk < best_risk) {
      best_risk = risk;
      best = d;
    }
  }
  return best;
}

std::size_t version_space_count(const Scenario& s,
                                std::span<const Observation> history) {
  if (!is_noiseless(s))
    throw NotNoiselessError(
        "version_space_count requires a noiseless scenario");
  for (const Observation& o : history) CheckObservationIndices(s, o);
  std::size_t count = 0;
  for (std::size_t h = 0; h < s.n_hypotheses(); ++h) {
    bool consistent = true;
    for (const Observation& o : history) {
      if (s.features[o.feature].cpt[h][o.value] <= 0.0) {
        consistent = false;
        break;
      }
    }
    if (consistent) ++count;
  }
  return count;
}

}  // namespace viewplan
