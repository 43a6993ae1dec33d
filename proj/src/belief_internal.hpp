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
// Internal helpers shared between the belief and planner translation units.

#ifndef VIEWPLAN_SRC_BELIEF_INTERNAL_HPP_
#define VIEWPLAN_SRC_BELIEF_INTERNAL_HPP_

#include <cstddef>
#include <span>

#include "viewplan/belief.hpp"
#include "viewplan/model.hpp"

namespace viewplan {
namespace detail {

std::size_t JointOutcomeCount(const Scenario& s,
                              std::span<const std::size_t> features);

double ExactExpectedPosteriorEntropy(const Scenario& s,
                                     std::span<const double> probs,
                                     std::span<const std::size_t> features);

double SampledExpectedPosteriorEntropy(const Scenario& s,
                                       std::span<const double> probs,
                                       std::span<const std::size_t> features,
                                       std::size_t sample_count);

// Exact when the joint outcome space fits options.outcome_enum_cap, sampled
// when allowed, otherwise throws OutcomeSpaceTooLargeError mentioning
// `operation`.
double ExpectedPosteriorEntropy(const Scenario& s,
                                std::span<const double> probs,
                                std::span<const std::size_t> features,
                                const IgOptions& options,
                                const char* operation);

}  // namespace detail
}  // namespace viewplan

#endif  // VIEWPLAN_SRC_BELIEF_INTERNAL_HPP_
