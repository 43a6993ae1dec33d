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

#ifndef VIEWPLAN_ERRORS_HPP_
#define VIEWPLAN_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace viewplan {

// Base class for every error raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A scenario file (or json document) could not be parsed into a scenario.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

// A scenario violates structural rules; `violations()` lists one human
// readable message per broken rule.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations)
      : Error(Join(violations)), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string Join(const std::vector<std::string>& violations) {
    std::string out = "scenario validation failed:";
    for (const auto& v : violations) out += "\n  - " + v;
    return out;
  }
  std::vector<std::string> violations_;
};

// An observation set has zero probability under every hypothesis.
class ImpossibleEvidenceError : public Error {
 public:
  explicit ImpossibleEvidenceError(const std::string& what) : Error(what) {}
};

// The same feature would be recorded twice in one belief history.
class DuplicateFeatureError : public Error {
 public:
  explicit DuplicateFeatureError(const std::string& what) : Error(what) {}
};

// A joint outcome space is too large to enumerate exactly and sampling was
// not permitted for the requested operation.
class OutcomeSpaceTooLargeError : public Error {
 public:
  explicit OutcomeSpaceTooLargeError(const std::string& what) : Error(what) {}
};

// A brute force search exceeded its configured state budget.
class StateSpaceTooLargeError : public Error {
 public:
  explicit StateSpaceTooLargeError(const std::string& what) : Error(what) {}
};

// An operation that requires deterministic features was given a noisy
// scenario.
class NotNoiselessError : public Error {
 public:
  explicit NotNoiselessError(const std::string& what) : Error(what) {}
};

// No plan of the requested form can reach the loss threshold; carries the
// best expected loss that is achievable.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, double best_achievable_loss)
      : Error(what), best_achievable_loss_(best_achievable_loss) {}
  double best_achievable_loss() const { return best_achievable_loss_; }

 private:
  double best_achievable_loss_;
};

}  // namespace viewplan

#endif  // VIEWPLAN_ERRORS_HPP_
