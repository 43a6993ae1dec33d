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

#include "viewplan/model.hpp"

#include <cmath>
#include <cstddef>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "viewplan/errors.hpp"

namespace viewplan {
namespace {

using Json = nlohmann::ordered_json;

constexpr double kSumTolerance = 1e-9;

bool FiniteNonNegative(double x) { return std::isfinite(x) && x >= 0.0; }

void CheckUniqueNames(const std::vector<std::string>& names,
                      const std::string& field,
                      std::vector<std::string>* out) {
  std::unordered_set<std::string> seen;
  for (const auto& name : names) {
    if (!seen.insert(name).second)
      out->push_back(field + ": duplicate name \"" + name + "\"");
  }
}

// --- json helpers ----------------------------------------------------------

[[noreturn]] void Fail(const std::string& path, const std::string& message) {
  throw ParseError("scenario json: " + path + ": " + message);
}

const Json& Member(const Json& obj, const std::string& path,
                   const std::string& key) {
  if (!obj.is_object()) Fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) Fail(path, "missing key \"" + key + "\"");
  return *it;
}

std::string AsString(const Json& j, const std::string& path) {
  if (!j.is_string()) Fail(path, "expected a string");
  return j.get<std::string>();
}

double AsDouble(const Json& j, const std::string& path) {
  if (!j.is_number()) Fail(path, "expected a number");
  return j.get<double>();
}

const Json& AsArray(const Json& j, const std::string& path) {
  if (!j.is_array()) Fail(path, "expected an array");
  return j;
}

std::vector<double> AsDoubleVector(const Json& j, const std::string& path) {
  std::vector<double> out;
  out.reserve(AsArray(j, path).size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(AsDouble(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<std::vector<double>> AsMatrix(const Json& j,
                                          const std::string& path) {
  std::vector<std::vector<double>> out;
  out.reserve(AsArray(j, path).size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(AsDoubleVector(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Scenario ScenarioFromJson(const Json& doc) {
  if (!doc.is_object()) Fail("$", "expected a top level object");
  Scenario s;

  const Json& hyps = AsArray(Member(doc, "$", "hypotheses"), "hypotheses");
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    const std::string path = "hypotheses[" + std::to_string(i) + "]";
    s.hypotheses.push_back(AsString(Member(hyps[i], path, "name"), path));
    s.prior.push_back(AsDouble(Member(hyps[i], path, "prior"), path));
  }

  const Json& feats = AsArray(Member(doc, "$", "features"), "features");
  for (std::size_t i = 0; i < feats.size(); ++i) {
    const std::string path = "features[" + std::to_string(i) + "]";
    Feature f;
    f.name = AsString(Member(feats[i], path, "name"), path);
    const Json& values = AsArray(Member(feats[i], path, "values"), path);
    for (std::size_t v = 0; v < values.size(); ++v)
      f.values.push_back(
          AsString(values[v], path + ".values[" + std::to_string(v) + "]"));
    f.cpt = AsMatrix(Member(feats[i], path, "cpt"), path + ".cpt");
    s.features.push_back(std::move(f));
  }

  const Json& locs = AsArray(Member(doc, "$", "locations"), "locations");
  for (std::size_t i = 0; i < locs.size(); ++i) {
    const std::string path = "locations[" + std::to_string(i) + "]";
    Location l;
    l.name = AsString(Member(locs[i], path, "name"), path);
    const Json& fidx = AsArray(Member(locs[i], path, "features"), path);
    for (std::size_t k = 0; k < fidx.size(); ++k) {
      const std::string fpath = path + ".features[" + std::to_string(k) + "]";
      if (!fidx[k].is_number_unsigned()) Fail(fpath, "expected an index");
      l.features.push_back(fidx[k].get<std::size_t>());
    }
    if (locs[i].contains("coords"))
      l.coords = AsDoubleVector(locs[i]["coords"], path + ".coords");
    s.locations.push_back(std::move(l));
  }

  s.travel_cost = AsMatrix(Member(doc, "$", "travel_cost"), "travel_cost");

  if (doc.contains("loss")) {
    s.loss = AsMatrix(doc["loss"], "loss");
  } else {
    // Default 0/1 loss: free when correct, unit penalty otherwise.
    const std::size_t n = s.hypotheses.size();
    s.loss.assign(n, std::vector<double>(n, 1.0));
    for (std::size_t i = 0; i < n; ++i) s.loss[i][i] = 0.0;
  }

  s.tau = doc.contains("tau") ? AsDouble(doc["tau"], "tau") : 0.05;
  return s;
}

Json ScenarioToJson(const Scenario& s) {
  Json doc = Json::object();
  doc["hypotheses"] = Json::array();
  for (std::size_t h = 0; h < s.hypotheses.size(); ++h)
    doc["hypotheses"].push_back(
        {{"name", s.hypotheses[h]}, {"prior", s.prior[h]}});
  doc["features"] = Json::array();
  for (const Feature& f : s.features)
    doc["features"].push_back(
        {{"name", f.name}, {"values", f.values}, {"cpt", f.cpt}});
  doc["locations"] = Json::array();
  for (const Location& l : s.locations) {
    Json loc = {{"name", l.name}, {"features", l.features}};
    if (!l.coords.empty()) loc["coords"] = l.coords;
    doc["locations"].push_back(std::move(loc));
  }
  doc["travel_cost"] = s.travel_cost;
  doc["loss"] = s.loss;
  doc["tau"] = s.tau;
  return doc;
}

}  // namespace

std::vector<std::string> validate(const Scenario& s) {
  std::vector<std::string> v;
  const std::size_t n = s.hypotheses.size();
  const std::size_t k = s.features.size();
  const std::size_t m = s.locations.size();

  if (n < 2) v.push_back("hypotheses: need at least 2, got " +
                         std::to_string(n));
  CheckUniqueNames(s.hypotheses, "hypotheses", &v);

  if (s.prior.size() != n) {
    v.push_back("prior: expected " + std::to_string(n) + " entries, got " +
                std::to_string(s.prior.size()));
  } else {
    double sum = 0.0;
    bool entries_ok = true;
    for (std::size_t h = 0; h < n; ++h) {
      if (!FiniteNonNegative(s.prior[h])) {
        v.push_back("prior[" + std::to_string(h) +
                    "]: must be finite and >= 0");
        entries_ok = false;
      } else {
        sum += s.prior[h];
      }
    }
    if (entries_ok && std::abs(sum - 1.0) > kSumTolerance)
      v.push_back("prior: entries must sum to 1 (within 1e-9)");
  }

  if (k < 1) v.push_back("features: need at least 1");
  {
    std::vector<std::string> names;
    for (const Feature& f : s.features) names.push_back(f.name);
    CheckUniqueNames(names, "features", &v);
  }
  for (std::size_t i = 0; i < k; ++i) {
    const Feature& f = s.features[i];
    const std::string where = "features[" + std::to_string(i) + "]";
    if (f.values.size() < 2) {
      v.push_back(where + ".values: need at least 2 outcome labels");
      continue;
    }
    CheckUniqueNames(f.values, where + ".values", &v);
    if (f.cpt.size() != n) {
      v.push_back(where + ".cpt: expected " + std::to_string(n) + " rows");
      continue;
    }
    for (std::size_t h = 0; h < n; ++h) {
      if (f.cpt[h].size() != f.values.size()) {
        v.push_back(where + ".cpt[" + std::to_string(h) + "]: expected " +
                    std::to_string(f.values.size()) + " entries");
        continue;
      }
      double row = 0.0;
      bool row_ok = true;
      for (double p : f.cpt[h]) {
        if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
          row_ok = false;
          break;
        }
        row += p;
      }
      if (!row_ok) {
        v.push_back(where + ".cpt[" + std::to_string(h) +
                    "]: entries must lie in [0, 1]");
      } else if (std::abs(row - 1.0) > kSumTolerance) {
        v.push_back(where + ".cpt[" + std::to_string(h) +
                    "]: row must sum to 1 (within 1e-9)");
      }
    }
  }

  if (m < 1) v.push_back("locations: need at least 1");
  {
    std::vector<std::string> names;
    for (const Location& l : s.locations) names.push_back(l.name);
    CheckUniqueNames(names, "locations", &v);
  }
  for (std::size_t i = 0; i < m; ++i) {
    const Location& l = s.locations[i];
    const std::string where = "locations[" + std::to_string(i) + "]";
    if (l.features.empty())
      v.push_back(where + ".features: must observe at least one feature");
    std::set<std::size_t> seen;
    for (std::size_t f : l.features) {
      if (f >= k)
        v.push_back(where + ".features: index " + std::to_string(f) +
                    " out of range");
      if (!seen.insert(f).second)
        v.push_back(where + ".features: duplicate index " + std::to_string(f));
    }
    if (!l.coords.empty() && l.coords.size() != 2 && l.coords.size() != 3)
      v.push_back(where + ".coords: must have 2 or 3 entries when present");
  }

  if (s.travel_cost.size() != m) {
    v.push_back("travel_cost: expected " + std::to_string(m) + " rows");
  } else {
    for (std::size_t i = 0; i < m; ++i) {
      if (s.travel_cost[i].size() != m) {
        v.push_back("travel_cost[" + std::to_string(i) + "]: expected " +
                    std::to_string(m) + " entries");
        continue;
      }
      for (double c : s.travel_cost[i]) {
        if (!FiniteNonNegative(c)) {
          v.push_back("travel_cost[" + std::to_string(i) +
                      "]: entries must be finite and >= 0");
          break;
        }
      }
    }
  }

  if (s.loss.size() != n) {
    v.push_back("loss: expected " + std::to_string(n) + " rows");
  } else {
    for (std::size_t d = 0; d < n; ++d) {
      if (s.loss[d].size() != n) {
        v.push_back("loss[" + std::to_string(d) + "]: expected " +
                    std::to_string(n) + " entries");
        continue;
      }
      for (double c : s.loss[d]) {
        if (!FiniteNonNegative(c)) {
          v.push_back("loss[" + std::to_string(d) +
                      "]: entries must be finite and >= 0");
          break;
        }
      }
    }
  }

  if (!FiniteNonNegative(s.tau))
    v.push_back("tau: must be finite and >= 0");

  return v;
}

void validate_or_throw(const Scenario& s) {
  std::vector<std::string> violations = validate(s);
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

bool is_noiseless(const Scenario& s) {
  for (const Feature& f : s.features)
    for (const auto& row : f.cpt)
      for (double p : row)
        if (p != 0.0 && p != 1.0) return false;
  return true;
}

Scenario scenario_from_json_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("scenario json: ") + e.what());
  }
  Scenario s = ScenarioFromJson(doc);
  validate_or_throw(s);
  return s;
}

std::string scenario_to_json_text(const Scenario& s) {
  validate_or_throw(s);
  return ScenarioToJson(s).dump(2) + "\n";
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return scenario_from_json_text(buf.str());
}

void save_scenario(const Scenario& s, const std::string& path) {
  const std::string text = scenario_to_json_text(s);
  std::ofstream out(path);
  if (!out) throw Error("cannot open file for writing: " + path);
  out << text;
  if (!out) throw Error("failed writing scenario to: " + path);
}

}  // namespace viewplan
