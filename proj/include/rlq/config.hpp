// Copyright 2026 The rlq Authors
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

// JSON model/experiment files and "--set key=value" overrides.
//
// A file describes one model plus an optional "experiment" block of run
// parameters. Field names are documented in docs/config_schema.md.

#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rlq/errors.hpp"
#include "rlq/matrix.hpp"
#include "rlq/param_model.hpp"
#include "rlq/presets.hpp"
#include "rlq/qlearning.hpp"
#include "rlq/qmatrix.hpp"

#ifndef RLQ_PRESET_DIR
#define RLQ_PRESET_DIR "data/presets"
#endif

namespace rlq::config {

using Json = nlohmann::ordered_json;

inline constexpr const char* kPresetDirEnv = "RLQ_PRESET_DIR";
inline constexpr const char* kOutDirEnv = "RLQ_OUT_DIR";

inline Matrix matrix_from_json(const Json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw ConfigError(what + ": expected a non-empty array of rows");
  std::vector<std::vector<double>> rows;
  for (const auto& row : j) {
    if (!row.is_array()) throw ConfigError(what + ": every row must be an array");
    std::vector<double> r;
    for (const auto& v : row) {
      if (!v.is_number()) throw ConfigError(what + ": entries must be numbers");
      r.push_back(v.get<double>());
    }
    rows.push_back(std::move(r));
  }
  try {
    return Matrix::from_rows(rows);
  } catch (const DimensionMismatch&) {
    throw ConfigError(what + ": rows have different lengths");
  }
}

inline Json matrix_to_json(const Matrix& m) {
  Json out = Json::array();
  for (const auto& row : m.to_rows()) out.push_back(row);
  return out;
}

inline const Json& require(const Json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw ConfigError(std::string("missing required field '") + key + "'");
  }
  return doc.at(key);
}

inline Dims dims_from_json(const Json& doc) {
  const Json& d = require(doc, "dims");
  if (!d.contains("n") || !d.contains("m") || !d["n"].is_number_unsigned() ||
      !d["m"].is_number_unsigned()) {
    throw ConfigError("dims must hold non-negative integers n and m");
  }
  Dims dm{d["n"].get<std::size_t>(), d["m"].get<std::size_t>()};
  if (dm.n == 0) throw ConfigError("dims.n must be positive");
  return dm;
}

inline NoiseKind noise_kind_from_string(const std::string& s) {
  if (s == "standard_normal") return NoiseKind::standard_normal;
  if (s == "centered_uniform") return NoiseKind::centered_uniform;
  throw ConfigError("unknown noise '" + s + "' (expected standard_normal or centered_uniform)");
}

inline double number_or(const Json& doc, const char* key, double fallback) {
  if (!doc.contains(key)) return fallback;
  if (!doc[key].is_number()) throw ConfigError(std::string(key) + " must be a number");
  return doc[key].get<double>();
}

inline ParameterModel model_from_json(const Json& doc) {
  const std::string kind = require(doc, "kind").get<std::string>();
  const Dims dm = dims_from_json(doc);
  const double rho = number_or(doc, "discount", 1.0);
  try {
    if (kind == "noise_affine") {
      std::vector<NoiseTerm> terms;
      if (doc.contains("terms")) {
        for (const auto& t : doc["terms"]) {
          terms.push_back({matrix_from_json(require(t, "a"), "terms[].a"),
                           noise_kind_from_string(t.value("noise", "standard_normal"))});
        }
      }
      return NoiseAffineModel(dm, matrix_from_json(require(doc, "base_a"), "base_a"),
                              std::move(terms),
                              SymMatrix(matrix_from_json(require(doc, "n_cost"), "n_cost")), rho);
    }
    if (kind == "general") {
      const std::string sampler = require(doc, "sampler").get<std::string>();
      const auto samples = static_cast<std::size_t>(number_or(doc, "mc_samples", kDefaultMcSamples));
      const auto seed = doc.contains("mc_seed") ? doc["mc_seed"].get<std::uint64_t>() : kDefaultMcSeed;
      if (sampler == presets::kExpSinSqrtSampler) {
        const Json& b = require(doc, "blocks");
        presets::ExpSinSqrtBlocks blocks{
            matrix_from_json(require(b, "A1"), "blocks.A1"),
            matrix_from_json(require(b, "A2"), "blocks.A2"),
            matrix_from_json(require(b, "A3"), "blocks.A3"),
            matrix_from_json(require(b, "B1"), "blocks.B1"),
            matrix_from_json(require(b, "B2"), "blocks.B2")};
        auto model = presets::exp_sin_sqrt_model(blocks, rho, samples, seed);
        if (!(model.dims() == dm)) throw ConfigError("blocks do not match dims");
        return model;
      }
      throw ConfigError("unknown sampler '" + sampler + "'");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid model: ") + e.what());
  }
  throw ConfigError("unknown model kind '" + kind + "' (expected noise_affine or general)");
}

inline std::string preset_dir() {
  if (const char* env = std::getenv(kPresetDirEnv); env && *env) return env;
  return RLQ_PRESET_DIR;
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("malformed JSON in " + path + ": " + e.what());
  }
}

inline Json load_preset(const std::string& id) {
  if (id != "eg1" && id != "eg2" && id != "eg3") {
    throw ConfigError("unknown preset '" + id + "' (expected eg1, eg2 or eg3)");
  }
  return load_json_file(preset_dir() + "/" + id + ".json");
}

/// Applies "a.b.c=value". The value is parsed as JSON when possible and kept
/// as a string otherwise.
inline void apply_override(Json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override must look like key=value, got '" + std::string(assignment) + "'");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  Json value = Json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  Json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot - start);
    if (part.empty()) throw ConfigError("empty path component in '" + key + "'");
    if (!node->is_object()) throw ConfigError("'" + key + "' does not name an object path");
    if (dot == std::string::npos) {
      (*node)[part] = std::move(value);
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = Json::object();
    start = dot + 1;
  }
}

/// "1-20", "3", or "1,4,9" (ranges may be mixed into lists).
inline std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  std::string item;
  auto to_u64 = [&](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
      throw ConfigError("bad seed list '" + text + "'");
    }
    return std::stoull(s);
  };
  while (std::getline(ss, item, ',')) {
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      seeds.push_back(to_u64(item));
      continue;
    }
    const auto lo = to_u64(item.substr(0, dash));
    const auto hi = to_u64(item.substr(dash + 1));
    if (hi < lo) throw ConfigError("bad seed range '" + item + "'");
    for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  if (seeds.empty()) throw ConfigError("empty seed list");
  return seeds;
}

class ExperimentConfig {
 public:
  ExperimentConfig(Json doc, std::string source)
      : doc_(std::move(doc)), source_(std::move(source)), model_(model_from_json(doc_)) {}

  const Json& doc() const { return doc_; }
  const std::string& source() const { return source_; }
  const ParameterModel& model() const { return model_; }
  std::string name() const { return doc_.value("name", std::string("model")); }

  std::vector<std::uint64_t> seeds() const {
    const Json& e = experiment();
    if (!e.contains("seeds")) return {1};
    if (e["seeds"].is_string()) return parse_seed_list(e["seeds"].get<std::string>());
    return e["seeds"].get<std::vector<std::uint64_t>>();
  }

  std::size_t steps(std::size_t fallback = 2000) const {
    return experiment().value("steps", fallback);
  }

  std::vector<LearningSchedule> schedules() const {
    std::vector<LearningSchedule> out;
    const Json& e = experiment();
    if (!e.contains("schedules")) return {LearningSchedule::rational(2.0)};
    for (const auto& c : e["schedules"]) out.push_back(LearningSchedule::rational(c.get<double>()));
    if (out.empty()) throw ConfigError("experiment.schedules is empty");
    return out;
  }

  /// Discount rates to sweep; the model's own rate when absent.
  std::vector<double> rhos() const {
    const Json& e = experiment();
    if (!e.contains("rhos")) return {discount(model_)};
    return e["rhos"].get<std::vector<double>>();
  }

  std::vector<std::string> policies() const {
    const Json& e = experiment();
    if (!e.contains("policies")) return {"zero", "adaptive"};
    return e["policies"].get<std::vector<std::string>>();
  }

  std::vector<Vector> initial_states() const {
    const Json& e = experiment();
    const std::size_t n = dims(model_).n;
    if (!e.contains("x0")) {
      Vector x(n, 0.0);
      x[0] = 1.0;
      return {x};
    }
    auto xs = e["x0"].get<std::vector<Vector>>();
    for (const auto& x : xs) {
      if (x.size() != n) throw ConfigError("every experiment.x0 entry needs n components");
    }
    return xs;
  }

  std::optional<Matrix> fixed_gain() const {
    const Json& e = experiment();
    if (!e.contains("gain")) return std::nullopt;
    return matrix_from_json(e["gain"], "experiment.gain");
  }

  std::pair<double, double> bracket() const {
    const Json& e = experiment();
    if (!e.contains("bracket")) return {0.5, 4.0};
    const auto b = e["bracket"].get<std::vector<double>>();
    if (b.size() != 2) throw ConfigError("experiment.bracket needs two numbers");
    return {b[0], b[1]};
  }

  double bisect_tol() const { return experiment().value("bisect_tol", 1e-4); }
  std::size_t max_iters() const { return experiment().value("max_iters", std::size_t{200000}); }
  double tol() const { return experiment().value("tol", 1e-9); }

  std::optional<QMatrix> reference_q() const {
    if (!doc_.contains("reference_q")) return std::nullopt;
    return QMatrix(dims(model_), SymMatrix(matrix_from_json(doc_["reference_q"], "reference_q")));
  }

 private:
  const Json& experiment() const {
    static const Json empty = Json::object();
    return doc_.contains("experiment") ? doc_["experiment"] : empty;
  }

  Json doc_;
  std::string source_;
  ParameterModel model_;
};

/// Resolves a preset id or model file, then applies overrides in order.
inline ExperimentConfig load_config(const std::optional<std::string>& preset,
                                    const std::optional<std::string>& model_path,
                                    const std::vector<std::string>& overrides = {}) {
  if (preset.has_value() == model_path.has_value()) {
    throw ConfigError("exactly one of --preset or --model is required");
  }
  Json doc = preset ? load_preset(*preset) : load_json_file(*model_path);
  for (const auto& o : overrides) apply_override(doc, o);
  try {
    return ExperimentConfig(std::move(doc), preset ? "preset:" + *preset : *model_path);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("bad configuration value: ") + e.what());
  }
}

}  // namespace rlq::config
