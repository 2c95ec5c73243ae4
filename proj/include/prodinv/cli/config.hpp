// Copyright 2026 The prodinv Authors
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

// Run configuration: one JSON document per run.
//
//   {
//     "params":  {"p": 10, "r": 0.1, "A": 2, "alpha": 0.5, "K": 3, "B": 5,
//                 "u_max": 8, "v_max": 50, "w_max": 5, "S_max": 100, "T": 10},
//     "init":    {"N0": 20, "D0": 0, "S0": 10},
//     "jump_mode": false,
//     "options": {"rk4_step": 1e-3, "brute_nt": 200,
//                 "brute_levels": {"u": [...], "v": [...], "w": [...]},
//                 "chain_breakpoints": [5], "out_dir": "out"}
//   }

#ifndef PRODINV_CLI_CONFIG_HPP_
#define PRODINV_CLI_CONFIG_HPP_

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "prodinv/error.hpp"
#include "prodinv/model.hpp"

namespace prodinv::cli {

struct RunOptions {
  double rk4_step = 1e-3;
  int brute_nt = 200;
  std::optional<std::vector<double>> brute_u;
  std::optional<std::vector<double>> brute_v;
  std::optional<std::vector<double>> brute_w;
  std::vector<double> chain_breakpoints;
  std::optional<std::string> out_dir;
};

struct RunConfig {
  ModelParams params;
  State init;
  bool jump_mode = false;
  RunOptions options;
};

namespace detail {

using nlohmann::json;

[[noreturn]] inline void reject(const std::string& path, const std::string& why) {
  throw Error(ErrorCode::kConfiguration, path + ": " + why);
}

inline void only_keys(const json& obj, const std::string& path,
                      const std::set<std::string>& allowed) {
  if (!obj.is_object()) reject(path.empty() ? "document" : path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) {
      reject(path.empty() ? key : path + "." + key, "unknown key");
    }
  }
}

inline double number(const json& obj, const std::string& path, const std::string& key) {
  const std::string full = path + "." + key;
  if (!obj.contains(key)) reject(full, "missing");
  const json& v = obj.at(key);
  if (!v.is_number()) reject(full, "expected a number");
  return v.get<double>();
}

inline std::vector<double> numbers(const json& v, const std::string& path) {
  if (!v.is_array()) reject(path, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) reject(path, "expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace detail

/// Parses and validates a configuration document. Every failure is an
/// Error with code kConfiguration whose message starts with the key path.
/// A zero horizon passes here; commands other than simulate reject it.
inline RunConfig parse_config(const std::string& text) {
  using detail::json;
  using detail::reject;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    reject("document", e.what());
  }
  detail::only_keys(doc, "", {"params", "init", "jump_mode", "options"});
  if (!doc.contains("params")) reject("params", "missing");
  if (!doc.contains("init")) reject("init", "missing");

  RunConfig cfg;
  const json& p = doc["params"];
  detail::only_keys(p, "params", {"p", "r", "A", "alpha", "K", "B", "u_max", "v_max",
                                  "w_max", "S_max", "T"});
  ModelParams& m = cfg.params;
  m.price = detail::number(p, "params", "p");
  m.interest_rate = detail::number(p, "params", "r");
  m.material_cost = detail::number(p, "params", "A");
  m.outflow_rate = detail::number(p, "params", "alpha");
  m.variable_cost = detail::number(p, "params", "K");
  m.fixed_cost = detail::number(p, "params", "B");
  m.max_production = detail::number(p, "params", "u_max");
  m.max_repayment = detail::number(p, "params", "v_max");
  m.max_sales = detail::number(p, "params", "w_max");
  m.max_stock = detail::number(p, "params", "S_max");
  m.horizon = detail::number(p, "params", "T");
  const ValidationReport report = validate_params(m);
  for (const auto& v : report.violations) {
    if (v.field == "T" && m.horizon == 0) continue;
    reject("params." + v.field, "violates " + v.constraint);
  }
  if (!report.profitable) {
    reject("params", "unprofitable: p*w_max <= (A + K)*w_max + B");
  }

  const json& init = doc["init"];
  detail::only_keys(init, "init", {"N0", "D0", "S0"});
  cfg.init = {detail::number(init, "init", "N0"), detail::number(init, "init", "D0"),
              detail::number(init, "init", "S0")};
  if (!(cfg.init.profit >= 0)) reject("init.N0", "must be >= 0");
  if (!(cfg.init.debt >= 0)) reject("init.D0", "must be >= 0");
  if (!(cfg.init.stock >= 0 && cfg.init.stock <= m.max_stock)) {
    reject("init.S0", "must lie in [0, S_max]");
  }

  if (doc.contains("jump_mode")) {
    if (!doc["jump_mode"].is_boolean()) reject("jump_mode", "expected a boolean");
    cfg.jump_mode = doc["jump_mode"].get<bool>();
  }

  if (doc.contains("options")) {
    const json& o = doc["options"];
    detail::only_keys(o, "options", {"rk4_step", "brute_nt", "brute_levels",
                                     "chain_breakpoints", "out_dir"});
    RunOptions& opt = cfg.options;
    if (o.contains("rk4_step")) {
      opt.rk4_step = detail::number(o, "options", "rk4_step");
      if (!(opt.rk4_step > 0)) reject("options.rk4_step", "must be > 0");
    }
    if (o.contains("brute_nt")) {
      if (!o["brute_nt"].is_number_integer() || o["brute_nt"].get<long long>() < 1) {
        reject("options.brute_nt", "expected a positive integer");
      }
      opt.brute_nt = o["brute_nt"].get<int>();
    }
    if (o.contains("brute_levels")) {
      const json& l = o["brute_levels"];
      detail::only_keys(l, "options.brute_levels", {"u", "v", "w"});
      if (l.contains("u")) opt.brute_u = detail::numbers(l["u"], "options.brute_levels.u");
      if (l.contains("v")) opt.brute_v = detail::numbers(l["v"], "options.brute_levels.v");
      if (l.contains("w")) opt.brute_w = detail::numbers(l["w"], "options.brute_levels.w");
    }
    if (o.contains("chain_breakpoints")) {
      opt.chain_breakpoints =
          detail::numbers(o["chain_breakpoints"], "options.chain_breakpoints");
    }
    if (o.contains("out_dir")) {
      if (!o["out_dir"].is_string()) reject("options.out_dir", "expected a string");
      opt.out_dir = o["out_dir"].get<std::string>();
    }
  }
  return cfg;
}

}  // namespace prodinv::cli

#endif  // PRODINV_CLI_CONFIG_HPP_
