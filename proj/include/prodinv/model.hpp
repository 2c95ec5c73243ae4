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

// Domain types of the production-inventory-debt model: firm constants, the
// (profit, debt, stock) state, control values, and scenario classification.

#ifndef PRODINV_MODEL_HPP_
#define PRODINV_MODEL_HPP_

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "prodinv/error.hpp"

namespace prodinv {

/// Constants of the firm. Money is in currency units, goods in product units.
struct ModelParams {
  double price = 0;           // retail price per unit sold
  double interest_rate = 0;   // growth rate of overdue payables
  double material_cost = 0;   // raw-material cost per unit produced
  double outflow_rate = 0;    // inventory loss rate (sales aside)
  double variable_cost = 0;   // indirect cost per unit produced
  double fixed_cost = 0;      // indirect cost per unit time
  double max_production = 0;
  double max_repayment = 0;
  double max_sales = 0;       // demand ceiling
  double max_stock = 0;       // warehouse capacity
  double horizon = 0;

  /// Indirect cost rate for production rate `u`; fixed costs persist at u = 0.
  double indirect_cost(double u) const { return variable_cost * u + fixed_cost; }
};

/// (N, D, S): cumulative net profit, overdue payables, finished-goods stock.
template <class Real>
struct BasicState {
  Real profit{};
  Real debt{};
  Real stock{};

  friend bool operator==(const BasicState&, const BasicState&) = default;
};

using State = BasicState<double>;

struct ControlValue {
  double production = 0;
  double repayment = 0;
  double sales = 0;

  friend bool operator==(const ControlValue&, const ControlValue&) = default;
};

enum class Scenario {
  kNoDebtWithStock,        // S1
  kDebtWithStock,          // S2
  kDebtNoStock,            // S3
  kTotalRepaymentJump,     // A1
  kPartialRepaymentJump,   // A2
};

inline std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::kNoDebtWithStock: return "S1";
    case Scenario::kDebtWithStock: return "S2";
    case Scenario::kDebtNoStock: return "S3";
    case Scenario::kTotalRepaymentJump: return "A1";
    case Scenario::kPartialRepaymentJump: return "A2";
  }
  return "?";
}

inline bool is_jump_scenario(Scenario s) {
  return s == Scenario::kTotalRepaymentJump ||
         s == Scenario::kPartialRepaymentJump;
}

/// Absolute tolerance used to accept a state component as zero.
inline double zero_tolerance(double scale) {
  return 1e-9 * std::max(1.0, std::abs(scale));
}

struct ParamViolation {
  std::string field;       // config key of the offending constant
  std::string constraint;  // human-readable constraint that failed
};

struct ValidationReport {
  std::vector<ParamViolation> violations;
  bool profitable = false;

  bool consistent() const { return violations.empty(); }
  bool usable() const { return consistent() && profitable; }
};

/// Profit rate at the operating point u = w = w_max with repayment A*w_max.
inline double operating_margin(const ModelParams& m) {
  return (m.price - m.material_cost - m.variable_cost) * m.max_sales -
         m.fixed_cost;
}

inline ValidationReport validate_params(const ModelParams& m) {
  ValidationReport report;
  auto require_positive = [&](double value, const char* field) {
    if (!(value > 0)) {
      report.violations.push_back({field, std::string(field) + " > 0"});
    }
  };
  require_positive(m.price, "p");
  require_positive(m.interest_rate, "r");
  require_positive(m.material_cost, "A");
  require_positive(m.outflow_rate, "alpha");
  require_positive(m.variable_cost, "K");
  require_positive(m.fixed_cost, "B");
  require_positive(m.max_production, "u_max");
  require_positive(m.max_repayment, "v_max");
  require_positive(m.max_sales, "w_max");
  require_positive(m.max_stock, "S_max");
  require_positive(m.horizon, "T");
  if (m.max_sales > m.max_production) {
    report.violations.push_back({"w_max", "w_max <= u_max"});
  }
  if (m.material_cost * m.max_sales > m.max_repayment) {
    report.violations.push_back({"v_max", "A*w_max <= v_max"});
  }
  // p*w > K*w + B + A*w, strict.
  report.profitable =
      m.price * m.max_sales >
      m.variable_cost * m.max_sales + m.fixed_cost + m.material_cost * m.max_sales;
  return report;
}

/// Throws unless the parameters are consistent and the firm is profitable.
inline void require_usable(const ModelParams& m) {
  const ValidationReport report = validate_params(m);
  if (!report.consistent()) {
    std::string detail;
    for (const auto& v : report.violations) {
      if (!detail.empty()) detail += "; ";
      detail += v.constraint;
    }
    throw Error(ErrorCode::kInvalidParams, detail);
  }
  if (!report.profitable) {
    throw Error(ErrorCode::kUnprofitable, "p*w_max <= (A + K)*w_max + B");
  }
}

inline double cost_rate(const ModelParams& m, double u) {
  if (!(u >= 0 && u <= m.max_production)) {
    throw Error(ErrorCode::kControlBounds,
                "production " + std::to_string(u) + " outside [0, u_max]");
  }
  return m.indirect_cost(u);
}

inline void require_valid_state(const ModelParams& m, const State& s) {
  if (!(s.profit >= 0) || !(s.debt >= 0) || !(s.stock >= 0) ||
      !(s.stock <= m.max_stock)) {
    throw Error(ErrorCode::kInvalidState,
                "need N >= 0, D >= 0, 0 <= S <= S_max");
  }
}

/// Maps an initial state to the policy family that governs it. Debt is
/// cleared by an instantaneous repayment when `jump_mode` is set.
inline Scenario classify_scenario(const ModelParams& m, const State& init,
                                  bool jump_mode) {
  require_valid_state(m, init);
  if (jump_mode) {
    return init.profit >= init.debt ? Scenario::kTotalRepaymentJump
                                    : Scenario::kPartialRepaymentJump;
  }
  if (init.debt == 0) return Scenario::kNoDebtWithStock;
  if (init.profit == 0) {
    throw Error(ErrorCode::kUncoveredInitialCondition,
                "N0 = 0 with D0 > 0 has no policy without jump mode");
  }
  return init.stock > 0 ? Scenario::kDebtWithStock : Scenario::kDebtNoStock;
}

}  // namespace prodinv

#endif  // PRODINV_MODEL_HPP_
