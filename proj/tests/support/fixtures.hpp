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

// Shared fixtures: the baseline firm, its five reference initial states, the
// independently derived expected values, and a seeded generator of random
// profitable instances.

#ifndef PRODINV_TESTS_SUPPORT_FIXTURES_HPP_
#define PRODINV_TESTS_SUPPORT_FIXTURES_HPP_

#include <cstdint>
#include <optional>
#include <random>

#include "prodinv/prodinv.hpp"

namespace prodinv::fixtures {

inline ModelParams baseline() {
  ModelParams m;
  m.price = 10;
  m.interest_rate = 0.1;
  m.material_cost = 2;
  m.outflow_rate = 0.5;
  m.variable_cost = 3;
  m.fixed_cost = 5;
  m.max_production = 8;
  m.max_repayment = 50;
  m.max_sales = 5;
  m.max_stock = 100;
  m.horizon = 10;
  return m;
}

struct Case {
  const char* name;
  State init;
  bool jump_mode;
  Scenario scenario;
};

inline constexpr Case kNoDebt{"S1", {20, 0, 10}, false, Scenario::kNoDebtWithStock};
inline constexpr Case kDebtWithStock{"S2", {20, 10, 10}, false, Scenario::kDebtWithStock};
inline constexpr Case kDebtNoStock{"S3", {20, 10, 0}, false, Scenario::kDebtNoStock};
inline constexpr Case kPartialJump{"A2", {20, 30, 10}, true, Scenario::kPartialRepaymentJump};
inline constexpr Case kTotalJump{"A1", {20, 10, 10}, true, Scenario::kTotalRepaymentJump};
inline constexpr Case kAllCases[] = {kNoDebt, kDebtWithStock, kDebtNoStock, kPartialJump,
                                     kTotalJump};

// Frozen values from tests/oracle/derive_expected.py (30-digit Taylor
// integration of the state system under feedback rules).
namespace expected {
inline constexpr double kStockDepletion = 1.38629436111989;
inline constexpr double kClearanceWithStock = 0.202027073175194;
inline constexpr double kClearanceNoStock = 0.253178079842899;
inline constexpr double kClearancePartial = 0.224728558520586;
inline constexpr double kObjectiveNoDebt = 254.657359027997;
inline constexpr double kObjectiveDebtWithStock = 244.556005369238;
inline constexpr double kObjectiveDebtNoStock = 209.872876806284;
inline constexpr double kObjectivePartial = 224.544573894571;
inline constexpr double kObjectiveTotalJump = 244.657359027997;
// Stock just large enough to outlast T = 10, and what remains at T.
inline constexpr double kLastingStock = 1475.13159103;
inline constexpr double kLastingStockRemainder = 0.00673794699909;
}  // namespace expected

inline double expected_objective(Scenario s) {
  switch (s) {
    case Scenario::kNoDebtWithStock: return expected::kObjectiveNoDebt;
    case Scenario::kDebtWithStock: return expected::kObjectiveDebtWithStock;
    case Scenario::kDebtNoStock: return expected::kObjectiveDebtNoStock;
    case Scenario::kPartialRepaymentJump: return expected::kObjectivePartial;
    case Scenario::kTotalRepaymentJump: return expected::kObjectiveTotalJump;
  }
  return 0;
}

struct Draw {
  ModelParams params;
  State init;
  bool jump_mode = false;
  Synthesis solution;
};

/// Random profitable firms whose optimal policy is feasible. Repayment
/// capacity is drawn well above the operating cash flow and debts are small
/// against it, so debt clears early in the horizon.
class DrawGenerator {
 public:
  explicit DrawGenerator(std::uint64_t seed) : rng_(seed) {}

  ModelParams params() {
    ModelParams m;
    m.material_cost = uniform(0.5, 3);
    m.variable_cost = uniform(0.5, 3);
    m.price = m.material_cost + m.variable_cost + uniform(1, 10);
    m.max_sales = uniform(1, 10);
    m.fixed_cost = uniform(0.05, 0.8) * operating_margin_before_fixed(m);
    m.interest_rate = uniform(0.01, 0.3);
    m.outflow_rate = uniform(0.05, 1.0);
    m.max_production = m.max_sales * uniform(1, 2);
    m.max_repayment = m.price * m.max_sales * uniform(1, 5);
    m.max_stock = uniform(50, 200);
    m.horizon = uniform(2, 20);
    return m;
  }

  State init(const ModelParams& m, Scenario s) {
    const double stock = uniform(0.5, std::min(30.0, m.max_stock));
    const double debt = uniform(0.01, 0.3) * m.max_repayment;
    switch (s) {
      case Scenario::kNoDebtWithStock: return {uniform(1, 50), 0, stock};
      case Scenario::kDebtWithStock: return {debt + uniform(1, 50), debt, stock};
      case Scenario::kDebtNoStock: return {debt + uniform(1, 50), debt, 0};
      case Scenario::kTotalRepaymentJump: {
        const double d = uniform(0.1, 30);
        return {d + uniform(0, 50), d, stock};
      }
      case Scenario::kPartialRepaymentJump: {
        const double n = uniform(0, 30);
        return {n, n + uniform(0.1, 30), stock};
      }
    }
    return {};
  }

  /// Next instance of `s` whose policy is feasible; with `cleared`, debt
  /// must also be repaid before the horizon.
  Draw next(Scenario s, bool cleared = true) {
    for (;;) {
      Draw d;
      d.params = params();
      d.init = init(d.params, s);
      d.jump_mode = is_jump_scenario(s);
      try {
        d.solution = synthesize_policy(d.params, d.init, s);
      } catch (const Error&) {
        ++rejected_;
        continue;
      }
      if (cleared && d.solution.times.has_debt && !d.solution.times.debt_clearance) {
        ++rejected_;
        continue;
      }
      return d;
    }
  }

  int rejected() const { return rejected_; }

 private:
  static double operating_margin_before_fixed(const ModelParams& m) {
    return (m.price - m.material_cost - m.variable_cost) * m.max_sales;
  }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }

  std::mt19937_64 rng_;
  int rejected_ = 0;
};

}  // namespace prodinv::fixtures

#endif  // PRODINV_TESTS_SUPPORT_FIXTURES_HPP_
