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

// Closed-form optimal policies. Every scenario produces at most two switching
// instants: the stock-depletion time, after which production runs at the
// sales ceiling, and the debt-clearance time, after which repayment only
// covers new material purchases.

#ifndef PRODINV_ANALYTIC_HPP_
#define PRODINV_ANALYTIC_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "prodinv/control.hpp"
#include "prodinv/dynamics.hpp"
#include "prodinv/error.hpp"
#include "prodinv/model.hpp"

namespace prodinv {

inline constexpr double kNever = std::numeric_limits<double>::infinity();

struct StockDepletion {
  double time = 0;              // closed-form value, may exceed the horizon
  bool beyond_horizon = false;  // time >= T: the stock never runs out
};

enum class SwitchOrder { kDebtFirst, kSimultaneous, kStockFirst, kNotApplicable };

inline std::string_view to_string(SwitchOrder o) {
  switch (o) {
    case SwitchOrder::kDebtFirst: return "t_D < t_S";
    case SwitchOrder::kSimultaneous: return "t_D = t_S";
    case SwitchOrder::kStockFirst: return "t_D > t_S";
    case SwitchOrder::kNotApplicable: return "n/a";
  }
  return "?";
}

struct SwitchingTimes {
  StockDepletion stock;
  bool has_debt = false;
  std::optional<double> debt_clearance;  // empty: not cleared within horizon
  SwitchOrder order = SwitchOrder::kNotApplicable;

  /// Stock depletion clipped to the horizon.
  double stock_end(double horizon) const {
    return std::min(stock.time, horizon);
  }
  /// Debt clearance, +inf when absent.
  double debt_end() const {
    return has_debt && debt_clearance ? *debt_clearance : (has_debt ? kNever : 0.0);
  }
};

enum class RepaymentRegime { kFullRate, kNoStock, kFromSales };

/// Instant the stock S0 runs out when selling at w_max without production.
inline StockDepletion stock_depletion_time(const ModelParams& m, double s0) {
  if (!(s0 >= 0)) throw Error(ErrorCode::kDomain, "S0 must be >= 0");
  const double t = std::log1p(m.outflow_rate * s0 / m.max_sales) / m.outflow_rate;
  return {t, t >= m.horizon};
}

namespace detail {

inline std::optional<double> within_horizon(double t, double horizon) {
  if (!std::isfinite(t) || t >= horizon) return std::nullopt;
  return t;
}

}  // namespace detail

/// Clearance while repaying at a constant net `rate` with no material
/// purchases: D' = r D - rate.
inline std::optional<double> clearance_before_depletion(double r, double rate,
                                                        double debt0) {
  const double x = r * debt0 / rate;
  if (!(x < 1)) return std::nullopt;
  return -std::log1p(-x) / r;
}

/// Clearance when the net repayment `rate` drops by `drop` at `t_s`
/// (production restarts) and the debt outlives the stock.
inline std::optional<double> clearance_after_depletion(double r, double rate,
                                                       double drop, double debt0,
                                                       double t_s) {
  const double num = rate - drop;
  const double den = rate - r * debt0 - drop * std::exp(-r * t_s);
  if (!(num > 0) || !(den > 0)) return std::nullopt;
  return std::log(num / den) / r;
}

/// Clearance with production running from the start (no initial stock).
inline std::optional<double> clearance_without_stock(double r, double max_repayment,
                                                     double material_outlay,
                                                     double debt0) {
  const double num = max_repayment - material_outlay;
  const double den = max_repayment - r * debt0 - material_outlay;
  if (!(num > 0) || !(den > 0)) return std::nullopt;
  return std::log(num / den) / r;
}

/// Debt level that is cleared exactly at `t_s` when repaying at `rate`.
inline double clearance_threshold(double r, double rate, double t_s) {
  return -rate * std::expm1(-r * t_s) / r;
}

/// Moment the debt `debt0` is fully repaid. For kFromSales, `debt0` is the
/// post-jump residual D0 - N0 and repayment uses all sales revenue.
inline std::optional<double> debt_clearance_time(const ModelParams& m, double debt0,
                                                 double t_s, RepaymentRegime regime) {
  if (!(debt0 > 0)) throw Error(ErrorCode::kDomain, "debt must be positive");
  const double r = m.interest_rate;
  const double w = m.max_sales;
  const double T = m.horizon;
  std::optional<double> t;
  switch (regime) {
    case RepaymentRegime::kNoStock:
      if (t_s != 0) throw Error(ErrorCode::kDomain, "no-stock regime needs t_S = 0");
      t = clearance_without_stock(r, m.max_repayment, m.material_cost * w, debt0);
      break;
    case RepaymentRegime::kFullRate:
    case RepaymentRegime::kFromSales: {
      const bool sales = regime == RepaymentRegime::kFromSales;
      const double rate = sales ? m.price * w - m.fixed_cost : m.max_repayment;
      const double drop =
          sales ? (m.material_cost + m.variable_cost) * w : m.material_cost * w;
      if (t_s >= T || debt0 <= clearance_threshold(r, rate, t_s)) {
        t = clearance_before_depletion(r, rate, debt0);
      } else {
        t = clearance_after_depletion(r, rate, drop, debt0, t_s);
      }
      break;
    }
  }
  return t ? detail::within_horizon(*t, T) : std::nullopt;
}

/// Instantaneous repayment of min(N0, D0) at t = 0.
inline JumpRecord initial_jump(const State& init) {
  if (!(init.debt > 0)) {
    throw Error(ErrorCode::kNoOpJump, "D0 = 0, nothing to repay");
  }
  return repayment_jump(init, 0.0);
}

inline SwitchingTimes switching_times(const ModelParams& m, const State& start,
                                      Scenario scenario) {
  SwitchingTimes times;
  times.stock = stock_depletion_time(m, start.stock);
  const double t_s = times.stock.time;
  switch (scenario) {
    case Scenario::kNoDebtWithStock:
    case Scenario::kTotalRepaymentJump:
      break;
    case Scenario::kDebtWithStock:
      times.has_debt = true;
      times.debt_clearance =
          debt_clearance_time(m, start.debt, t_s, RepaymentRegime::kFullRate);
      break;
    case Scenario::kDebtNoStock:
      times.has_debt = true;
      times.debt_clearance =
          debt_clearance_time(m, start.debt, 0.0, RepaymentRegime::kNoStock);
      break;
    case Scenario::kPartialRepaymentJump:
      times.has_debt = true;
      times.debt_clearance =
          debt_clearance_time(m, start.debt, t_s, RepaymentRegime::kFromSales);
      break;
  }
  if (times.has_debt && times.debt_clearance && !times.stock.beyond_horizon &&
      start.stock > 0) {
    const double d = *times.debt_clearance;
    const double tol = 1e-12 * std::max(1.0, t_s);
    times.order = std::abs(d - t_s) <= tol ? SwitchOrder::kSimultaneous
                  : d < t_s                ? SwitchOrder::kDebtFirst
                                           : SwitchOrder::kStockFirst;
  }
  return times;
}

/// Optimal control at time t given the switching times; `start` is the
/// (post-jump) entry state.
inline ControlValue optimal_control_at(const ModelParams& m, Scenario scenario,
                                       const SwitchingTimes& times, double t) {
  const double w = m.max_sales;
  const double u = t >= times.stock.time ? w : 0.0;
  const bool repaying = times.has_debt && t < times.debt_end();
  double v = m.material_cost * u;
  if (repaying) {
    v = scenario == Scenario::kPartialRepaymentJump
            ? m.price * w - m.variable_cost * u - m.fixed_cost
            : m.max_repayment;
  }
  return {u, v, w};
}

/// Assembles the bang-bang policy without checking feasibility.
inline PiecewiseControl build_policy(const ModelParams& m, Scenario scenario,
                                     const SwitchingTimes& times) {
  const double T = m.horizon;
  std::vector<double> cuts;
  auto add = [&](double t) {
    if (t > 0 && t < T) cuts.push_back(t);
  };
  add(times.stock.time);
  if (times.has_debt) add(times.debt_end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<ControlValue> values;
  values.push_back(optimal_control_at(m, scenario, times, 0.0));
  for (double c : cuts) values.push_back(optimal_control_at(m, scenario, times, c));
  return PiecewiseControl::from_switches(T, cuts, values);
}

struct Synthesis {
  Scenario scenario{};
  State initial;  // before any jump
  State start;    // after the jump, if one applies
  std::optional<JumpRecord> jump;
  SwitchingTimes times;
  PiecewiseControl policy;
  Trajectory trajectory;  // exact, with feasibility report

  bool feasible() const {
    return trajectory.feasible() && !policy.first_out_of_bounds(trajectory.params());
  }
};

/// Builds the policy and its exact trajectory; infeasibility is recorded in
/// the result rather than thrown.
inline Synthesis plan_policy(const ModelParams& m, const State& init,
                             Scenario scenario) {
  require_usable(m);
  require_valid_state(m, init);
  const bool jump_mode = is_jump_scenario(scenario);
  if (classify_scenario(m, init, jump_mode) != scenario) {
    throw Error(ErrorCode::kScenarioMismatch,
                std::string(to_string(scenario)) + " does not fit the initial state");
  }
  Synthesis out;
  out.scenario = scenario;
  out.initial = init;
  out.start = init;
  if (jump_mode && init.debt > 0) {
    out.jump = initial_jump(init);
    out.start = out.jump->post;
  }
  out.times = switching_times(m, out.start, scenario);
  out.policy = build_policy(m, scenario, out.times);
  out.trajectory = integrate_exact(m, init, out.policy, out.jump);
  return out;
}

/// Checked synthesis: throws kInfeasiblePolicy when the policy leaves the
/// control box or the state constraints.
inline Synthesis synthesize_policy(const ModelParams& m, const State& init,
                                   Scenario scenario) {
  Synthesis out = plan_policy(m, init, scenario);
  if (auto bad = out.policy.first_out_of_bounds(m)) {
    throw Error(ErrorCode::kInfeasiblePolicy,
                "control leaves its bounds on [" + std::to_string(bad->start) +
                    ", " + std::to_string(bad->end) + ")");
  }
  if (!out.trajectory.feasible()) {
    const Violation& v = out.trajectory.violations().front();
    throw Error(ErrorCode::kInfeasiblePolicy,
                std::string(to_string(v.constraint)) + " fails at t = " +
                    std::to_string(v.time));
  }
  return out;
}

inline Synthesis synthesize_policy(const ModelParams& m, const State& init,
                                   bool jump_mode) {
  return synthesize_policy(m, init, classify_scenario(m, init, jump_mode));
}

// Objective formulas. `t_s` is the stock depletion time clipped to T.

/// No debt: sell the stock, then produce for sale.
inline double objective_without_debt(const ModelParams& m, double profit0,
                                     double t_s) {
  const double w = m.max_sales, T = m.horizon;
  return profit0 + (m.price * w - m.fixed_cost) * T +
         (m.material_cost + m.variable_cost) * w * (t_s - T);
}

/// Debt repaid at v_max until `t_d`. Covers both orders of t_d and t_s; the
/// last term charges nothing when the stock runs out first.
inline double objective_with_repayment(const ModelParams& m, double profit0,
                                       double t_d, double t_s) {
  const double w = m.max_sales, T = m.horizon;
  const double A = m.material_cost, K = m.variable_cost;
  return profit0 + (A * w - m.max_repayment) * t_d + K * w * t_s +
         w * (m.price - A - K) * T - m.fixed_cost * T +
         A * w * std::max(t_s - t_d, 0.0);
}

/// Debt repaid at v_max until `t_d` with production from the start.
inline double objective_without_stock(const ModelParams& m, double profit0,
                                      double t_d) {
  const double w = m.max_sales, T = m.horizon;
  const double A = m.material_cost, K = m.variable_cost;
  return profit0 + (A * w - m.max_repayment) * t_d +
         w * (m.price - A - K) * T - m.fixed_cost * T;
}

/// Residual debt repaid out of sales until `t_d`; profit starts accruing
/// afterwards. `t_s_raw` is the unclipped depletion time.
inline double objective_partial_repayment(const ModelParams& m, double t_d,
                                          double t_s_raw) {
  const double w = m.max_sales, T = m.horizon;
  const double AK = m.material_cost + m.variable_cost;
  const double margin = operating_margin(m);
  if (t_s_raw > T) return (m.price * w - m.fixed_cost) * (T - t_d);
  if (t_s_raw < t_d) return margin * (T - t_d);
  return margin * (T - t_d) + AK * w * (t_s_raw - t_d);
}

/// N(T) - D(T) of the optimal policy. Uses the closed-form expression when
/// one exists (debt cleared inside the horizon), else the exact trajectory.
inline double objective_value(const Synthesis& s) {
  const ModelParams& m = s.trajectory.params();
  const double t_s = s.times.stock_end(m.horizon);
  switch (s.scenario) {
    case Scenario::kNoDebtWithStock:
    case Scenario::kTotalRepaymentJump:
      return objective_without_debt(m, s.start.profit, t_s);
    case Scenario::kDebtWithStock:
      if (!s.times.debt_clearance) break;
      return objective_with_repayment(m, s.start.profit, *s.times.debt_clearance, t_s);
    case Scenario::kDebtNoStock:
      if (!s.times.debt_clearance) break;
      return objective_without_stock(m, s.start.profit, *s.times.debt_clearance);
    case Scenario::kPartialRepaymentJump:
      if (!s.times.debt_clearance) break;
      return objective_partial_repayment(m, *s.times.debt_clearance, s.times.stock.time);
  }
  return s.trajectory.objective();
}

inline double objective_value(const ModelParams& m, const State& init,
                              Scenario scenario) {
  return objective_value(synthesize_policy(m, init, scenario));
}

}  // namespace prodinv

#endif  // PRODINV_ANALYTIC_HPP_
