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

// Exhaustive search over piecewise-constant policies on a uniform switch grid.
// Candidates have up to three phases separated by two grid instants; each
// phase takes one combination of the configured (u, v, w) levels, so every
// control component switches at most twice.

#ifndef PRODINV_BRUTE_FORCE_HPP_
#define PRODINV_BRUTE_FORCE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "prodinv/control.hpp"
#include "prodinv/error.hpp"
#include "prodinv/model.hpp"

namespace prodinv {

struct BruteForceGrid {
  int intervals = 200;  // switch instants are k * T / intervals
  std::vector<double> production;
  std::vector<double> repayment;
  std::vector<double> sales;
};

/// Bang levels plus the operating-point values: u in {0, w_max, u_max},
/// v in {0, A w_max, v_max}, w in {0, w_max}.
inline BruteForceGrid default_grid(const ModelParams& m, int intervals = 200) {
  return {intervals,
          {0.0, m.max_sales, m.max_production},
          {0.0, m.material_cost * m.max_sales, m.max_repayment},
          {0.0, m.max_sales}};
}

/// Default grid for a scenario. Partial repayment also offers the two rates
/// it uses while paying debt out of sales, p w_max - B and p w_max - K w_max - B.
inline BruteForceGrid default_grid(const ModelParams& m, Scenario scenario,
                                   int intervals = 200) {
  BruteForceGrid g = default_grid(m, intervals);
  if (scenario == Scenario::kPartialRepaymentJump) {
    const double sales = m.price * m.max_sales - m.fixed_cost;
    for (double v : {sales, sales - m.variable_cost * m.max_sales}) {
      if (v > 0 && v < m.max_repayment) g.repayment.push_back(v);
    }
  }
  return g;
}

struct BruteForceResult {
  PiecewiseControl policy;
  double objective = 0;
  std::uint64_t evaluated = 0;  // complete candidates reached
};

namespace detail {

inline std::vector<double> checked_levels(std::vector<double> levels, double bound,
                                          const char* name) {
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  const std::string key = std::string("brute_levels.") + name;
  if (levels.empty() || levels.front() != 0 || levels.back() != bound) {
    throw Error(ErrorCode::kConfiguration, key + " must contain 0 and the bound");
  }
  return levels;
}

struct FastState {
  double n, d, s;
};

}  // namespace detail

/// Best feasible N(T) - D(T) over the candidate class. Ties keep the
/// candidate met first: earlier first switch, then earlier second switch,
/// then lexicographic level indices; constant policies come last.
inline BruteForceResult brute_force_best(const ModelParams& m, const State& init,
                                         const BruteForceGrid& grid) {
  if (grid.intervals < 1) {
    throw Error(ErrorCode::kConfiguration, "brute_nt must be >= 1");
  }
  const auto us = detail::checked_levels(grid.production, m.max_production, "u");
  const auto vs = detail::checked_levels(grid.repayment, m.max_repayment, "v");
  const auto ws = detail::checked_levels(grid.sales, m.max_sales, "w");

  struct Combo {
    ControlValue value;
    double profit_rate, debt_inflow, stock_inflow;
  };
  std::vector<Combo> combos;
  for (double u : us) {
    for (double v : vs) {
      for (double w : ws) {
        combos.push_back({{u, v, w},
                          m.price * w - v - m.variable_cost * u - m.fixed_cost,
                          m.material_cost * u - v, u - w});
      }
    }
  }

  const int n = grid.intervals;
  const double T = m.horizon, r = m.interest_rate, alpha = m.outflow_rate;
  std::vector<double> span(n + 1), growth(n + 1), decay(n + 1);
  for (int k = 0; k <= n; ++k) {
    span[k] = T * k / n;
    growth[k] = std::expm1(r * span[k]);
    decay[k] = -std::expm1(-alpha * span[k]);
  }
  auto advance = [&](const detail::FastState& x, const Combo& c, int k) {
    return detail::FastState{
        x.n + c.profit_rate * span[k],
        x.d * (1 + growth[k]) + c.debt_inflow * growth[k] / r,
        x.s * (1 - decay[k]) + c.stock_inflow * decay[k] / alpha};
  };
  // Components are monotone along a constant-control phase.
  auto admissible = [&](const detail::FastState& x) {
    const double tol = zero_tolerance(std::max({std::abs(x.n), std::abs(x.d), std::abs(x.s)}));
    return x.n >= -tol && x.d >= -tol && x.s >= -tol && x.s <= m.max_stock + tol;
  };

  const detail::FastState x0{init.profit, init.debt, init.stock};
  bool found = false;
  double best = 0;
  int best_i1 = 0, best_i2 = 0;
  std::size_t best_c[3] = {0, 0, 0};
  std::uint64_t evaluated = 0;
  auto offer = [&](const detail::FastState& x, int i1, int i2, std::size_t c1,
                   std::size_t c2, std::size_t c3) {
    ++evaluated;
    const double value = x.n - x.d;
    if (!found || value > best) {
      found = true;
      best = value;
      best_i1 = i1;
      best_i2 = i2;
      best_c[0] = c1;
      best_c[1] = c2;
      best_c[2] = c3;
    }
  };

  if (admissible(x0)) {
    const std::size_t nc = combos.size();
    for (int i1 = 1; i1 < n; ++i1) {
      for (std::size_t c1 = 0; c1 < nc; ++c1) {
        const auto x1 = advance(x0, combos[c1], i1);
        if (!admissible(x1)) continue;
        for (int i2 = i1 + 1; i2 <= n; ++i2) {
          for (std::size_t c2 = 0; c2 < nc; ++c2) {
            if (c2 == c1) continue;
            const auto x2 = advance(x1, combos[c2], i2 - i1);
            if (!admissible(x2)) continue;
            if (i2 == n) {
              offer(x2, i1, n, c1, c2, c2);
              continue;
            }
            for (std::size_t c3 = 0; c3 < nc; ++c3) {
              if (c3 == c2) continue;
              const auto x3 = advance(x2, combos[c3], n - i2);
              if (admissible(x3)) offer(x3, i1, i2, c1, c2, c3);
            }
          }
        }
      }
    }
    for (std::size_t c = 0; c < nc; ++c) {
      const auto x = advance(x0, combos[c], n);
      if (admissible(x)) offer(x, n, n, c, c, c);
    }
  }
  if (!found) {
    throw Error(ErrorCode::kNoFeasibleCandidate, "every candidate violates a state constraint");
  }

  std::vector<double> times;
  std::vector<ControlValue> values{combos[best_c[0]].value};
  if (best_i1 < n) {
    times.push_back(span[best_i1]);
    values.push_back(combos[best_c[1]].value);
    if (best_i2 < n) {
      times.push_back(span[best_i2]);
      values.push_back(combos[best_c[2]].value);
    }
  }
  return {PiecewiseControl::from_switches(T, times, values), best, evaluated};
}

}  // namespace prodinv

#endif  // PRODINV_BRUTE_FORCE_HPP_
