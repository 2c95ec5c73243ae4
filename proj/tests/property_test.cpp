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

// Randomized checks over profitable firms. Seeds are fixed so failures
// reproduce; each test reports the draw index.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "prodinv/prodinv.hpp"
#include "support/fixtures.hpp"

namespace prodinv {
namespace {

using namespace fixtures;

constexpr Scenario kScenarios[] = {
    Scenario::kNoDebtWithStock, Scenario::kDebtWithStock, Scenario::kDebtNoStock,
    Scenario::kTotalRepaymentJump, Scenario::kPartialRepaymentJump};

template <class Check>
void for_draws(std::uint64_t seed, int per_scenario, Check check) {
  DrawGenerator gen(seed);
  for (Scenario s : kScenarios) {
    for (int i = 0; i < per_scenario; ++i) {
      const Draw d = gen.next(s);
      SCOPED_TRACE(std::string(to_string(s)) + " draw " + std::to_string(i));
      check(d);
    }
  }
}

double smallest_segment(const PiecewiseControl& policy) {
  double out = policy.horizon();
  for (const auto& seg : policy.segments()) out = std::min(out, seg.end - seg.start);
  return out;
}

TEST(Property, StockDepletionMatchesCrossing) {
  for_draws(11, 40, [](const Draw& d) {
    const auto& times = d.solution.times;
    if (times.stock.beyond_horizon || d.solution.start.stock == 0) return;
    const auto hit = find_zero_crossing(d.solution.trajectory, StateComponent::kStock, 0,
                                        d.params.horizon);
    ASSERT_TRUE(hit);
    EXPECT_NEAR(*hit, times.stock.time, 1e-9 * std::max(1.0, times.stock.time));
  });
}

TEST(Property, DebtClearanceMatchesCrossing) {
  for_draws(12, 40, [](const Draw& d) {
    const auto& times = d.solution.times;
    if (!times.has_debt || !times.debt_clearance || d.solution.start.debt == 0) return;
    const auto hit = find_zero_crossing(d.solution.trajectory, StateComponent::kDebt, 0,
                                        d.params.horizon);
    ASSERT_TRUE(hit);
    EXPECT_NEAR(*hit, *times.debt_clearance, 1e-9 * std::max(1.0, *times.debt_clearance));
  });
}

TEST(Property, ObjectiveFormulaMatchesTrajectory) {
  for_draws(13, 100, [](const Draw& d) {
    const double formula = objective_value(d.solution);
    const double traj = d.solution.trajectory.objective();
    EXPECT_NEAR(formula, traj, 1e-9 * std::max(1.0, std::abs(traj)));
  });
}

TEST(Property, Rk4AgreesWithExactSolution) {
  for_draws(14, 20, [](const Draw& d) {
    const Synthesis& s = d.solution;
    const double step = std::min(1e-3, smallest_segment(s.policy));
    const double diff = max_state_difference(integrate_rk4(d.params, s.start, s.policy, step),
                                             closed_form_trajectory(d.params, s.start, s.policy));
    EXPECT_LE(diff, 1e-7);
  });
}

TEST(Property, ClearanceOrderFollowsThreshold) {
  DrawGenerator gen(15);
  for (int i = 0; i < 200; ++i) {
    const Draw d = gen.next(Scenario::kDebtWithStock);
    const auto& times = d.solution.times;
    if (times.stock.beyond_horizon || !times.debt_clearance) continue;
    const double theta = clearance_threshold(d.params.interest_rate, d.params.max_repayment,
                                             times.stock.time);
    SCOPED_TRACE(i);
    if (d.init.debt < theta) {
      EXPECT_LE(*times.debt_clearance, times.stock.time);
    } else if (d.init.debt > theta) {
      EXPECT_GE(*times.debt_clearance, times.stock.time);
    }
  }
}

TEST(Property, ProductionSingularWhileStockEmpty) {
  for_draws(16, 30, [](const Draw& d) {
    const Certification cert = certify(d.solution);
    const ModelParams& m = d.params;
    const double from = std::min(d.solution.times.stock.time, m.horizon);
    const double scale = std::max({1.0, m.price, m.material_cost + m.variable_cost});
    for (int k = 0; k <= 20; ++k) {
      const double t = from + (m.horizon - from) * k / 20.0;
      EXPECT_NEAR(switching_values(m, cert.adjoint, t).production, 0, 1e-9 * scale) << t;
    }
  });
}

TEST(Property, CertificatesPass) {
  for_draws(17, 60, [](const Draw& d) {
    const Certification cert = certify(d.solution);
    for (const auto& r : cert.reports) {
      EXPECT_TRUE(r.passed()) << r.name << ": "
                              << (r.issues.empty() ? "" : r.issues.front().detail);
    }
  });
}

TEST(Property, StateStaysAdmissible) {
  for_draws(18, 60, [](const Draw& d) {
    const Trajectory& traj = d.solution.trajectory;
    EXPECT_TRUE(traj.feasible());
    const double tol = feasibility_tolerance(traj);
    for (int k = 0; k <= 200; ++k) {
      const State s = traj.at(d.params.horizon * k / 200.0);
      EXPECT_GE(s.profit, -tol);
      EXPECT_GE(s.debt, -tol);
      EXPECT_GE(s.stock, -tol);
      EXPECT_LE(s.stock, d.params.max_stock + tol);
    }
  });
}

TEST(Property, TrajectoryContinuousAtSwitches) {
  for_draws(19, 40, [](const Draw& d) {
    const Trajectory& traj = d.solution.trajectory;
    const double tol = 1e-12 * std::max(1.0, feasibility_tolerance(traj) / zero_tolerance(1.0));
    for (double t : traj.breakpoints()) {
      const State a = traj.before(t), b = traj.at(t);
      EXPECT_NEAR(a.profit, b.profit, tol);
      EXPECT_NEAR(a.debt, b.debt, tol);
      EXPECT_NEAR(a.stock, b.stock, tol);
    }
  });
}

TEST(Property, CoarseBruteForceNeverBeatsClosedForm) {
  for_draws(20, 4, [](const Draw& d) {
    const double closed = objective_value(d.solution);
    const BruteForceResult best = brute_force_best(
        d.params, d.solution.start, default_grid(d.params, d.solution.scenario, 40));
    EXPECT_LE(best.objective, closed + 1e-6 * std::max(1.0, std::abs(closed)));
  });
}

TEST(Property, JumpModeChainClearsDebt) {
  DrawGenerator gen(21);
  for (int i = 0; i < 40; ++i) {
    const Draw d = gen.next(Scenario::kPartialRepaymentJump);
    const double T = d.params.horizon;
    SCOPED_TRACE(i);
    try {
      const ChainEvaluation e =
          evaluate_chain(d.params, chain_plan(d.params, d.init, {T / 3, 2 * T / 3}, true));
      EXPECT_LE(e.trajectory.terminal().debt, zero_tolerance(d.init.debt));
      EXPECT_NEAR(e.objective, objective_value(d.solution),
                  1e-9 * std::max(1.0, std::abs(e.objective)));
    } catch (const Error& e) {
      ADD_FAILURE() << e.what();
    }
  }
}

}  // namespace
}  // namespace prodinv
