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

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "prodinv/adjoint.hpp"
#include "prodinv/verifier.hpp"
#include "support/fixtures.hpp"

namespace prodinv {
namespace {

using namespace fixtures;

// Plain RK4 on the adjoint system, marching from T back to 0 one multiplier
// piece at a time so that no step straddles a discontinuity.
std::array<double, 3> adjoint_rk4_at_zero(const ModelParams& m, const MultiplierSet& mult,
                                          int steps_per_piece) {
  std::vector<double> knots{0.0, m.horizon};
  for (const auto& l : mult.lambda) l.append_breakpoints(knots);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

  std::array<double, 3> x{mult.mu[0] + 1, mult.mu[1] - 1, mult.mu[2] - mult.mu[3]};
  auto add = [](std::array<double, 3> a, double s, const std::array<double, 3>& b) {
    for (int i = 0; i < 3; ++i) a[i] += s * b[i];
    return a;
  };
  for (std::size_t k = knots.size() - 1; k > 0; --k) {
    const double lo = knots[k - 1], hi = knots[k], mid = 0.5 * (lo + hi);
    auto lambda = [&](int i, double t) {
      const ExpPiece* p = mult.lambda[i].piece_at(mid);
      return p ? (*p)(t) : 0.0;
    };
    auto rhs = [&](double t, const std::array<double, 3>& y) {
      return std::array<double, 3>{-lambda(0, t),
                                   -m.interest_rate * y[1] - lambda(1, t),
                                   m.outflow_rate * y[2] - lambda(2, t) + lambda(3, t)};
    };
    const double h = -(hi - lo) / steps_per_piece;
    double t = hi;
    for (int i = 0; i < steps_per_piece; ++i) {
      const auto k1 = rhs(t, x);
      const auto k2 = rhs(t + h / 2, add(x, h / 2, k1));
      const auto k3 = rhs(t + h / 2, add(x, h / 2, k2));
      const auto k4 = rhs(t + h, add(x, h, k3));
      for (int j = 0; j < 3; ++j) x[j] += h / 6 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
      t += h;
    }
  }
  return x;
}

TEST(AdjointBackward, NoDebtMultipliers) {
  const ModelParams m = baseline();
  const Synthesis s = synthesize_policy(m, kNoDebt.init, kNoDebt.scenario);
  const AdjointTrajectory adj =
      adjoint_backward(m, multiplier_set_for_scenario(m, s.scenario, s.times));
  const double t_s = expected::kStockDepletion, AK = 5;
  for (double t = 0; t <= 10; t += 0.125) {
    const auto psi = adj.at(t);
    EXPECT_DOUBLE_EQ(psi[0], 1);
    EXPECT_DOUBLE_EQ(psi[1], -1);
    if (t >= t_s) {
      EXPECT_DOUBLE_EQ(psi[2], AK);
    } else {
      EXPECT_NEAR(psi[2], AK * std::exp(m.outflow_rate * (t - t_s)), 1e-12);
    }
  }
}

TEST(AdjointBackward, Homogeneous) {
  const ModelParams m = baseline();
  const AdjointTrajectory adj = adjoint_backward(m, MultiplierSet{});
  for (double t = 0; t <= 10; t += 0.5) {
    const auto psi = adj.at(t);
    EXPECT_EQ(psi[0], 1);
    EXPECT_NEAR(psi[1], -std::exp(m.interest_rate * (10 - t)), 1e-12);
    EXPECT_EQ(psi[2], 0);
  }
}

TEST(AdjointBackward, MatchesNumericalIntegration) {
  const ModelParams m = baseline();
  for (const Case& c : kAllCases) {
    const Synthesis s = synthesize_policy(m, c.init, c.scenario);
    const MultiplierSet mult = multiplier_set_for_scenario(m, s.scenario, s.times);
    const AdjointTrajectory adj = adjoint_backward(m, mult);
    const auto numeric = adjoint_rk4_at_zero(m, mult, 2000);
    const auto exact = adj.at(0);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(exact[i], numeric[i], 1e-10) << c.name << i;
  }
}

TEST(AdjointBackward, ForwardReconstructionHitsTerminalValues) {
  const ModelParams m = baseline();
  for (const Case& c : kAllCases) {
    const Synthesis s = synthesize_policy(m, c.init, c.scenario);
    const AdjointTrajectory adj =
        adjoint_backward(m, multiplier_set_for_scenario(m, s.scenario, s.times));
    EXPECT_LT(forward_terminal_mismatch(adj), 1e-12) << c.name;
  }
}

TEST(AdjointBackward, ContinuousAtKnots) {
  const ModelParams m = baseline();
  const Synthesis s = synthesize_policy(m, kDebtWithStock.init, kDebtWithStock.scenario);
  const AdjointTrajectory adj =
      adjoint_backward(m, multiplier_set_for_scenario(m, s.scenario, s.times));
  for (double k : adj.knots()) {
    if (k <= 0 || k >= 10) continue;
    const auto lo = adj.at(k - 1e-10), hi = adj.at(k);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(lo[i], hi[i], 1e-8);
  }
}

TEST(PiecewiseExp, Evaluation) {
  const PiecewiseExp f({{0, 1, 1, 2, -1, 1}, {1, 3, 4, 0, 0, 0}});
  EXPECT_DOUBLE_EQ(f(0), 1 + 2 * std::exp(1.0));
  EXPECT_DOUBLE_EQ(f(1), 4);
  EXPECT_DOUBLE_EQ(f(3), 4);
  EXPECT_EQ(f(4), 0);
  EXPECT_DOUBLE_EQ(f.minimum(), 3);
  EXPECT_EQ(PiecewiseExp::constant(2, 2, 5).pieces().size(), 0u);
}

}  // namespace
}  // namespace prodinv
