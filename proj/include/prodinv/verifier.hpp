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

// Maximum-principle certificates for a synthesized policy: multiplier
// nonnegativity, complementary slackness, transversality, and pointwise
// maximization of the Hamiltonian.

#ifndef PRODINV_VERIFIER_HPP_
#define PRODINV_VERIFIER_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "prodinv/adjoint.hpp"
#include "prodinv/analytic.hpp"
#include "prodinv/control.hpp"
#include "prodinv/dynamics.hpp"
#include "prodinv/model.hpp"

namespace prodinv {

struct SwitchingValues {
  double production = 0;  // coefficient of u in H
  double repayment = 0;   // coefficient of v
  double sales = 0;       // coefficient of w
};

inline SwitchingValues switching_values(const ModelParams& m,
                                        const std::array<double, 3>& psi) {
  return {-m.variable_cost * psi[0] + m.material_cost * psi[1] + psi[2],
          -psi[0] - psi[1], m.price * psi[0] - psi[2]};
}

inline SwitchingValues switching_values(const ModelParams& m,
                                        const AdjointTrajectory& adj, double t) {
  return switching_values(m, adj.at(t));
}

inline double hamiltonian(const ModelParams& m, const std::array<double, 3>& psi,
                          const State& s, const ControlValue& c) {
  const SwitchingValues th = switching_values(m, psi);
  return th.production * c.production + th.repayment * c.repayment +
         th.sales * c.sales - m.fixed_cost * psi[0] +
         m.interest_rate * s.debt * psi[1] - m.outflow_rate * s.stock * psi[2];
}

struct CertIssue {
  double time = 0;
  std::string detail;
};

struct CertReport {
  std::string name;
  std::vector<CertIssue> issues;
  int singular_segments = 0;

  bool passed() const { return issues.empty(); }
};

/// Check instants: a uniform grid of 10 * ceil(T) intervals plus each
/// breakpoint and its neighbours at +-1e-9, clipped to [0, T].
inline std::vector<double> check_grid(double horizon, const std::vector<double>& breaks) {
  const int n = std::max(1, 10 * static_cast<int>(std::ceil(horizon)));
  std::vector<double> out;
  for (int i = 0; i <= n; ++i) out.push_back(horizon * i / n);
  for (double b : breaks) {
    for (double t : {b - 1e-9, b, b + 1e-9}) {
      if (t >= 0 && t <= horizon) out.push_back(t);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Multipliers certifying the scenario's policy. With a = min(t_S, T) and
/// d = min(t_D, T) (d = 0 without debt): the debt multiplier is r once the
/// debt is gone; the stock multiplier is alpha (A + K) once both stock and
/// debt are gone, and on [a, d) it keeps production singular while the debt
/// is still being repaid; in the partial-repayment scenario the profit
/// multiplier r exp(r (d - t)) holds N at zero until the debt is cleared.
inline MultiplierSet multiplier_set_for_scenario(const ModelParams& m,
                                                 Scenario scenario,
                                                 const SwitchingTimes& times) {
  const double T = m.horizon;
  const double r = m.interest_rate, alpha = m.outflow_rate;
  const double A = m.material_cost, K = m.variable_cost;
  const double a = times.stock_end(T);
  const double d = std::min(times.debt_end(), T);
  const bool partial = scenario == Scenario::kPartialRepaymentJump;

  MultiplierSet out;
  if (partial) out.lambda[0] = PiecewiseExp({{0, d, 0, r, -r, d}});
  out.lambda[1] = PiecewiseExp::constant(d, T, r);
  std::vector<ExpPiece> stock;
  if (a < d) {
    stock.push_back(partial ? ExpPiece{a, d, 0, (alpha + r) * (A + K), -r, d}
                            : ExpPiece{a, d, alpha * K, (alpha + r) * A, -r, d});
  }
  stock.push_back({std::max(a, d), T, alpha * (A + K), 0, 0, 0});
  out.lambda[2] = PiecewiseExp(std::move(stock));
  out.mu[2] = times.stock.time < T ? A + K : 0.0;
  return out;
}

inline CertReport check_nonnegativity(const MultiplierSet& mult, double tol) {
  CertReport rep{"multiplier-nonnegativity", {}, 0};
  for (int i = 0; i < 4; ++i) {
    const double lo = mult.lambda[i].minimum();
    if (lo < -tol) {
      rep.issues.push_back({0, "lambda" + std::to_string(i + 1) + " min " + std::to_string(lo)});
    }
    if (mult.mu[i] < 0) {
      rep.issues.push_back({0, "mu" + std::to_string(i + 1) + " < 0"});
    }
  }
  return rep;
}

/// lambda_i * g_i(x(t)) = 0 on the grid and mu_i * g_i(x(T)) = 0, where
/// g = (N, D, S, S - S_max). `tol` is scaled by the trajectory magnitude.
inline CertReport check_slackness(const ModelParams& m, const MultiplierSet& mult,
                                  const Trajectory& traj, double tol) {
  CertReport rep{"slackness", {}, 0};
  const double T = m.horizon;
  const double scaled = tol * feasibility_tolerance(traj) / zero_tolerance(1.0);
  auto gaps = [&](const State& s) {
    return std::array<double, 4>{s.profit, s.debt, s.stock, s.stock - m.max_stock};
  };
  std::vector<double> breaks = traj.breakpoints();
  for (const auto& l : mult.lambda) l.append_breakpoints(breaks);
  for (double t : check_grid(T, breaks)) {
    const auto g = gaps(traj.at(t));
    for (int i = 0; i < 4; ++i) {
      const double prod = mult.lambda[i](t) * g[i];
      if (std::abs(prod) > scaled) {
        rep.issues.push_back({t, "lambda" + std::to_string(i + 1) + " * g = " +
                                     std::to_string(prod)});
      }
    }
  }
  const auto g = gaps(traj.terminal());
  for (int i = 0; i < 4; ++i) {
    const double prod = mult.mu[i] * g[i];
    if (std::abs(prod) > scaled) {
      rep.issues.push_back({T, "mu" + std::to_string(i + 1) + " * g(T) = " +
                                   std::to_string(prod)});
    }
  }
  return rep;
}

/// psi(T) must equal (mu1 + 1, mu2 - 1, mu3 - mu4) exactly.
inline CertReport check_transversality(const MultiplierSet& mult,
                                       const AdjointTrajectory& adj) {
  CertReport rep{"transversality", {}, 0};
  const auto psi = adj.at(adj.horizon());
  const std::array<double, 3> want{mult.mu[0] + 1, mult.mu[1] - 1,
                                   mult.mu[2] - mult.mu[3]};
  for (int i = 0; i < 3; ++i) {
    if (psi[i] != want[i]) {
      rep.issues.push_back({adj.horizon(), "psi" + std::to_string(i + 1) + "(T) = " +
                                               std::to_string(psi[i])});
    }
  }
  return rep;
}

/// Each control component must sit at the bound selected by the sign of its
/// switching value. Where |theta| <= tol the component is singular and any
/// value is accepted; maximal runs of such instants are counted as singular
/// segments.
inline CertReport check_control_maximizes(const ModelParams& m,
                                          const AdjointTrajectory& adj,
                                          const PiecewiseControl& policy,
                                          double tol) {
  CertReport rep{"hamiltonian-argmax", {}, 0};
  std::vector<double> breaks = policy.breakpoints();
  breaks.insert(breaks.end(), adj.knots().begin(), adj.knots().end());
  const std::array<double, 3> upper{m.max_production, m.max_repayment, m.max_sales};
  const char* names[] = {"u", "v", "w"};
  bool in_singular = false;
  for (double t : check_grid(m.horizon, breaks)) {
    const SwitchingValues th = switching_values(m, adj, t);
    const ControlValue& c = policy.value_at(t);
    const std::array<double, 3> theta{th.production, th.repayment, th.sales};
    const std::array<double, 3> value{c.production, c.repayment, c.sales};
    bool singular = false;
    for (int i = 0; i < 3; ++i) {
      if (std::abs(theta[i]) <= tol) {
        singular = true;
        continue;
      }
      const double want = theta[i] > 0 ? upper[i] : 0.0;
      if (std::abs(value[i] - want) > zero_tolerance(upper[i])) {
        rep.issues.push_back({t, std::string(names[i]) + " = " + std::to_string(value[i]) +
                                     " but theta = " + std::to_string(theta[i])});
      }
    }
    if (singular && !in_singular) ++rep.singular_segments;
    in_singular = singular;
  }
  return rep;
}

struct Certification {
  MultiplierSet multipliers;
  AdjointTrajectory adjoint;
  std::vector<CertReport> reports;

  bool passed() const {
    return std::all_of(reports.begin(), reports.end(),
                       [](const CertReport& r) { return r.passed(); });
  }
};

inline constexpr double kCertTolerance = 1e-9;

/// Runs every maximum-principle check on a synthesized policy.
inline Certification certify(const Synthesis& s, double tol = kCertTolerance) {
  const ModelParams& m = s.trajectory.params();
  Certification out;
  out.multipliers = multiplier_set_for_scenario(m, s.scenario, s.times);
  out.adjoint = adjoint_backward(m, out.multipliers);
  out.reports.push_back(check_nonnegativity(out.multipliers, tol));
  out.reports.push_back(check_slackness(m, out.multipliers, s.trajectory, tol));
  out.reports.push_back(check_transversality(out.multipliers, out.adjoint));
  const double theta_scale = std::max({1.0, m.price, m.material_cost + m.variable_cost});
  out.reports.push_back(
      check_control_maximizes(m, out.adjoint, s.policy, tol * theta_scale));
  return out;
}

}  // namespace prodinv

#endif  // PRODINV_VERIFIER_HPP_
