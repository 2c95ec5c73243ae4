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

// Forward evolution of the state system
//
//   N' = p w - v - K u - B,   D' = r D + A u - v,   S' = u - w - alpha S
//
// under piecewise-constant controls. The closed-form integrator is exact on
// each segment; the fixed-step RK4 integrator exists as an independent
// reference. Both are templated on the scalar type so that accuracy studies
// can run above double precision.

#ifndef PRODINV_DYNAMICS_HPP_
#define PRODINV_DYNAMICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "prodinv/control.hpp"
#include "prodinv/error.hpp"
#include "prodinv/model.hpp"

namespace prodinv {

/// Instantaneous repayment min(N, D) at `time`.
struct JumpRecord {
  double time = 0;
  double delta_profit = 0;  // <= 0
  double delta_debt = 0;    // <= 0
  State post;

  State pre() const {
    return {post.profit - delta_profit, post.debt - delta_debt, post.stock};
  }
};

inline JumpRecord repayment_jump(const State& s, double time) {
  const double paid = std::min(s.profit, s.debt);
  return {time, -paid, -paid,
          State{std::max(s.profit - s.debt, 0.0),
                std::max(s.debt - s.profit, 0.0), s.stock}};
}

enum class StateComponent { kProfit, kDebt, kStock };

inline std::string_view to_string(StateComponent c) {
  switch (c) {
    case StateComponent::kProfit: return "N";
    case StateComponent::kDebt: return "D";
    case StateComponent::kStock: return "S";
  }
  return "?";
}

template <class Real>
Real component(const BasicState<Real>& s, StateComponent c) {
  switch (c) {
    case StateComponent::kProfit: return s.profit;
    case StateComponent::kDebt: return s.debt;
    case StateComponent::kStock: return s.stock;
  }
  return Real(0);
}

enum class Constraint {
  kProfitNonNegative,
  kDebtNonNegative,
  kStockNonNegative,
  kStockCapacity,
};

inline std::string_view to_string(Constraint c) {
  switch (c) {
    case Constraint::kProfitNonNegative: return "N >= 0";
    case Constraint::kDebtNonNegative: return "D >= 0";
    case Constraint::kStockNonNegative: return "S >= 0";
    case Constraint::kStockCapacity: return "S <= S_max";
  }
  return "?";
}

struct Violation {
  double time = 0;  // first instant the constraint fails
  Constraint constraint{};
  double magnitude = 0;  // worst excess over the offending segment
};

/// Time derivative of the state under a constant control.
template <class Real>
BasicState<Real> state_rate(const ModelParams& m, const BasicState<Real>& s,
                            const ControlValue& c) {
  const Real u = c.production, v = c.repayment, w = c.sales;
  return {Real(m.price) * w - v - Real(m.variable_cost) * u - Real(m.fixed_cost),
          Real(m.interest_rate) * s.debt + Real(m.material_cost) * u - v,
          u - w - Real(m.outflow_rate) * s.stock};
}

/// Exact solution after time `tau` of constant control `c` from `s`.
template <class Real>
BasicState<Real> advance(const ModelParams& m, const BasicState<Real>& s,
                         const ControlValue& c, Real tau) {
  using std::exp;
  using std::expm1;
  const Real r = m.interest_rate;
  const Real alpha = m.outflow_rate;
  const Real u = c.production, v = c.repayment, w = c.sales;
  const Real profit_rate =
      Real(m.price) * w - v - Real(m.variable_cost) * u - Real(m.fixed_cost);
  const Real debt_inflow = Real(m.material_cost) * u - v;
  const Real stock_inflow = u - w;
  const Real growth = expm1(r * tau);
  const Real decay = -expm1(-alpha * tau);
  return {s.profit + profit_rate * tau,
          s.debt * (Real(1) + growth) + debt_inflow * growth / r,
          s.stock * (Real(1) - decay) + stock_inflow * decay / alpha};
}

template <class Real>
struct TrajectorySegment {
  Real start{};
  Real end{};
  ControlValue control;
  BasicState<Real> entry;
};

template <class Real>
struct TrajectoryNode {
  Real time{};
  BasicState<Real> state;
};

/// State evolution over [t0, T]. Closed-form trajectories hold one exact
/// segment per constant control piece; sampled trajectories hold integrator
/// nodes and interpolate linearly between them. Evaluation is
/// right-continuous, so at a jump instant `at` returns the post-jump state
/// and `before` the pre-jump one.
template <class Real>
class BasicTrajectory {
 public:
  BasicTrajectory() = default;

  static BasicTrajectory closed_form(const ModelParams& m,
                                     std::vector<TrajectorySegment<Real>> segments,
                                     std::vector<JumpRecord> jumps = {}) {
    BasicTrajectory t;
    t.params_ = m;
    t.segments_ = std::move(segments);
    t.jumps_ = std::move(jumps);
    for (std::size_t i = 1; i < t.segments_.size(); ++i) {
      t.breakpoints_.push_back(t.segments_[i].start);
    }
    return t;
  }

  static BasicTrajectory sampled(const ModelParams& m,
                                 std::vector<TrajectoryNode<Real>> nodes,
                                 std::vector<Real> breakpoints,
                                 PiecewiseControl policy) {
    BasicTrajectory t;
    t.params_ = m;
    t.nodes_ = std::move(nodes);
    t.breakpoints_ = std::move(breakpoints);
    t.policy_ = std::move(policy);
    return t;
  }

  bool is_closed_form() const { return !segments_.empty(); }
  const ModelParams& params() const { return params_; }
  const std::vector<TrajectorySegment<Real>>& segments() const { return segments_; }
  const std::vector<TrajectoryNode<Real>>& nodes() const { return nodes_; }
  const std::vector<Real>& breakpoints() const { return breakpoints_; }
  const std::vector<JumpRecord>& jumps() const { return jumps_; }
  const std::vector<Violation>& violations() const { return violations_; }
  bool feasible() const { return violations_.empty(); }
  void set_violations(std::vector<Violation> v) { violations_ = std::move(v); }

  Real start_time() const {
    return is_closed_form() ? segments_.front().start : nodes_.front().time;
  }
  Real end_time() const {
    return is_closed_form() ? segments_.back().end : nodes_.back().time;
  }

  BasicState<Real> at(Real t) const {
    if (is_closed_form()) {
      const auto& seg = segment_containing(t);
      return advance(params_, seg.entry, seg.control, t - seg.start);
    }
    return interpolate(t);
  }

  /// Left limit at `t`; differs from `at(t)` only at a jump.
  BasicState<Real> before(Real t) const {
    for (const auto& j : jumps_) {
      if (Real(j.time) == t) {
        const State pre = j.pre();
        return {Real(pre.profit), Real(pre.debt), Real(pre.stock)};
      }
    }
    if (is_closed_form()) {
      for (std::size_t i = 1; i < segments_.size(); ++i) {
        if (segments_[i].start == t) {
          const auto& seg = segments_[i - 1];
          return advance(params_, seg.entry, seg.control, seg.end - seg.start);
        }
      }
    }
    return at(t);
  }

  ControlValue control_at(Real t) const {
    if (is_closed_form()) return segment_containing(t).control;
    return policy_.value_at(static_cast<double>(t));
  }

  BasicState<Real> initial() const { return before(start_time()); }
  BasicState<Real> terminal() const { return at(end_time()); }

  /// N(T) - D(T).
  Real objective() const {
    const auto s = terminal();
    return s.profit - s.debt;
  }

 private:
  const TrajectorySegment<Real>& segment_containing(Real t) const {
    auto it = std::upper_bound(
        segments_.begin(), segments_.end(), t,
        [](Real x, const TrajectorySegment<Real>& s) { return x < s.end; });
    if (it == segments_.end()) return segments_.back();
    return *it;
  }

  BasicState<Real> interpolate(Real t) const {
    auto it = std::upper_bound(
        nodes_.begin(), nodes_.end(), t,
        [](Real x, const TrajectoryNode<Real>& n) { return x < n.time; });
    if (it == nodes_.begin()) return nodes_.front().state;
    if (it == nodes_.end()) return nodes_.back().state;
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const Real f = (t - lo.time) / (hi.time - lo.time);
    return {lo.state.profit + f * (hi.state.profit - lo.state.profit),
            lo.state.debt + f * (hi.state.debt - lo.state.debt),
            lo.state.stock + f * (hi.state.stock - lo.state.stock)};
  }

  ModelParams params_{};
  std::vector<TrajectorySegment<Real>> segments_;
  std::vector<TrajectoryNode<Real>> nodes_;
  std::vector<Real> breakpoints_;
  std::vector<JumpRecord> jumps_;
  std::vector<Violation> violations_;
  PiecewiseControl policy_;
};

using Trajectory = BasicTrajectory<double>;
using ClosedFormTrajectory = BasicTrajectory<double>;

namespace detail {

template <class Real>
double max_abs_component(const BasicState<Real>& s) {
  using std::abs;
  return static_cast<double>(
      std::max({abs(s.profit), abs(s.debt), abs(s.stock)}));
}

// Signed slack of a constraint; negative means violated.
template <class Real>
double slack(const ModelParams& m, const BasicState<Real>& s, Constraint c) {
  switch (c) {
    case Constraint::kProfitNonNegative: return static_cast<double>(s.profit);
    case Constraint::kDebtNonNegative: return static_cast<double>(s.debt);
    case Constraint::kStockNonNegative: return static_cast<double>(s.stock);
    case Constraint::kStockCapacity:
      return m.max_stock - static_cast<double>(s.stock);
  }
  return 0;
}

constexpr Constraint kAllConstraints[] = {
    Constraint::kProfitNonNegative, Constraint::kDebtNonNegative,
    Constraint::kStockNonNegative, Constraint::kStockCapacity};

}  // namespace detail

/// True when `s` satisfies all state constraints up to `tol`.
template <class Real>
bool state_admissible(const ModelParams& m, const BasicState<Real>& s,
                      double tol) {
  for (Constraint c : detail::kAllConstraints) {
    if (detail::slack(m, s, c) < -tol) return false;
  }
  return true;
}

/// Feasibility tolerance for a trajectory: zero_tolerance of its largest
/// state magnitude at segment ends.
template <class Real>
double feasibility_tolerance(const BasicTrajectory<Real>& traj) {
  double scale = 1;
  if (traj.is_closed_form()) {
    for (const auto& seg : traj.segments()) {
      scale = std::max(scale, detail::max_abs_component(seg.entry));
    }
    scale = std::max(scale, detail::max_abs_component(traj.terminal()));
  } else {
    for (const auto& n : traj.nodes()) {
      scale = std::max(scale, detail::max_abs_component(n.state));
    }
  }
  return zero_tolerance(scale);
}

/// Checks the state constraints along `traj`. Within one closed-form segment
/// every component is monotone (a line or a single shifted exponential), so
/// checking segment ends is exhaustive; the first failing instant is then
/// located by bisection.
template <class Real>
std::vector<Violation> assess_feasibility(const BasicTrajectory<Real>& traj) {
  const ModelParams& m = traj.params();
  const double tol = feasibility_tolerance(traj);
  std::vector<Violation> out;
  auto check_piece = [&](auto&& eval, double t0, double t1) {
    for (Constraint c : detail::kAllConstraints) {
      const double s0 = detail::slack(m, eval(t0), c);
      const double s1 = detail::slack(m, eval(t1), c);
      if (s0 >= -tol && s1 >= -tol) continue;
      double first = t0;
      if (s0 >= -tol) {
        double lo = t0, hi = t1;
        for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++i) {
          const double mid = 0.5 * (lo + hi);
          (detail::slack(m, eval(mid), c) < -tol ? hi : lo) = mid;
        }
        first = hi;
      }
      // Merge with a violation of the same constraint that runs into this
      // piece so each excursion is reported once.
      auto same = std::find_if(out.rbegin(), out.rend(), [&](const Violation& v) {
        return v.constraint == c;
      });
      const double magnitude = -std::min(s0, s1);
      if (same != out.rend() && s0 < -tol) {
        same->magnitude = std::max(same->magnitude, magnitude);
      } else {
        out.push_back({first, c, magnitude});
      }
    }
  };
  if (traj.is_closed_form()) {
    for (const auto& seg : traj.segments()) {
      auto eval = [&](double t) {
        return advance(m, seg.entry, seg.control, Real(t) - seg.start);
      };
      check_piece(eval, static_cast<double>(seg.start),
                  static_cast<double>(seg.end));
    }
  } else {
    const auto& nodes = traj.nodes();
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      auto eval = [&](double t) { return traj.at(Real(t)); };
      check_piece(eval, static_cast<double>(nodes[i].time),
                  static_cast<double>(nodes[i + 1].time));
    }
  }
  std::sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
    return a.time < b.time;
  });
  return out;
}

/// Chains the exact per-segment solutions of `policy` from `init`, applying
/// `jump` (if any) at t = 0. No feasibility check.
template <class Real = double>
BasicTrajectory<Real> closed_form_trajectory(
    const ModelParams& m, const State& init, const PiecewiseControl& policy,
    const std::optional<JumpRecord>& jump = std::nullopt) {
  const State start = jump ? jump->post : init;
  BasicState<Real> s{Real(start.profit), Real(start.debt), Real(start.stock)};
  std::vector<TrajectorySegment<Real>> segments;
  segments.reserve(policy.segments().size());
  for (const auto& piece : policy.segments()) {
    const Real t0 = piece.start, t1 = piece.end;
    segments.push_back({t0, t1, piece.value, s});
    s = advance(m, s, piece.value, t1 - t0);
  }
  std::vector<JumpRecord> jumps;
  if (jump) jumps.push_back(*jump);
  return BasicTrajectory<Real>::closed_form(m, std::move(segments),
                                            std::move(jumps));
}

/// Exact integration with the feasibility report populated.
template <class Real = double>
BasicTrajectory<Real> integrate_exact(
    const ModelParams& m, const State& init, const PiecewiseControl& policy,
    const std::optional<JumpRecord>& jump = std::nullopt) {
  auto traj = closed_form_trajectory<Real>(m, init, policy, jump);
  traj.set_violations(assess_feasibility(traj));
  return traj;
}

/// Classical fixed-step RK4. Every policy segment is split into the smallest
/// number of equal steps not exceeding `step`, so breakpoints are grid nodes.
template <class Real = double>
BasicTrajectory<Real> integrate_rk4(const ModelParams& m, const State& init,
                                    const PiecewiseControl& policy, double step) {
  if (!(step > 0)) {
    throw Error(ErrorCode::kConfiguration, "RK4 step must be positive");
  }
  for (const auto& piece : policy.segments()) {
    if (step > piece.end - piece.start) {
      throw Error(ErrorCode::kConfiguration,
                  "RK4 step exceeds the shortest policy segment");
    }
  }
  BasicState<Real> y{Real(init.profit), Real(init.debt), Real(init.stock)};
  std::vector<TrajectoryNode<Real>> nodes{{Real(0), y}};
  std::vector<Real> breakpoints;
  auto axpy = [](const BasicState<Real>& a, Real h, const BasicState<Real>& k) {
    return BasicState<Real>{a.profit + h * k.profit, a.debt + h * k.debt,
                            a.stock + h * k.stock};
  };
  for (const auto& piece : policy.segments()) {
    const Real t0 = piece.start, t1 = piece.end;
    if (piece.start > 0) breakpoints.push_back(t0);
    const auto steps = static_cast<std::size_t>(
        std::ceil((piece.end - piece.start) / step - 1e-9));
    const Real h = (t1 - t0) / Real(steps);
    const Real half = h / Real(2);
    for (std::size_t i = 0; i < steps; ++i) {
      const auto k1 = state_rate(m, y, piece.value);
      const auto k2 = state_rate(m, axpy(y, half, k1), piece.value);
      const auto k3 = state_rate(m, axpy(y, half, k2), piece.value);
      const auto k4 = state_rate(m, axpy(y, h, k3), piece.value);
      const Real sixth = h / Real(6);
      y.profit += sixth * (k1.profit + 2 * k2.profit + 2 * k3.profit + k4.profit);
      y.debt += sixth * (k1.debt + 2 * k2.debt + 2 * k3.debt + k4.debt);
      y.stock += sixth * (k1.stock + 2 * k2.stock + 2 * k3.stock + k4.stock);
      const Real t = (i + 1 == steps) ? t1 : t0 + h * Real(i + 1);
      nodes.push_back({t, y});
    }
  }
  auto traj = BasicTrajectory<Real>::sampled(m, std::move(nodes),
                                             std::move(breakpoints), policy);
  traj.set_violations(assess_feasibility(traj));
  return traj;
}

/// Sup-norm distance between two trajectories over the nodes of `sampled`.
template <class Real>
Real max_state_difference(const BasicTrajectory<Real>& sampled,
                          const BasicTrajectory<Real>& reference) {
  using std::abs;
  Real worst = 0;
  for (const auto& n : sampled.nodes()) {
    const auto e = reference.at(n.time);
    worst = std::max({worst, abs(n.state.profit - e.profit),
                      abs(n.state.debt - e.debt), abs(n.state.stock - e.stock)});
  }
  return worst;
}

/// First time in [a, b] where `which` reaches zero. Returns `a` when the
/// component already sits at zero there and nullopt when it never gets there.
/// Throws kAmbiguousRoot when the component crosses back over zero later in
/// the window.
inline std::optional<double> find_zero_crossing(const Trajectory& traj,
                                                StateComponent which, double a,
                                                double b) {
  if (!(b >= a)) throw Error(ErrorCode::kDomain, "window must satisfy a <= b");
  auto f = [&](double t) { return component(traj.at(t), which); };

  // Component values are monotone between consecutive knots.
  std::vector<double> knots{a};
  if (traj.is_closed_form()) {
    for (double t : traj.breakpoints()) {
      if (t > a && t < b) knots.push_back(t);
    }
  } else {
    for (const auto& n : traj.nodes()) {
      if (n.time > a && n.time < b) knots.push_back(n.time);
    }
  }
  knots.push_back(b);

  std::vector<double> values;
  double scale = 1;
  for (double t : knots) {
    values.push_back(f(t));
    scale = std::max(scale, std::abs(values.back()));
  }
  const double tol = 1e-12 * scale;
  auto sign = [&](double v) { return std::abs(v) < tol ? 0 : (v > 0 ? 1 : -1); };

  const int s0 = sign(values.front());
  if (s0 == 0) return a;
  std::size_t bracket = 0;
  for (std::size_t i = 1; i < knots.size() && bracket == 0; ++i) {
    if (sign(values[i]) != s0) bracket = i;
  }
  if (bracket == 0) return std::nullopt;
  for (std::size_t i = bracket + 1; i < knots.size(); ++i) {
    if (sign(values[i]) == s0) {
      throw Error(ErrorCode::kAmbiguousRoot,
                  std::string(to_string(which)) + " crosses zero more than once");
    }
  }

  // Invariant: f(lo) keeps the initial sign, f(hi) does not.
  double lo = knots[bracket - 1], hi = knots[bracket];
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (sign(fm) == s0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

}  // namespace prodinv

#endif  // PRODINV_DYNAMICS_HPP_
