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

// Costate (shadow price) trajectories. The adjoint system
//
//   psi1' = -l1,   psi2' = -r psi2 - l2,   psi3' = alpha psi3 - l3 + l4
//
// is linear with forcing terms of the form c0 + c1 exp(k (t - t0)), so it is
// solved exactly piece by piece, backwards from the terminal conditions.

#ifndef PRODINV_ADJOINT_HPP_
#define PRODINV_ADJOINT_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "prodinv/error.hpp"
#include "prodinv/model.hpp"

namespace prodinv {

/// f(t) = constant + coeff * exp(rate * (t - anchor)) on [start, end).
struct ExpPiece {
  double start = 0;
  double end = 0;
  double constant = 0;
  double coeff = 0;
  double rate = 0;
  double anchor = 0;

  double operator()(double t) const {
    return coeff == 0 ? constant : constant + coeff * std::exp(rate * (t - anchor));
  }
};

/// Right-continuous piecewise function on [0, T] built from ExpPieces.
/// Empty pieces are dropped; an empty function is identically zero.
class PiecewiseExp {
 public:
  PiecewiseExp() = default;
  explicit PiecewiseExp(std::vector<ExpPiece> pieces) {
    for (auto& p : pieces) {
      if (p.end > p.start) pieces_.push_back(p);
    }
  }

  static PiecewiseExp constant(double start, double end, double value) {
    return PiecewiseExp({{start, end, value, 0, 0, 0}});
  }

  const std::vector<ExpPiece>& pieces() const { return pieces_; }

  const ExpPiece* piece_at(double t) const {
    for (const auto& p : pieces_) {
      if (t >= p.start && t < p.end) return &p;
    }
    if (!pieces_.empty() && t == pieces_.back().end) return &pieces_.back();
    return nullptr;
  }

  double operator()(double t) const {
    const ExpPiece* p = piece_at(t);
    return p ? (*p)(t) : 0.0;
  }

  /// Smallest value; each piece is monotone so its ends suffice.
  double minimum() const {
    double lo = 0;
    bool first = true;
    for (const auto& p : pieces_) {
      for (double v : {p(p.start), p(p.end)}) {
        lo = first ? v : std::min(lo, v);
        first = false;
      }
    }
    return lo;
  }

  void append_breakpoints(std::vector<double>& out) const {
    for (const auto& p : pieces_) {
      out.push_back(p.start);
      out.push_back(p.end);
    }
  }

 private:
  std::vector<ExpPiece> pieces_;
};

/// Multipliers of the state constraints N >= 0, D >= 0, S >= 0, S <= S_max:
/// running multipliers lambda and terminal multipliers mu.
struct MultiplierSet {
  std::array<PiecewiseExp, 4> lambda;
  std::array<double, 4> mu{};
};

namespace detail {

// int_0^tau exp(c (tau - s)) ds
inline double exp_integral(double c, double tau) {
  return c == 0 ? tau : std::expm1(c * tau) / c;
}

// int_0^tau exp(c (tau - s)) exp(k s) ds
inline double exp_convolution(double c, double k, double tau) {
  const double d = k - c;
  return std::exp(c * tau) * (d == 0 ? tau : std::expm1(d * tau) / d);
}

struct Forcing {
  double constant = 0;
  double coeff = 0;
  double rate = 0;
  double anchor = 0;
};

}  // namespace detail

/// One costate component: x' = c x - f(t), stored as exact pieces.
class AdjointComponent {
 public:
  struct Piece {
    double start = 0;
    double end = 0;
    double value_start = 0;
    double value_end = 0;
    std::vector<detail::Forcing> forcing;
  };

  AdjointComponent() = default;
  AdjointComponent(double growth, std::vector<Piece> pieces)
      : growth_(growth), pieces_(std::move(pieces)) {}

  double growth() const { return growth_; }
  const std::vector<Piece>& pieces() const { return pieces_; }

  double operator()(double t) const {
    for (const auto& p : pieces_) {
      if (t == p.end && &p == &pieces_.back()) return p.value_end;
      if (t >= p.start && t < p.end) return propagate(p, p.value_start, t - p.start);
    }
    return pieces_.empty() ? 0.0 : pieces_.back().value_end;
  }

  /// Value at t1 + tau from `x1` at t1 = p.start. Exponential forcing is
  /// absorbed into its particular solution P and the constant part enters
  /// through (c y - g0), y = x - P, so stationary arcs propagate without
  /// cancellation.
  double propagate(const Piece& p, double x1, double tau) const {
    const Split s = split(p, tau);
    const double y = x1 - s.particular_start;
    return s.particular_end + y + (growth_ * y - s.constant) * detail::exp_integral(growth_, tau) -
           s.resonant;
  }

  /// Inverse of propagate over the whole piece.
  double retreat(const Piece& p, double x2) const {
    const double tau = p.end - p.start;
    const Split s = split(p, tau);
    const double y = x2 - s.particular_end;
    return s.particular_start + y +
           (s.constant - growth_ * y) * detail::exp_integral(-growth_, tau) +
           std::exp(-growth_ * tau) * s.resonant;
  }

 private:
  struct Split {
    double constant = 0;          // sum of constant forcing
    double particular_start = 0;  // P(t1)
    double particular_end = 0;    // P(t1 + tau)
    double resonant = 0;          // forcing with rate == growth, integrated
  };

  Split split(const Piece& p, double tau) const {
    Split s;
    for (const auto& f : p.forcing) {
      s.constant += f.constant;
      if (f.coeff == 0) continue;
      const double at_start = f.coeff * std::exp(f.rate * (p.start - f.anchor));
      if (f.rate == growth_) {
        s.resonant += at_start * detail::exp_convolution(growth_, f.rate, tau);
      } else {
        // x' = c x - g e^{k t} has the particular solution g e^{k t} / (c - k).
        s.particular_start += at_start / (growth_ - f.rate);
        s.particular_end += at_start * std::exp(f.rate * tau) / (growth_ - f.rate);
      }
    }
    return s;
  }

  double growth_ = 0;
  std::vector<Piece> pieces_;
};

class AdjointTrajectory {
 public:
  AdjointTrajectory() = default;
  AdjointTrajectory(std::array<AdjointComponent, 3> psi, std::vector<double> knots)
      : psi_(std::move(psi)), knots_(std::move(knots)) {}

  std::array<double, 3> at(double t) const { return {psi_[0](t), psi_[1](t), psi_[2](t)}; }
  const AdjointComponent& component(int i) const { return psi_[i]; }
  /// Piece boundaries, including 0 and T.
  const std::vector<double>& knots() const { return knots_; }
  double horizon() const { return knots_.empty() ? 0 : knots_.back(); }

 private:
  std::array<AdjointComponent, 3> psi_;
  std::vector<double> knots_;
};

/// Integrates the adjoint system backwards from
/// psi(T) = (mu1 + 1, mu2 - 1, mu3 - mu4), exactly.
inline AdjointTrajectory adjoint_backward(const ModelParams& m,
                                          const MultiplierSet& mult) {
  const double T = m.horizon;
  std::vector<double> knots{0.0, T};
  for (const auto& l : mult.lambda) l.append_breakpoints(knots);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  knots.erase(std::remove_if(knots.begin(), knots.end(),
                             [&](double t) { return t < 0 || t > T; }),
              knots.end());

  const std::array<double, 3> growth{0.0, -m.interest_rate, m.outflow_rate};
  const std::array<double, 3> terminal{mult.mu[0] + 1, mult.mu[1] - 1,
                                       mult.mu[2] - mult.mu[3]};
  auto forcing_on = [&](int comp, double a, double b) {
    std::vector<detail::Forcing> out;
    auto add = [&](const PiecewiseExp& f, double sign) {
      const ExpPiece* p = f.piece_at(0.5 * (a + b));
      if (p) out.push_back({sign * p->constant, sign * p->coeff, p->rate, p->anchor});
    };
    add(mult.lambda[comp], 1.0);
    if (comp == 2) add(mult.lambda[3], -1.0);
    return out;
  };

  std::array<AdjointComponent, 3> psi;
  for (int c = 0; c < 3; ++c) {
    std::vector<AdjointComponent::Piece> pieces(knots.size() - 1);
    AdjointComponent shell(growth[c], {});
    double right = terminal[c];
    for (std::size_t i = pieces.size(); i-- > 0;) {
      auto& p = pieces[i];
      p.start = knots[i];
      p.end = knots[i + 1];
      p.forcing = forcing_on(c, p.start, p.end);
      p.value_end = right;
      p.value_start = shell.retreat(p, right);
      right = p.value_start;
    }
    psi[c] = AdjointComponent(growth[c], std::move(pieces));
  }
  return AdjointTrajectory(std::move(psi), std::move(knots));
}

/// Re-integrates forwards from psi(0) and returns the largest mismatch with
/// the stored terminal values.
inline double forward_terminal_mismatch(const AdjointTrajectory& adj) {
  double worst = 0;
  for (int c = 0; c < 3; ++c) {
    const auto& comp = adj.component(c);
    if (comp.pieces().empty()) continue;
    double x = comp.pieces().front().value_start;
    for (const auto& p : comp.pieces()) x = comp.propagate(p, x, p.end - p.start);
    worst = std::max(worst, std::abs(x - comp.pieces().back().value_end));
  }
  return worst;
}

}  // namespace prodinv

#endif  // PRODINV_ADJOINT_HPP_
