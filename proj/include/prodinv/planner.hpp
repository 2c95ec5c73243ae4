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

// Decision chains: the horizon is cut at fixed junctions and each piece is
// solved as a fresh problem starting from the previous piece's end state.

#ifndef PRODINV_PLANNER_HPP_
#define PRODINV_PLANNER_HPP_

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "prodinv/analytic.hpp"
#include "prodinv/control.hpp"
#include "prodinv/dynamics.hpp"
#include "prodinv/error.hpp"
#include "prodinv/model.hpp"

namespace prodinv {

struct ChainInterval {
  double start = 0;
  double end = 0;
  State entry;  // before any junction jump
  Synthesis solution;  // on the local time axis [0, end - start]
};

struct ChainPlan {
  std::vector<double> junctions;  // 0 = T0 < T1 < ... < Tn = T
  std::vector<ChainInterval> intervals;
};

namespace detail {

inline State snap_to_constraints(const ModelParams& m, State s) {
  const double tol = zero_tolerance(std::max({s.profit, s.debt, s.stock}));
  auto snap = [&](double& x) {
    if (std::abs(x) <= tol) x = 0;
  };
  snap(s.profit);
  snap(s.debt);
  snap(s.stock);
  if (std::abs(s.stock - m.max_stock) <= tol) s.stock = m.max_stock;
  return s;
}

}  // namespace detail

/// Solves each subinterval in turn. `junctions` lists the interior cut
/// points or the full sequence 0 < T1 < ... < T; jumps apply at any junction
/// entered with debt when `jump_mode` is set.
inline ChainPlan chain_plan(const ModelParams& m, const State& init,
                            std::vector<double> junctions, bool jump_mode) {
  const double T = m.horizon;
  if (junctions.empty() || junctions.front() != 0) junctions.insert(junctions.begin(), 0.0);
  if (junctions.back() != T) junctions.push_back(T);
  for (std::size_t i = 1; i < junctions.size(); ++i) {
    if (!(junctions[i] > junctions[i - 1]) || junctions[i] > T) {
      throw Error(ErrorCode::kDomain, "chain breakpoints must increase from 0 to T");
    }
  }
  ChainPlan plan;
  plan.junctions = junctions;
  State entry = init;
  for (std::size_t j = 0; j + 1 < junctions.size(); ++j) {
    ModelParams local = m;
    local.horizon = junctions[j + 1] - junctions[j];
    ChainInterval iv;
    iv.start = junctions[j];
    iv.end = junctions[j + 1];
    iv.entry = entry;
    try {
      const Scenario kind = classify_scenario(local, entry, jump_mode && entry.debt > 0);
      iv.solution = synthesize_policy(local, entry, kind);
    } catch (const Error& e) {
      throw Error(e.code(), "junction " + std::to_string(j) + " (t = " +
                                std::to_string(iv.start) + "): " + e.what());
    }
    entry = detail::snap_to_constraints(m, iv.solution.trajectory.terminal());
    plan.intervals.push_back(std::move(iv));
  }
  return plan;
}

struct ChainEvaluation {
  Trajectory trajectory;  // on [0, T], one segment list with junction jumps
  double objective = 0;
};

inline ChainEvaluation evaluate_chain(const ModelParams& m, const ChainPlan& plan) {
  std::vector<TrajectorySegment<double>> segments;
  std::vector<JumpRecord> jumps;
  for (const auto& iv : plan.intervals) {
    if (iv.solution.jump) {
      JumpRecord j = *iv.solution.jump;
      j.time = iv.start;
      jumps.push_back(j);
    }
    for (const auto& seg : iv.solution.trajectory.segments()) {
      segments.push_back({seg.start + iv.start, seg.end + iv.start, seg.control, seg.entry});
    }
  }
  // Local segment ends are shifted copies; pin them to the junctions so the
  // pieces tile [0, T] exactly.
  for (std::size_t i = 1; i < segments.size(); ++i) segments[i - 1].end = segments[i].start;
  if (!segments.empty()) segments.back().end = m.horizon;
  ChainEvaluation out;
  out.trajectory = Trajectory::closed_form(m, std::move(segments), std::move(jumps));
  out.trajectory.set_violations(assess_feasibility(out.trajectory));
  const State& last = plan.intervals.back().solution.trajectory.terminal();
  out.objective = last.profit - last.debt;
  return out;
}

}  // namespace prodinv

#endif  // PRODINV_PLANNER_HPP_
