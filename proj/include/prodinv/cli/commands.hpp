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

// Command implementations behind the prodinv tool. Each command writes its
// report to `out` and returns the process exit status.

#ifndef PRODINV_CLI_COMMANDS_HPP_
#define PRODINV_CLI_COMMANDS_HPP_

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "prodinv/analytic.hpp"
#include "prodinv/brute_force.hpp"
#include "prodinv/cli/config.hpp"
#include "prodinv/dynamics.hpp"
#include "prodinv/planner.hpp"
#include "prodinv/verifier.hpp"

namespace prodinv::cli {

enum class Command { kSolve, kVerify, kSimulate, kChain, kBruteForce };

enum ExitCode : int { kExitOk = 0, kExitFailed = 1, kExitConfig = 2 };

inline std::optional<Command> parse_command(const std::string& name) {
  if (name == "solve") return Command::kSolve;
  if (name == "verify") return Command::kVerify;
  if (name == "simulate") return Command::kSimulate;
  if (name == "chain") return Command::kChain;
  if (name == "brute-force") return Command::kBruteForce;
  return std::nullopt;
}

/// Exit status for a library error.
inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInfeasiblePolicy:
    case ErrorCode::kNoFeasibleCandidate:
    case ErrorCode::kAmbiguousRoot:
      return kExitFailed;
    default:
      return kExitConfig;
  }
}

inline constexpr double kBruteForceSlack = 1e-4;

namespace detail {

inline std::string fmt(double x, int digits = 6) {
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

inline void kv(std::ostream& out, const std::string& key, const std::string& value) {
  out << key << " = " << value << '\n';
}

inline std::string control_text(const ControlValue& c) {
  return "u=" + fmt(c.production) + " v=" + fmt(c.repayment) + " w=" + fmt(c.sales);
}

inline void write_policy(std::ostream& out, const std::vector<ControlSegment>& segs,
                         const std::string& prefix = "segment") {
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const bool last = i + 1 == segs.size();
    kv(out, prefix + "." + std::to_string(i),
       "[" + fmt(segs[i].start) + ", " + fmt(segs[i].end) + (last ? "] " : ") ") +
           control_text(segs[i].value));
  }
}

inline void write_times(std::ostream& out, const SwitchingTimes& t) {
  kv(out, "t_S", fmt(t.stock.time));
  kv(out, "t_S_beyond_horizon", t.stock.beyond_horizon ? "true" : "false");
  if (!t.has_debt) {
    kv(out, "t_D", "n/a");
  } else if (t.debt_clearance) {
    kv(out, "t_D", fmt(*t.debt_clearance));
  } else {
    kv(out, "t_D", "never");
  }
  kv(out, "order", std::string(to_string(t.order)));
}

inline void write_violations(std::ostream& out, const std::vector<Violation>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    kv(out, "violation." + std::to_string(i),
       std::string(to_string(v[i].constraint)) + " at t=" + fmt(v[i].time) +
           " by " + fmt(v[i].magnitude));
  }
}

/// Trajectory rows: a uniform grid of `points` instants plus every
/// breakpoint; a jump produces a pre-jump row and a post-jump row.
inline void write_csv(std::ostream& out, const Trajectory& traj, int points = 1000) {
  const ModelParams& m = traj.params();
  const double t0 = traj.start_time(), t1 = traj.end_time();
  std::vector<double> times = traj.breakpoints();
  for (int i = 0; i < points; ++i) {
    times.push_back(points == 1 ? t0 : t0 + (t1 - t0) * i / (points - 1));
  }
  times.push_back(t1);
  for (const auto& j : traj.jumps()) times.push_back(j.time);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  const double tol = feasibility_tolerance(traj);
  out << "t,N,D,S,u,v,w,feasible\n";
  auto row = [&](double t, const State& s, const ControlValue& c) {
    out << fmt(t, 9) << ',' << fmt(s.profit, 9) << ',' << fmt(s.debt, 9) << ','
        << fmt(s.stock, 9) << ',' << fmt(c.production, 9) << ','
        << fmt(c.repayment, 9) << ',' << fmt(c.sales, 9) << ','
        << (state_admissible(m, s, tol) ? 1 : 0) << '\n';
  };
  for (double t : times) {
    const ControlValue c = traj.control_at(t);
    const bool jump = std::any_of(traj.jumps().begin(), traj.jumps().end(),
                                  [&](const JumpRecord& j) { return j.time == t; });
    if (jump) row(t, traj.before(t), c);
    row(t, traj.at(t), c);
  }
}

/// Writes `name` under out_dir when configured, else streams to `out`.
template <class Writer>
void emit(const RunConfig& cfg, const std::string& name, std::ostream& out, Writer&& write) {
  if (!cfg.options.out_dir) {
    write(out);
    return;
  }
  std::filesystem::create_directories(*cfg.options.out_dir);
  const auto path = std::filesystem::path(*cfg.options.out_dir) / name;
  std::ofstream file(path);
  if (!file) throw Error(ErrorCode::kConfiguration, "options.out_dir: cannot write " + path.string());
  write(file);
  kv(out, "written", path.string());
}

inline void require_horizon(const RunConfig& cfg) {
  if (!(cfg.params.horizon > 0)) {
    throw Error(ErrorCode::kConfiguration, "params.T: violates T > 0");
  }
}

inline BruteForceGrid grid_for(const RunConfig& cfg, Scenario scenario) {
  BruteForceGrid g = default_grid(cfg.params, scenario, cfg.options.brute_nt);
  if (cfg.options.brute_u) g.production = *cfg.options.brute_u;
  if (cfg.options.brute_v) g.repayment = *cfg.options.brute_v;
  if (cfg.options.brute_w) g.sales = *cfg.options.brute_w;
  return g;
}

inline std::string status(const CertReport& r) {
  if (!r.passed()) {
    return "FAIL (" + std::to_string(r.issues.size()) + " issues, first at t=" +
           fmt(r.issues.front().time) + ": " + r.issues.front().detail + ")";
  }
  if (r.singular_segments == 0) return "PASS";
  return "PASS (" + std::to_string(r.singular_segments) + " singular segment" +
         (r.singular_segments == 1 ? ")" : "s)");
}

}  // namespace detail

inline int run_solve(const RunConfig& cfg, std::ostream& out) {
  detail::require_horizon(cfg);
  const Scenario kind = classify_scenario(cfg.params, cfg.init, cfg.jump_mode);
  const Synthesis s = plan_policy(cfg.params, cfg.init, kind);
  detail::kv(out, "scenario", std::string(to_string(kind)));
  detail::write_times(out, s.times);
  if (s.jump) {
    detail::kv(out, "jump_delta_N", detail::fmt(s.jump->delta_profit));
    detail::kv(out, "jump_delta_D", detail::fmt(s.jump->delta_debt));
  }
  detail::write_policy(out, s.policy.segments());
  detail::kv(out, "feasible", s.feasible() ? "true" : "false");
  detail::write_violations(out, s.trajectory.violations());
  if (!s.feasible()) return kExitFailed;
  detail::kv(out, "objective", detail::fmt(objective_value(s)));
  return kExitOk;
}

inline int run_simulate(const RunConfig& cfg, std::ostream& out) {
  const ModelParams& m = cfg.params;
  if (m.horizon == 0) {
    // Degenerate horizon: only the initial state exists.
    detail::emit(cfg, "trajectory.csv", out, [&](std::ostream& os) {
      os << "t,N,D,S,u,v,w,feasible\n";
      os << "0," << detail::fmt(cfg.init.profit, 9) << ',' << detail::fmt(cfg.init.debt, 9)
         << ',' << detail::fmt(cfg.init.stock, 9) << ",0,0,0,1\n";
    });
    return kExitOk;
  }
  const Scenario kind = classify_scenario(m, cfg.init, cfg.jump_mode);
  const Synthesis s = plan_policy(m, cfg.init, kind);
  detail::emit(cfg, "trajectory.csv", out,
               [&](std::ostream& os) { detail::write_csv(os, s.trajectory); });
  return s.feasible() ? kExitOk : kExitFailed;
}

inline int run_verify(const RunConfig& cfg, std::ostream& out) {
  detail::require_horizon(cfg);
  const ModelParams& m = cfg.params;
  const Scenario kind = classify_scenario(m, cfg.init, cfg.jump_mode);
  const Synthesis s = synthesize_policy(m, cfg.init, kind);
  const Certification cert = certify(s);
  detail::kv(out, "scenario", std::string(to_string(kind)));
  detail::kv(out, "objective", detail::fmt(objective_value(s)));
  bool ok = true;
  for (const auto& r : cert.reports) {
    out << r.name << ": " << detail::status(r) << '\n';
    ok = ok && r.passed();
  }

  double step = cfg.options.rk4_step;
  for (const auto& seg : s.policy.segments()) step = std::min(step, seg.end - seg.start);
  const Trajectory rk4 = integrate_rk4(m, s.start, s.policy, step);
  const Trajectory exact = integrate_exact(m, s.start, s.policy);
  const double diff = max_state_difference(rk4, exact);
  const bool rk4_ok = diff <= 1e-7;
  out << "rk4-agreement: " << (rk4_ok ? "PASS" : "FAIL") << " (max diff = "
      << detail::fmt(diff) << ", step = " << detail::fmt(step) << ")\n";
  ok = ok && rk4_ok;

  const BruteForceResult best = brute_force_best(m, s.start, detail::grid_for(cfg, kind));
  const double gap = best.objective - objective_value(s);
  const bool dominated = gap <= kBruteForceSlack;
  out << "brute-force gap \xe2\x89\xa4 tol: " << (dominated ? "PASS" : "FAIL")
      << " (gap = " << detail::fmt(gap) << ")\n";
  ok = ok && dominated;
  return ok ? kExitOk : kExitFailed;
}

inline int run_chain(const RunConfig& cfg, std::ostream& out) {
  detail::require_horizon(cfg);
  const ChainPlan plan =
      chain_plan(cfg.params, cfg.init, cfg.options.chain_breakpoints, cfg.jump_mode);
  const ChainEvaluation eval = evaluate_chain(cfg.params, plan);
  std::string junctions;
  for (double t : plan.junctions) junctions += (junctions.empty() ? "" : " ") + detail::fmt(t);
  detail::kv(out, "junctions", junctions);
  for (std::size_t j = 0; j < plan.intervals.size(); ++j) {
    const auto& iv = plan.intervals[j];
    const std::string key = "interval." + std::to_string(j);
    detail::kv(out, key + ".scenario", std::string(to_string(iv.solution.scenario)));
    if (iv.solution.jump) {
      detail::kv(out, key + ".jump_delta_N", detail::fmt(iv.solution.jump->delta_profit));
    }
    detail::write_policy(out, iv.solution.policy.shifted(iv.start),
                         key + ".segment");
  }
  detail::kv(out, "feasible", eval.trajectory.feasible() ? "true" : "false");
  detail::write_violations(out, eval.trajectory.violations());
  detail::kv(out, "objective", detail::fmt(eval.objective));
  if (cfg.options.out_dir) {
    detail::emit(cfg, "chain.csv", out,
                 [&](std::ostream& os) { detail::write_csv(os, eval.trajectory); });
  }
  return eval.trajectory.feasible() ? kExitOk : kExitFailed;
}

inline int run_brute_force(const RunConfig& cfg, std::ostream& out) {
  detail::require_horizon(cfg);
  const ModelParams& m = cfg.params;
  const Scenario kind = classify_scenario(m, cfg.init, cfg.jump_mode);
  const Synthesis s = synthesize_policy(m, cfg.init, kind);
  const BruteForceGrid grid = detail::grid_for(cfg, kind);
  const BruteForceResult best = brute_force_best(m, s.start, grid);
  const double closed = objective_value(s);
  detail::kv(out, "scenario", std::string(to_string(kind)));
  detail::kv(out, "brute_nt", std::to_string(grid.intervals));
  detail::kv(out, "candidates", std::to_string(best.evaluated));
  detail::write_policy(out, best.policy.segments());
  detail::kv(out, "best_objective", detail::fmt(best.objective));
  detail::kv(out, "closed_form_objective", detail::fmt(closed));
  detail::kv(out, "gap", detail::fmt(best.objective - closed));
  return best.objective - closed <= kBruteForceSlack ? kExitOk : kExitFailed;
}

/// Runs `command`; library errors are reported on `err` and mapped to exit
/// codes.
inline int execute_command(const RunConfig& cfg, Command command, std::ostream& out,
                           std::ostream& err) {
  try {
    switch (command) {
      case Command::kSolve: return run_solve(cfg, out);
      case Command::kVerify: return run_verify(cfg, out);
      case Command::kSimulate: return run_simulate(cfg, out);
      case Command::kChain: return run_chain(cfg, out);
      case Command::kBruteForce: return run_brute_force(cfg, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  }
  return kExitConfig;
}

}  // namespace prodinv::cli

#endif  // PRODINV_CLI_COMMANDS_HPP_
