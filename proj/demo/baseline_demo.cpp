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

// Solves the baseline firm from five starting positions and prints the
// switching times, objective and certificate status for each.

#include <cstdio>
#include <string>

#include "prodinv/prodinv.hpp"

int main() {
  using namespace prodinv;
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

  struct Start {
    State init;
    bool jump_mode;
  };
  const Start starts[] = {
      {{20, 0, 10}, false}, {{20, 10, 10}, false}, {{20, 10, 0}, false},
      {{20, 10, 10}, true}, {{20, 30, 10}, true},
  };

  std::printf("%-8s %10s %10s %12s  %s\n", "scenario", "t_S", "t_D", "objective",
              "certificate");
  for (const Start& s : starts) {
    const Synthesis sol = synthesize_policy(m, s.init, s.jump_mode);
    char debt[32] = "-";
    if (sol.times.has_debt && sol.times.debt_clearance) {
      std::snprintf(debt, sizeof debt, "%.6f", *sol.times.debt_clearance);
    }
    std::printf("%-8s %10.6f %10s %12.6f  %s\n",
                std::string(to_string(sol.scenario)).c_str(), sol.times.stock.time, debt,
                objective_value(sol), certify(sol).passed() ? "PASS" : "FAIL");
  }
  return 0;
}
