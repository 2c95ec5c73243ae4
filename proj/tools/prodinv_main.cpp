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

// prodinv: command-line front end.
//
//   prodinv <solve|verify|simulate|chain|brute-force> <config.json>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "prodinv/cli/commands.hpp"
#include "prodinv/cli/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Optimal production, repayment and sales policies"};
  std::string command;
  std::string config_path;
  app.add_option("command", command, "solve, verify, simulate, chain or brute-force")
      ->required();
  app.add_option("config", config_path, "JSON run configuration")->required();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : prodinv::cli::kExitConfig;
  }

  const auto which = prodinv::cli::parse_command(command);
  if (!which) {
    std::cerr << "error: unknown command '" << command << "'\n";
    return prodinv::cli::kExitConfig;
  }
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: cannot read " << config_path << '\n';
    return prodinv::cli::kExitConfig;
  }
  std::stringstream text;
  text << in.rdbuf();

  prodinv::cli::RunConfig cfg;
  try {
    cfg = prodinv::cli::parse_config(text.str());
  } catch (const prodinv::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return prodinv::cli::kExitConfig;
  }
  return prodinv::cli::execute_command(cfg, *which, std::cout, std::cerr);
}
