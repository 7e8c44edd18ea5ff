/*
 * Copyright 2026 The cpgo Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line driver: generate, solve, info, convert.

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.h"
#include "cpgo/errors.h"
#include "spdlog/sinks/stdout_color_sinks.h"
#include "spdlog/spdlog.h"

namespace {

constexpr int kExitError = 1;
constexpr int kExitUsage = 2;

// Logs go to stderr so that --json output stays parseable. The level comes
// from CPGO_LOG_LEVEL (trace, debug, info, warn, error, off).
void ConfigureLogging() {
  spdlog::set_default_logger(spdlog::stderr_color_mt("cpgo"));
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("CPGO_LOG_LEVEL")) {
    spdlog::set_level(spdlog::level::from_str(level));
  }
}

void Print(const nlohmann::ordered_json& j, bool as_json) {
  if (as_json) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  for (const auto& [key, value] : j.items()) {
    if (!value.is_structured()) std::cout << key << ": " << value << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  ConfigureLogging();
  using cpgo::tools::SolveOptions;

  CLI::App app{"Consensus-based distributed pose graph optimization"};
  app.require_subcommand(1);
  app.fallthrough();
  bool as_json = false;
  app.add_flag("--json", as_json, "Print machine-readable JSON on stdout");

  std::string config_path;
  std::string out_path;
  auto* generate = app.add_subcommand("generate", "Generate a dataset");
  generate->add_option("config", config_path, "Scenario config JSON")
      ->required();
  generate->add_option("out", out_path, "Dataset JSON to write")->required();

  std::string dataset_path;
  std::string out_dir = "out";
  SolveOptions solve_options;
  std::string translation_mode = "per_step_averaged";
  auto* solve = app.add_subcommand("solve", "Run the optimization");
  solve->add_option("dataset", dataset_path, "Dataset (.json or .g2o)")
      ->required();
  solve->add_option("--out", out_dir, "Output directory")
      ->capture_default_str();
  solve->add_option("--init", solve_options.init, "gps | tree | identity")
      ->check(CLI::IsMember({"gps", "tree", "identity"}))
      ->capture_default_str();
  solve->add_option("--mode", solve_options.mode, "reference | distributed")
      ->check(CLI::IsMember({"reference", "distributed"}))
      ->capture_default_str();
  solve->add_option("--dt", solve_options.solver.dt, "Step size (s)")
      ->capture_default_str();
  solve->add_option("--stop-tol", solve_options.solver.stop_tol,
                    "Stop when the geodesic objective changes less")
      ->capture_default_str();
  solve->add_option("--max-iters", solve_options.solver.max_iters)
      ->capture_default_str();
  solve->add_option("--translation-mode", translation_mode,
                    "per_step_averaged | online_averaged | raw")
      ->capture_default_str();
  solve->add_option("--epsilon", solve_options.epsilon, "Basin margin (rad)")
      ->capture_default_str();
  solve->add_option("--seed", solve_options.seed, "Seed for gps init")
      ->capture_default_str();
  solve->add_option("--gps-tau", solve_options.gps_tau)->capture_default_str();
  solve->add_option("--gps-kappa", solve_options.gps_kappa)
      ->capture_default_str();
  solve->add_flag("--symmetrize", solve_options.symmetrize,
                  "Add inverted companions of unpaired measurements");
  solve->add_flag("--average-rotations", solve_options.average_rotations,
                  "Average each edge's two rotation measurements first");
  solve->add_option("--threads", solve_options.threads,
                    "Distributed worker threads (0: one per vertex)");
  solve->add_flag("--log-messages", solve_options.log_messages,
                  "Write messages.jsonl in distributed mode");

  cpgo::tools::InfoOptions info_options;
  auto* info = app.add_subcommand("info", "Describe a dataset");
  info->add_option("dataset", dataset_path)->required();
  info->add_flag("--symmetrize", info_options.symmetrize);
  info->add_option("--epsilon", info_options.epsilon)->capture_default_str();
  info->add_option("--seed", info_options.seed)->capture_default_str();

  std::string in_path;
  std::string in_format;
  std::string out_format;
  bool convert_symmetrize = false;
  auto* convert = app.add_subcommand("convert", "Convert between formats");
  convert->add_option("in", in_path)->required();
  convert->add_option("out", out_path)->required();
  convert->add_option("--in-format", in_format, "json | g2o");
  convert->add_option("--out-format", out_format, "json | g2o");
  convert->add_flag("--symmetrize", convert_symmetrize);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version exit 0; every other parse failure is a usage
    // error.
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (*generate) {
      Print(cpgo::tools::Generate(config_path, out_path), as_json);
    } else if (*solve) {
      solve_options.solver.translation_mode =
          cpgo::ParseTranslationMode(translation_mode);
      Print(cpgo::tools::SolveCommand(dataset_path, solve_options, out_dir),
            as_json);
    } else if (*info) {
      const auto report = cpgo::tools::Info(dataset_path, info_options);
      if (as_json) {
        std::cout << report.dump(2) << '\n';
      } else {
        std::cout << cpgo::tools::FormatInfo(report);
      }
    } else if (*convert) {
      Print(cpgo::tools::Convert(in_path, in_format, out_path, out_format,
                                 convert_symmetrize),
            as_json);
    }
  } catch (const cpgo::ConfigError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return 0;
}
