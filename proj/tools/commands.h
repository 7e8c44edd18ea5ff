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

#ifndef CPGO_TOOLS_COMMANDS_H_
#define CPGO_TOOLS_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cpgo/graph.h"
#include "cpgo/solver.h"
#include "json.hpp"

namespace cpgo::tools {

// A dataset file of either format, mapped to dense ids.
struct Input {
  std::vector<std::int64_t> external_ids;
  std::vector<Pose> vertices;
  std::vector<RelativeMeasurement> measurements;
  bool vertices_are_ground_truth = false;
};

// "json" or "g2o"; anything else throws ConfigError("format").
std::string FormatFromPath(const std::filesystem::path& path);
Input LoadInput(const std::filesystem::path& path,
                const std::string& format = "");
PoseGraph BuildInputGraph(const Input& input, bool symmetrize);

struct SolveOptions {
  SolverConfig solver;
  std::string init = "tree";  // gps | tree | identity
  std::string mode = "reference";  // reference | distributed
  bool symmetrize = false;
  // Replace each edge's rotation pair by its geodesic average first.
  bool average_rotations = false;
  double epsilon = 0.05;  // basin margin, radians
  std::uint64_t seed = 0;  // gps init
  double gps_tau = 0.5;    // meters
  double gps_kappa = 0.524;  // radians
  int threads = -1;  // distributed; 0 = one per worker, <0 = hardware
  bool log_messages = false;
  std::size_t cycle_limit = 100000;
};

std::vector<Pose> MakeInit(const Input& input, const PoseGraph& graph,
                           const SolveOptions& options);

// Writes the dataset JSON and returns a short summary.
nlohmann::ordered_json Generate(const std::filesystem::path& config_path,
                        const std::filesystem::path& out_path);

// Writes trajectory.csv, objective.csv and summary.json (plus
// messages.jsonl when logging) into out_dir and returns the summary.
nlohmann::ordered_json SolveCommand(const std::filesystem::path& dataset_path,
                            const SolveOptions& options,
                            const std::filesystem::path& out_dir);

struct InfoOptions {
  bool symmetrize = false;
  double epsilon = 0.05;
  std::uint64_t seed = 0;
  double gps_tau = 0.5;
  double gps_kappa = 0.524;
  std::size_t cycle_limit = 100000;
};

nlohmann::ordered_json Info(const std::filesystem::path& dataset_path,
                    const InfoOptions& options);
std::string FormatInfo(const nlohmann::ordered_json& info);

// Empty formats are taken from the file extensions.
nlohmann::ordered_json Convert(const std::filesystem::path& in_path,
                       std::string in_format,
                       const std::filesystem::path& out_path,
                       std::string out_format, bool symmetrize);

}  // namespace cpgo::tools

#endif  // CPGO_TOOLS_COMMANDS_H_
