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

#ifndef CPGO_DATASET_H_
#define CPGO_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "cpgo/consistency.h"
#include "cpgo/graph.h"
#include "cpgo/synth.h"
#include "json.hpp"

namespace cpgo {

// Native JSON dataset:
//   {"format": "cpgo-dataset", "version": 1, "spec": {...}, "noise": {...},
//    "seed": 7, "vertices_are_ground_truth": true,
//    "vertices": [{"id": 0, "external_id": 0, "t": [x, y, z],
//                  "q": [qx, qy, qz, qw]}, ...],
//    "measurements": [{"src": 0, "dst": 1, "t": [...], "q": [...]}, ...]}
// "spec", "noise" and "seed" are present for generated datasets only.
struct Dataset {
  std::optional<ScenarioSpec> spec;
  std::optional<NoiseModel> noise;
  std::optional<std::uint64_t> seed;
  bool vertices_are_ground_truth = false;
  std::vector<std::int64_t> external_ids;
  std::vector<Pose> vertices;
  std::vector<RelativeMeasurement> measurements;
};

// What `generate` reads: {"spec": {...}, "noise": {...}, "seed": 7}.
struct GenerateConfig {
  ScenarioSpec spec;
  NoiseModel noise;
  std::uint64_t seed = 0;
};

nlohmann::json ToJson(const ScenarioSpec& spec);
nlohmann::json ToJson(const NoiseModel& noise);
nlohmann::json ToJson(const Dataset& dataset);
nlohmann::ordered_json ToJson(const ConsistencyReport& report);

// Missing keys take their defaults. Throws ConfigError naming the offending
// field as a path below `path`.
ScenarioSpec ScenarioSpecFromJson(const nlohmann::json& j,
                                  std::string_view path = "spec");
NoiseModel NoiseModelFromJson(const nlohmann::json& j,
                              std::string_view path = "noise");
GenerateConfig GenerateConfigFromJson(const nlohmann::json& j);
Dataset DatasetFromJson(const nlohmann::json& j);

// Ground truth plus noisy measurements; the noise stream is seeded from
// noise.seed.
Dataset GenerateDataset(const GenerateConfig& config);

PoseGraph BuildGraph(const Dataset& dataset, const BuildOptions& options = {});

// Throws ParseError for unreadable files or malformed JSON.
nlohmann::json ReadJsonFile(const std::filesystem::path& path);
void WriteJsonFile(const nlohmann::json& j, const std::filesystem::path& path);

Dataset ReadDataset(const std::filesystem::path& path);
void WriteDataset(const Dataset& dataset, const std::filesystem::path& path);

}  // namespace cpgo

#endif  // CPGO_DATASET_H_
