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

#include "cpgo/dataset.h"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <string>

#include "cpgo/errors.h"

namespace cpgo {
namespace {

using nlohmann::json;

std::string Join(std::string_view path, std::string_view key) {
  if (path.empty()) return std::string(key);
  return std::string(path) + "." + std::string(key);
}

// Re-roots a ConfigError raised by Validate() under `path`.
ConfigError Nested(std::string_view path, const ConfigError& e) {
  const std::string what = e.what();
  return ConfigError(Join(path, e.field()), what.substr(e.field().size() + 2));
}

std::string Index(std::string_view path, std::size_t i) {
  return std::string(path) + "[" + std::to_string(i) + "]";
}

const json& Require(const json& j, std::string_view path,
                    std::string_view key) {
  if (!j.is_object()) throw ConfigError(std::string(path), "expected object");
  const auto it = j.find(key);
  if (it == j.end()) throw ConfigError(Join(path, key), "missing");
  return *it;
}

double AsDouble(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected number");
  return j.get<double>();
}

std::int64_t AsInt(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected integer");
  return j.get<std::int64_t>();
}

bool AsBool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw ConfigError(path, "expected boolean");
  return j.get<bool>();
}

template <typename T, typename Get>
void Optional(const json& j, std::string_view path, std::string_view key,
              T& out, Get get) {
  const auto it = j.find(key);
  if (it != j.end()) out = static_cast<T>(get(*it, Join(path, key)));
}

template <int N>
Eigen::Matrix<double, N, 1> AsVector(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != N) {
    throw ConfigError(path, "expected array of " + std::to_string(N) +
                                " numbers");
  }
  Eigen::Matrix<double, N, 1> v;
  for (int k = 0; k < N; ++k) v[k] = AsDouble(j[k], Index(path, k));
  return v;
}

Matrix3 AsRotation(const json& j, const std::string& path) {
  const QuaternionXyzw q = AsVector<4>(j, path);
  if (!(q.norm() > 0.0)) throw ConfigError(path, "zero quaternion");
  return so3::QuaternionToMatrix(q);
}

json VectorJson(const Eigen::Ref<const Eigen::VectorXd>& v) {
  json array = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) array.push_back(v[k]);
  return array;
}

std::size_t LineOfByte(const std::string& text, std::size_t byte) {
  const auto end = text.begin() + std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), end, '\n'));
}

}  // namespace

json ToJson(const ScenarioSpec& spec) {
  return json{{"topology", ToString(spec.topology)},
              {"n", spec.n},
              {"comm_radius", spec.comm_radius},
              {"min_separation", spec.min_separation},
              {"max_attempts", spec.max_attempts},
              {"grid_dims", spec.grid_dims},
              {"grid_spacing", spec.grid_spacing},
              {"radius", spec.radius},
              {"circle_hops", spec.circle_hops},
              {"target_measurements", spec.target_measurements}};
}

json ToJson(const NoiseModel& noise) {
  return json{{"tau", noise.tau}, {"kappa", noise.kappa}, {"seed", noise.seed}};
}

json ToJson(const Dataset& dataset) {
  json j{{"format", "cpgo-dataset"}, {"version", 1}};
  if (dataset.spec) j["spec"] = ToJson(*dataset.spec);
  if (dataset.noise) j["noise"] = ToJson(*dataset.noise);
  if (dataset.seed) j["seed"] = *dataset.seed;
  j["vertices_are_ground_truth"] = dataset.vertices_are_ground_truth;
  json vertices = json::array();
  for (std::size_t i = 0; i < dataset.vertices.size(); ++i) {
    const Pose& p = dataset.vertices[i];
    const std::int64_t external = dataset.external_ids.empty()
                                      ? static_cast<std::int64_t>(i)
                                      : dataset.external_ids[i];
    vertices.push_back(json{{"id", i},
                            {"external_id", external},
                            {"t", VectorJson(p.t)},
                            {"q", VectorJson(so3::MatrixToQuaternion(p.r))}});
  }
  j["vertices"] = std::move(vertices);
  json measurements = json::array();
  for (const RelativeMeasurement& m : dataset.measurements) {
    measurements.push_back(
        json{{"src", m.src},
             {"dst", m.dst},
             {"t", VectorJson(m.t_rel)},
             {"q", VectorJson(so3::MatrixToQuaternion(m.r_rel))}});
  }
  j["measurements"] = std::move(measurements);
  return j;
}

nlohmann::ordered_json ToJson(const ConsistencyReport& report) {
  nlohmann::ordered_json j{{"tolerance",
          {{"rot", report.tolerance.rot}, {"trans", report.tolerance.trans}}},
         {"pairwise",
          {{"rot_max_defect", report.pairwise_rot_max_defect},
           {"trans_max_defect", report.pairwise_trans_max_defect},
           {"pass", report.pairwise_pass}}},
         {"minimal",
          {{"rot_defect", report.minimal_rot_defect},
           {"trans_defect", report.minimal_trans_defect},
           {"pass", report.minimal_pass}}}};
  nlohmann::ordered_json global{{"checked", report.global_checked},
              {"cycles_checked", report.cycles_checked},
              {"pass", report.global_pass},
              {"max_cycle_defect", nullptr}};
  if (report.global_max_cycle_defect) {
    global["max_cycle_defect"] = {{"rot", report.global_max_cycle_defect->rot},
                                  {"trans",
                                   report.global_max_cycle_defect->trans}};
  }
  j["global"] = std::move(global);
  return j;
}

ScenarioSpec ScenarioSpecFromJson(const json& j, std::string_view path) {
  if (!j.is_object()) throw ConfigError(std::string(path), "expected object");
  ScenarioSpec spec;
  const auto& topology = Require(j, path, "topology");
  if (!topology.is_string()) {
    throw ConfigError(Join(path, "topology"), "expected string");
  }
  try {
    spec.topology = ParseTopology(topology.get<std::string>());
  } catch (const ConfigError& e) {
    throw Nested(path, e);
  }
  Optional(j, path, "n", spec.n, AsInt);
  Optional(j, path, "comm_radius", spec.comm_radius, AsDouble);
  Optional(j, path, "min_separation", spec.min_separation, AsDouble);
  Optional(j, path, "max_attempts", spec.max_attempts, AsInt);
  Optional(j, path, "grid_spacing", spec.grid_spacing, AsDouble);
  Optional(j, path, "radius", spec.radius, AsDouble);
  Optional(j, path, "circle_hops", spec.circle_hops, AsInt);
  Optional(j, path, "target_measurements", spec.target_measurements, AsInt);
  if (const auto it = j.find("grid_dims"); it != j.end()) {
    const std::string dims_path = Join(path, "grid_dims");
    if (!it->is_array() || it->size() != 3) {
      throw ConfigError(dims_path, "expected array of 3 integers");
    }
    for (std::size_t k = 0; k < 3; ++k) {
      spec.grid_dims[k] =
          static_cast<int>(AsInt((*it)[k], Index(dims_path, k)));
    }
    if (j.find("n") == j.end()) {
      spec.n = spec.grid_dims[0] * spec.grid_dims[1] * spec.grid_dims[2];
    }
  }
  try {
    spec.Validate();
  } catch (const ConfigError& e) {
    throw Nested(path, e);
  }
  return spec;
}

NoiseModel NoiseModelFromJson(const json& j, std::string_view path) {
  if (!j.is_object()) throw ConfigError(std::string(path), "expected object");
  NoiseModel noise;
  Optional(j, path, "tau", noise.tau, AsDouble);
  Optional(j, path, "kappa", noise.kappa, AsDouble);
  if (const auto it = j.find("seed"); it != j.end()) {
    if (!it->is_number_unsigned()) {
      throw ConfigError(Join(path, "seed"), "expected non-negative integer");
    }
    noise.seed = it->get<std::uint64_t>();
  }
  try {
    noise.Validate();
  } catch (const ConfigError& e) {
    throw Nested(path, e);
  }
  return noise;
}

GenerateConfig GenerateConfigFromJson(const json& j) {
  if (!j.is_object()) throw ConfigError("$", "expected object");
  GenerateConfig config;
  config.spec = ScenarioSpecFromJson(Require(j, "$", "spec"), "spec");
  if (const auto it = j.find("noise"); it != j.end()) {
    config.noise = NoiseModelFromJson(*it, "noise");
  }
  if (const auto it = j.find("seed"); it != j.end()) {
    if (!it->is_number_unsigned()) {
      throw ConfigError("seed", "expected non-negative integer");
    }
    config.seed = it->get<std::uint64_t>();
  }
  return config;
}

Dataset DatasetFromJson(const json& j) {
  if (!j.is_object()) throw ConfigError("$", "expected object");
  if (const auto it = j.find("format");
      it != j.end() && *it != "cpgo-dataset") {
    throw ConfigError("format", "expected \"cpgo-dataset\"");
  }
  Dataset dataset;
  if (const auto it = j.find("spec"); it != j.end()) {
    dataset.spec = ScenarioSpecFromJson(*it, "spec");
  }
  if (const auto it = j.find("noise"); it != j.end()) {
    dataset.noise = NoiseModelFromJson(*it, "noise");
  }
  if (const auto it = j.find("seed"); it != j.end()) {
    if (!it->is_number_unsigned()) {
      throw ConfigError("seed", "expected non-negative integer");
    }
    dataset.seed = it->get<std::uint64_t>();
  }
  Optional(j, "", "vertices_are_ground_truth",
           dataset.vertices_are_ground_truth, AsBool);

  const json& vertices = Require(j, "$", "vertices");
  if (!vertices.is_array()) throw ConfigError("vertices", "expected array");
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const std::string path = Index("vertices", i);
    const json& v = vertices[i];
    if (AsInt(Require(v, path, "id"), Join(path, "id")) !=
        static_cast<std::int64_t>(i)) {
      throw ConfigError(Join(path, "id"), "ids must be 0..n-1 in order");
    }
    std::int64_t external = static_cast<std::int64_t>(i);
    Optional(v, path, "external_id", external, AsInt);
    dataset.external_ids.push_back(external);
    dataset.vertices.push_back(
        Pose{AsVector<3>(Require(v, path, "t"), Join(path, "t")),
             AsRotation(Require(v, path, "q"), Join(path, "q"))});
  }

  const json& measurements = Require(j, "$", "measurements");
  if (!measurements.is_array()) {
    throw ConfigError("measurements", "expected array");
  }
  for (std::size_t k = 0; k < measurements.size(); ++k) {
    const std::string path = Index("measurements", k);
    const json& m = measurements[k];
    RelativeMeasurement meas;
    meas.src = static_cast<VertexId>(
        AsInt(Require(m, path, "src"), Join(path, "src")));
    meas.dst = static_cast<VertexId>(
        AsInt(Require(m, path, "dst"), Join(path, "dst")));
    meas.t_rel = AsVector<3>(Require(m, path, "t"), Join(path, "t"));
    meas.r_rel = AsRotation(Require(m, path, "q"), Join(path, "q"));
    dataset.measurements.push_back(meas);
  }
  return dataset;
}

Dataset GenerateDataset(const GenerateConfig& config) {
  const GroundTruth truth = GenerateGroundTruth(config.spec, config.seed);
  const PoseGraph graph =
      CorruptMeasurements(truth.poses, truth.edges, config.noise);
  Dataset dataset;
  dataset.spec = config.spec;
  dataset.noise = config.noise;
  dataset.seed = config.seed;
  dataset.vertices_are_ground_truth = true;
  dataset.vertices = truth.poses;
  for (std::size_t i = 0; i < truth.poses.size(); ++i) {
    dataset.external_ids.push_back(static_cast<std::int64_t>(i));
  }
  dataset.measurements.assign(graph.measurements().begin(),
                              graph.measurements().end());
  return dataset;
}

PoseGraph BuildGraph(const Dataset& dataset, const BuildOptions& options) {
  return PoseGraph::Build(static_cast<int>(dataset.vertices.size()),
                          dataset.measurements, options);
}

json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, path.string(), "cannot open file");
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(LineOfByte(text, e.byte), path.string(), e.what());
  }
}

void WriteJsonFile(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

Dataset ReadDataset(const std::filesystem::path& path) {
  return DatasetFromJson(ReadJsonFile(path));
}

void WriteDataset(const Dataset& dataset, const std::filesystem::path& path) {
  WriteJsonFile(ToJson(dataset), path);
}

}  // namespace cpgo
