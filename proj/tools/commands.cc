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

#include "commands.h"

#include <algorithm>
#include <fstream>
#include <numbers>
#include <sstream>
#include <thread>

#include "cpgo/consistency.h"
#include "cpgo/csv.h"
#include "cpgo/dataset.h"
#include "cpgo/errors.h"
#include "cpgo/g2o.h"
#include "cpgo/runtime.h"
#include "cpgo/synth.h"

namespace cpgo::tools {
namespace {

using nlohmann::ordered_json;

// Dense eigensolver cost grows cubically; larger graphs report null.
constexpr int kMaxVerticesForConnectivity = 2000;

std::string CheckedFormat(const std::string& format, const std::string& field) {
  if (format != "json" && format != "g2o") {
    throw ConfigError(field, "unknown format '" + format +
                                 "' (expected json or g2o)");
  }
  return format;
}

ordered_json ObjectiveJson(const ObjectiveValue& v) {
  return ordered_json{{"geodesic", v.geodesic},
                      {"chordal", v.chordal},
                      {"rotation_only", v.rotation_only},
                      {"translation_only", v.translation_only}};
}

ordered_json GroundTruthError(std::span<const Pose> estimates,
                              std::span<const Pose> truth) {
  const std::vector<Pose> aligned = AlignGauge(estimates, truth, 0);
  double max_t = 0.0;
  double max_r = 0.0;
  for (std::size_t i = 0; i < aligned.size(); ++i) {
    max_t = std::max(max_t, (aligned[i].t - truth[i].t).norm());
    max_r = std::max(max_r, so3::GeodesicDistance(aligned[i].r, truth[i].r));
  }
  return ordered_json{{"max_translation", max_t}, {"max_rotation", max_r}};
}

}  // namespace

std::string FormatFromPath(const std::filesystem::path& path) {
  return CheckedFormat(path.extension().string().empty()
                           ? std::string()
                           : path.extension().string().substr(1),
                       "format");
}

Input LoadInput(const std::filesystem::path& path, const std::string& format) {
  const std::string kind =
      format.empty() ? FormatFromPath(path) : CheckedFormat(format, "format");
  Input input;
  if (kind == "g2o") {
    G2oData data = Remap(ReadG2oFile(path));
    input.external_ids = std::move(data.external_ids);
    input.vertices = std::move(data.poses);
    input.measurements = std::move(data.measurements);
  } else {
    Dataset dataset = ReadDataset(path);
    input.external_ids = std::move(dataset.external_ids);
    input.vertices = std::move(dataset.vertices);
    input.measurements = std::move(dataset.measurements);
    input.vertices_are_ground_truth = dataset.vertices_are_ground_truth;
  }
  return input;
}

PoseGraph BuildInputGraph(const Input& input, bool symmetrize) {
  return PoseGraph::Build(static_cast<int>(input.vertices.size()),
                          input.measurements,
                          BuildOptions{.symmetrize = symmetrize});
}

std::vector<Pose> MakeInit(const Input& input, const PoseGraph& graph,
                           const SolveOptions& options) {
  if (options.init == "gps") {
    return GpsInit(input.vertices, options.gps_tau, options.gps_kappa,
                   options.seed);
  }
  if (options.init == "tree") return SpanningTreeInit(graph, 0);
  if (options.init == "identity") return IdentityInit(graph.num_vertices());
  throw ConfigError("init", "unknown init '" + options.init +
                                "' (expected gps, tree or identity)");
}

nlohmann::ordered_json Generate(const std::filesystem::path& config_path,
                        const std::filesystem::path& out_path) {
  const GenerateConfig config =
      GenerateConfigFromJson(ReadJsonFile(config_path));
  const Dataset dataset = GenerateDataset(config);
  WriteDataset(dataset, out_path);
  return ordered_json{{"topology", ToString(config.spec.topology)},
                      {"n", dataset.vertices.size()},
                      {"measurements", dataset.measurements.size()},
                      {"out", out_path.string()}};
}

nlohmann::ordered_json SolveCommand(const std::filesystem::path& dataset_path,
                            const SolveOptions& options,
                            const std::filesystem::path& out_dir) {
  if (options.mode != "reference" && options.mode != "distributed") {
    throw ConfigError("mode", "unknown mode '" + options.mode +
                                  "' (expected reference or distributed)");
  }
  options.solver.Validate();
  const Input input = LoadInput(dataset_path);
  PoseGraph graph = BuildInputGraph(input, options.symmetrize);
  if (options.average_rotations) {
    graph = options.mode == "distributed" ? OneShotPairwiseRound(graph).graph
                                          : EnforcePairwiseRotations(graph);
  }
  std::vector<Pose> init = MakeInit(input, graph, options);
  const ObjectiveValue initial = EvaluateObjective(init, graph);
  const double init_max_angle = MaxResidualAngle(init, graph);

  std::vector<Pose> estimates;
  std::vector<HistoryEntry> history;
  ObjectiveValue final_objective;
  int iterations = 0;
  bool converged = false;
  double seconds = 0.0;
  std::vector<MessageLogEntry> message_log;
  std::vector<std::size_t> messages_per_round;
  if (options.mode == "reference") {
    SolveResult r = Solve(graph, std::move(init), options.solver);
    estimates = std::move(r.estimates);
    history = std::move(r.history);
    final_objective = r.final_objective;
    iterations = r.iterations;
    converged = r.converged;
    seconds = r.wall_clock_seconds;
  } else {
    RuntimeConfig runtime;
    if (options.threads >= 0) runtime.num_threads = options.threads;
    runtime.log_messages = options.log_messages;
    DistributedResult r =
        RunDistributed(graph, std::move(init), options.solver, runtime);
    estimates = std::move(r.estimates);
    history = std::move(r.history);
    final_objective = r.final_objective;
    iterations = r.iterations;
    converged = r.converged;
    seconds = r.wall_clock_seconds;
    message_log = std::move(r.message_log);
    messages_per_round = std::move(r.messages_per_round);
  }

  std::filesystem::create_directories(out_dir);
  WriteTrajectoryCsvFile(estimates, out_dir / "trajectory.csv",
                         input.external_ids);
  WriteObjectiveCsvFile(history, out_dir / "objective.csv");
  if (!message_log.empty()) {
    std::ofstream out(out_dir / "messages.jsonl");
    WriteMessageLog(message_log, out);
  }

  ordered_json summary{
      {"dataset", dataset_path.filename().string()},
      {"n", graph.num_vertices()},
      {"measurements", graph.num_measurements()},
      {"mode", options.mode},
      {"init", options.init},
      {"translation_mode", ToString(options.solver.translation_mode)},
      {"dt", options.solver.dt},
      {"stop_tol", options.solver.stop_tol},
      {"max_iters", options.solver.max_iters},
      {"iterations", iterations},
      {"converged", converged},
      {"wall_clock_seconds", seconds},
      {"initial_objective", ObjectiveJson(initial)},
      {"final_objective", ObjectiveJson(final_objective)},
      {"epsilon", options.epsilon},
      {"init_max_residual_angle", init_max_angle},
      {"init_in_basin",
       init_max_angle <= std::numbers::pi / 2.0 - options.epsilon},
      {"consistency", ToJson(CheckConsistency(graph, options.cycle_limit))},
      {"ground_truth_error", nullptr},
      {"messages_per_round", nullptr}};
  if (input.vertices_are_ground_truth) {
    summary["ground_truth_error"] = GroundTruthError(estimates, input.vertices);
  }
  if (!messages_per_round.empty()) {
    summary["messages_per_round"] = messages_per_round.front();
  }
  std::ofstream(out_dir / "summary.json") << summary.dump(2) << '\n';
  return summary;
}

nlohmann::ordered_json Info(const std::filesystem::path& dataset_path,
                    const InfoOptions& options) {
  const Input input = LoadInput(dataset_path);
  const PoseGraph graph = BuildInputGraph(input, options.symmetrize);
  const int n = graph.num_vertices();
  int min_degree = n > 0 ? graph.degree(0) : 0;
  for (VertexId i = 0; i < n; ++i) {
    min_degree = std::min(min_degree, graph.degree(i));
  }
  ordered_json info{
      {"n", n},
      {"measurements", graph.num_measurements()},
      {"edges", graph.num_edges()},
      {"degree",
       {{"min", min_degree},
        {"max", MaxDegree(graph)},
        {"mean", n > 0 ? static_cast<double>(graph.num_measurements()) / n
                       : 0.0}}},
      {"lambda2", nullptr},
      {"consistency", ToJson(CheckConsistency(graph, options.cycle_limit))},
      {"basin", ordered_json::object()}};
  if (n <= kMaxVerticesForConnectivity) {
    info["lambda2"] = AlgebraicConnectivity(graph);
  }
  SolveOptions init_options;
  init_options.seed = options.seed;
  init_options.gps_tau = options.gps_tau;
  init_options.gps_kappa = options.gps_kappa;
  for (const char* mode : {"gps", "tree", "identity"}) {
    init_options.init = mode;
    const std::vector<Pose> init = MakeInit(input, graph, init_options);
    const double angle = MaxResidualAngle(init, graph);
    info["basin"][mode] = {
        {"max_residual_angle", angle},
        {"in_basin", angle <= std::numbers::pi / 2.0 - options.epsilon}};
  }
  return info;
}

std::string FormatInfo(const nlohmann::ordered_json& info) {
  std::ostringstream out;
  const auto& c = info["consistency"];
  out << "vertices:      " << info["n"] << '\n'
      << "measurements:  " << info["measurements"] << " directed ("
      << info["edges"] << " edges)\n"
      << "degree:        min " << info["degree"]["min"] << ", max "
      << info["degree"]["max"] << ", mean " << info["degree"]["mean"] << '\n'
      << "lambda2:       " << info["lambda2"] << '\n'
      << "pairwise:      rot " << c["pairwise"]["rot_max_defect"] << ", trans "
      << c["pairwise"]["trans_max_defect"] << ", pass "
      << c["pairwise"]["pass"] << '\n'
      << "minimal:       rot " << c["minimal"]["rot_defect"] << ", trans "
      << c["minimal"]["trans_defect"] << ", pass " << c["minimal"]["pass"]
      << '\n'
      << "global:        " << c["global"]["cycles_checked"]
      << " cycles, max defect " << c["global"]["max_cycle_defect"]
      << ", pass " << c["global"]["pass"] << '\n';
  for (const auto& [mode, basin] : info["basin"].items()) {
    out << "basin " << mode << ":" << std::string(9 - mode.size(), ' ')
        << "max residual " << basin["max_residual_angle"] << " rad, in basin "
        << basin["in_basin"] << '\n';
  }
  return out.str();
}

nlohmann::ordered_json Convert(const std::filesystem::path& in_path,
                       std::string in_format,
                       const std::filesystem::path& out_path,
                       std::string out_format, bool symmetrize) {
  in_format = in_format.empty() ? FormatFromPath(in_path)
                                : CheckedFormat(in_format, "in_format");
  out_format = out_format.empty() ? FormatFromPath(out_path)
                                  : CheckedFormat(out_format, "out_format");
  Input input = LoadInput(in_path, in_format);
  if (symmetrize) input.measurements = Symmetrize(std::move(input.measurements));
  if (out_format == "g2o") {
    WriteG2oFile(FromMeasurements(input.vertices, input.measurements,
                                  input.external_ids),
                 out_path);
  } else {
    Dataset dataset;
    dataset.vertices_are_ground_truth = input.vertices_are_ground_truth;
    dataset.external_ids = input.external_ids;
    dataset.vertices = input.vertices;
    dataset.measurements = input.measurements;
    WriteDataset(dataset, out_path);
  }
  return ordered_json{{"vertices", input.vertices.size()},
                      {"measurements", input.measurements.size()},
                      {"out", out_path.string()}};
}

}  // namespace cpgo::tools
