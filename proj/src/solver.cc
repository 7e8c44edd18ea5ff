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

#include "cpgo/solver.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "cpgo/consistency.h"
#include "spdlog/spdlog.h"

namespace cpgo {

std::string_view ToString(TranslationMode mode) {
  switch (mode) {
    case TranslationMode::kPerStepAveraged:
      return "per_step_averaged";
    case TranslationMode::kOnlineAveraged:
      return "online_averaged";
    case TranslationMode::kRaw:
      return "raw";
  }
  return "unknown";
}

TranslationMode ParseTranslationMode(std::string_view name) {
  if (name == "per_step_averaged") return TranslationMode::kPerStepAveraged;
  if (name == "online_averaged") return TranslationMode::kOnlineAveraged;
  if (name == "raw") return TranslationMode::kRaw;
  throw ConfigError("translation_mode",
                    "unknown mode '" + std::string(name) +
                        "' (expected per_step_averaged, online_averaged or "
                        "raw)");
}

void SolverConfig::Validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ConfigError("dt", "must be positive");
  }
  if (!(stop_tol > 0.0)) throw ConfigError("stop_tol", "must be positive");
  if (max_iters < 1) throw ConfigError("max_iters", "must be at least 1");
}

ObjectiveValue& ObjectiveValue::operator+=(const ObjectiveValue& other) {
  geodesic += other.geodesic;
  chordal += other.chordal;
  rotation_only += other.rotation_only;
  translation_only += other.translation_only;
  return *this;
}

NodeEvaluation EvaluateNode(VertexId self_id, const Pose& self,
                            std::span<const IncidentEdge> edges,
                            std::span<const Pose> neighbor_estimates,
                            TranslationMode mode) {
  if (edges.size() != neighbor_estimates.size()) {
    throw MissingNeighborData("vertex " + std::to_string(self_id) +
                              " has " + std::to_string(edges.size()) +
                              " edges but " +
                              std::to_string(neighbor_estimates.size()) +
                              " neighbor estimates");
  }
  NodeEvaluation eval;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const IncidentEdge& edge = edges[k];
    const Pose& other = neighbor_estimates[k];
    const Matrix3 r_rel_est = self.r.transpose() * other.r;

    Vector3 omega_ij;
    try {
      omega_ij = so3::Log(r_rel_est * edge.r_out.transpose());
    } catch (const AngleAtPi& e) {
      throw AngleAtPi(e.angle(), std::make_pair(self_id, edge.neighbor));
    }
    const Vector3 rotated_meas = self.r * edge.t_out;
    const Vector3 residual = other.t - self.t - rotated_meas;

    switch (mode) {
      case TranslationMode::kRaw:
        eval.controls.linear += residual;
        break;
      case TranslationMode::kPerStepAveraged:
        eval.controls.linear +=
            other.t - self.t -
            self.r * AveragedTranslation(edge.t_out, edge.t_in, r_rel_est);
        break;
      case TranslationMode::kOnlineAveraged:
        eval.controls.linear += (other.t - self.t) +
                                0.5 * (other.r * edge.t_in - rotated_meas);
        break;
    }
    eval.controls.angular += omega_ij;
    eval.offset += rotated_meas;

    const double trans_sq = residual.squaredNorm();
    const double rot_sq = omega_ij.squaredNorm();
    const double chordal_sq = (r_rel_est - edge.r_out).squaredNorm();
    eval.objective.translation_only += trans_sq;
    eval.objective.rotation_only += rot_sq;
    eval.objective.geodesic += trans_sq + rot_sq;
    eval.objective.chordal += trans_sq + chordal_sq;
  }
  return eval;
}

Pose Integrate(const Pose& pose, const NodeControls& controls, double dt) {
  Pose next;
  next.t = pose.t + dt * controls.linear;
  next.r = so3::Reorthonormalize(pose.r * so3::Exp(dt * controls.angular));
  return next;
}

bool CheckStepSize(double dt, int max_degree) {
  const double gain = dt * max_degree;
  if (gain >= 2.0) {
    throw StepSizeUnstable("dt * max_degree = " + std::to_string(gain) +
                           " >= 2; the consensus iteration would diverge");
  }
  if (gain >= 1.0) {
    spdlog::warn("dt * max_degree = {:.3f} >= 1; step size close to the "
                 "stability limit",
                 gain);
    return true;
  }
  return false;
}

namespace {

std::vector<Pose> GatherNeighbors(std::span<const IncidentEdge> edges,
                                  std::span<const Pose> estimates) {
  std::vector<Pose> neighbors;
  neighbors.reserve(edges.size());
  for (const IncidentEdge& e : edges) neighbors.push_back(estimates[e.neighbor]);
  return neighbors;
}

double MaxControlNorm(std::span<const NodeControls> controls) {
  double max_norm = 0.0;
  for (const NodeControls& c : controls) {
    max_norm = std::max({max_norm, c.linear.norm(), c.angular.norm()});
  }
  return max_norm;
}

bool AllControlsZero(std::span<const NodeControls> controls) {
  return std::all_of(controls.begin(), controls.end(),
                     [](const NodeControls& c) {
                       return c.linear.isZero(0.0) && c.angular.isZero(0.0);
                     });
}

void CheckEstimateCount(std::span<const Pose> estimates,
                        const PoseGraph& graph) {
  if (static_cast<int>(estimates.size()) != graph.num_vertices()) {
    throw MissingNeighborData("expected " +
                              std::to_string(graph.num_vertices()) +
                              " estimates, got " +
                              std::to_string(estimates.size()));
  }
}

}  // namespace

Solver::Solver(const PoseGraph& graph, const SolverConfig& config)
    : graph_(graph), config_(config) {
  config_.Validate();
  CheckStepSize(config_.dt, MaxDegree(graph_));
  incident_.reserve(graph_.num_vertices());
  for (VertexId i = 0; i < graph_.num_vertices(); ++i) {
    incident_.push_back(IncidentEdges(graph_, i));
  }
}

void Solver::Evaluate(SolverState& state) const {
  const int n = graph_.num_vertices();
  state.controls.resize(n);
  state.offsets.resize(n);
  state.objective = ObjectiveValue{};
  for (VertexId i = 0; i < n; ++i) {
    const NodeEvaluation eval =
        EvaluateNode(i, state.estimates[i], incident_[i],
                     GatherNeighbors(incident_[i], state.estimates),
                     config_.translation_mode);
    state.controls[i] = eval.controls;
    state.offsets[i] = eval.offset;
    state.objective += eval.objective;
  }
  if (config_.record_history) {
    state.history.push_back(
        {state.iter, state.objective, MaxControlNorm(state.controls)});
  }
}

SolverState Solver::Start(std::vector<Pose> init) const {
  CheckEstimateCount(init, graph_);
  SolverState state;
  state.estimates = std::move(init);
  Evaluate(state);
  return state;
}

void Solver::Step(SolverState& state) const {
  for (std::size_t i = 0; i < state.estimates.size(); ++i) {
    state.estimates[i] =
        Integrate(state.estimates[i], state.controls[i], config_.dt);
  }
  ++state.iter;
  Evaluate(state);
}

SolveResult Solver::Solve(std::vector<Pose> init,
                          const StateObserver& observer) const {
  const auto start = std::chrono::steady_clock::now();
  SolverState state = Start(std::move(init));
  if (observer) observer(state);

  bool converged = AllControlsZero(state.controls);
  while (!converged && state.iter < config_.max_iters) {
    const double previous = state.objective.geodesic;
    Step(state);
    if (observer) observer(state);
    converged =
        std::abs(state.objective.geodesic - previous) < config_.stop_tol;
  }

  SolveResult result;
  result.estimates = std::move(state.estimates);
  result.history = std::move(state.history);
  result.final_objective = state.objective;
  result.iterations = state.iter;
  result.converged = converged;
  result.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

Vector3 RotationControl(VertexId i, std::span<const Pose> estimates,
                        const PoseGraph& graph) {
  CheckEstimateCount(estimates, graph);
  const auto edges = IncidentEdges(graph, i);
  return EvaluateNode(i, estimates[i], edges, GatherNeighbors(edges, estimates),
                      TranslationMode::kRaw)
      .controls.angular;
}

Vector3 TranslationControl(VertexId i, std::span<const Pose> estimates,
                           const PoseGraph& graph, TranslationMode mode) {
  CheckEstimateCount(estimates, graph);
  const auto edges = IncidentEdges(graph, i);
  return EvaluateNode(i, estimates[i], edges, GatherNeighbors(edges, estimates),
                      mode)
      .controls.linear;
}

SolveResult Solve(const PoseGraph& graph, std::vector<Pose> init,
                  const SolverConfig& config, const StateObserver& observer) {
  return Solver(graph, config).Solve(std::move(init), observer);
}

ObjectiveValue EvaluateObjective(std::span<const Pose> estimates,
                                 const PoseGraph& graph) {
  CheckEstimateCount(estimates, graph);
  ObjectiveValue total;
  for (VertexId i = 0; i < graph.num_vertices(); ++i) {
    const auto edges = IncidentEdges(graph, i);
    total += EvaluateNode(i, estimates[i], edges,
                          GatherNeighbors(edges, estimates),
                          TranslationMode::kRaw)
                 .objective;
  }
  return total;
}

double EvaluateLyapunov(std::span<const Pose> estimates,
                        const PoseGraph& graph) {
  return 0.5 * EvaluateObjective(estimates, graph).rotation_only;
}

double MaxResidualAngle(std::span<const Pose> estimates,
                        const PoseGraph& graph) {
  CheckEstimateCount(estimates, graph);
  double worst = 0.0;
  for (const RelativeMeasurement& m : graph.measurements()) {
    const Matrix3 residual = estimates[m.src].r.transpose() *
                             estimates[m.dst].r * m.r_rel.transpose();
    worst = std::max(worst, so3::Angle(residual));
  }
  return worst;
}

bool InBasin(std::span<const Pose> estimates, const PoseGraph& graph,
             double epsilon) {
  return MaxResidualAngle(estimates, graph) <=
         std::numbers::pi / 2.0 - epsilon;
}

bool IsEquilibrium(std::span<const Pose> estimates, const PoseGraph& graph,
                   double tol, TranslationMode mode) {
  CheckEstimateCount(estimates, graph);
  try {
    for (VertexId i = 0; i < graph.num_vertices(); ++i) {
      const auto edges = IncidentEdges(graph, i);
      const NodeControls c =
          EvaluateNode(i, estimates[i], edges,
                       GatherNeighbors(edges, estimates), mode)
              .controls;
      if (!(c.linear.norm() < tol) || !(c.angular.norm() < tol)) return false;
    }
  } catch (const AngleAtPi&) {
    return false;
  }
  return true;
}

std::vector<Pose> AlignGauge(std::span<const Pose> estimates,
                             std::span<const Pose> reference,
                             VertexId anchor) {
  if (anchor < 0 || static_cast<std::size_t>(anchor) >= estimates.size() ||
      static_cast<std::size_t>(anchor) >= reference.size()) {
    throw DanglingVertexId("gauge anchor " + std::to_string(anchor) +
                           " out of range");
  }
  const Pose correction = reference[anchor] * estimates[anchor].Inverse();
  std::vector<Pose> aligned;
  aligned.reserve(estimates.size());
  for (const Pose& p : estimates) aligned.push_back(correction * p);
  return aligned;
}

}  // namespace cpgo
