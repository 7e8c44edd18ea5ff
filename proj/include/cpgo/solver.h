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

#ifndef CPGO_SOLVER_H_
#define CPGO_SOLVER_H_

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cpgo/graph.h"

namespace cpgo {

// How the linear velocity uses the translation measurements.
enum class TranslationMode {
  // Measurement averaged with the reverse one through the current relative
  // rotation estimate, every step.
  kPerStepAveraged,
  // sum (t_j - t_i) + 1/2 (R_j t_ji - R_i t_ij).
  kOnlineAveraged,
  // sum t_j - t_i - R_i t_ij.
  kRaw,
};

std::string_view ToString(TranslationMode mode);
// Accepts "per_step_averaged", "online_averaged" and "raw".
TranslationMode ParseTranslationMode(std::string_view name);

struct SolverConfig {
  double dt = 0.05;          // seconds
  double stop_tol = 1e-2;    // on |geodesic(k) - geodesic(k-1)|
  int max_iters = 20000;
  TranslationMode translation_mode = TranslationMode::kPerStepAveraged;
  bool record_history = true;

  // Throws ConfigError.
  void Validate() const;
};

// Pose-graph objective over all directed measurements.
struct ObjectiveValue {
  // sum ||t_j - t_i - R_i t_ij||^2 + ||log(R_i^T R_j R_ij^T)||^2
  double geodesic = 0.0;
  // Same translation term plus ||R_i^T R_j - R_ij||_F^2.
  double chordal = 0.0;
  double rotation_only = 0.0;
  double translation_only = 0.0;

  ObjectiveValue& operator+=(const ObjectiveValue& other);
};

struct NodeControls {
  Vector3 linear = Vector3::Zero();   // nu_i, m/s
  Vector3 angular = Vector3::Zero();  // omega_i, rad/s
};

// Everything one vertex derives from its own pose and its neighbors' poses.
struct NodeEvaluation {
  NodeControls controls;
  // Objective restricted to the vertex's outgoing measurements.
  ObjectiveValue objective;
  // delta_i = sum_j R_i t_ij.
  Vector3 offset = Vector3::Zero();
};

// Local evaluation used by both the reference solver and the distributed
// workers. Neighbor terms are summed in the order of `edges`, which callers
// keep ascending by neighbor id. Throws AngleAtPi naming the edge.
NodeEvaluation EvaluateNode(VertexId self_id, const Pose& self,
                            std::span<const IncidentEdge> edges,
                            std::span<const Pose> neighbor_estimates,
                            TranslationMode mode);

// t += dt nu, R <- R exp(dt omega), then re-orthonormalized.
Pose Integrate(const Pose& pose, const NodeControls& controls, double dt);

struct HistoryEntry {
  int iter = 0;
  ObjectiveValue objective;
  // max_i max(||nu_i||, ||omega_i||) at this state.
  double max_control_norm = 0.0;
};

struct SolverState {
  std::vector<Pose> estimates;
  int iter = 0;
  std::vector<HistoryEntry> history;
  // Controls and offsets evaluated at `estimates`.
  std::vector<NodeControls> controls;
  std::vector<Vector3> offsets;
  ObjectiveValue objective;
};

struct SolveResult {
  std::vector<Pose> estimates;
  std::vector<HistoryEntry> history;
  ObjectiveValue final_objective;
  int iterations = 0;
  bool converged = false;
  double wall_clock_seconds = 0.0;
};

// Called with every evaluated state, starting from the initial one.
using StateObserver = std::function<void(const SolverState&)>;

// Single-threaded reference execution of the consensus flow.
class Solver {
 public:
  // Throws ConfigError for an invalid config and StepSizeUnstable when
  // dt * max_degree >= 2 (warns from 1).
  Solver(const PoseGraph& graph, const SolverConfig& config);

  // State at `init` with controls, offsets and objective evaluated.
  SolverState Start(std::vector<Pose> init) const;

  // Applies the controls stored in `state` to every vertex at once, then
  // evaluates the new state.
  void Step(SolverState& state) const;

  SolveResult Solve(std::vector<Pose> init,
                    const StateObserver& observer = {}) const;

  const PoseGraph& graph() const { return graph_; }
  const SolverConfig& config() const { return config_; }

 private:
  void Evaluate(SolverState& state) const;

  const PoseGraph& graph_;
  SolverConfig config_;
  std::vector<std::vector<IncidentEdge>> incident_;
};

// Throws StepSizeUnstable when dt * max_degree >= 2; returns true (and logs a
// warning) when it is >= 1.
bool CheckStepSize(double dt, int max_degree);

Vector3 RotationControl(VertexId i, std::span<const Pose> estimates,
                        const PoseGraph& graph);
Vector3 TranslationControl(VertexId i, std::span<const Pose> estimates,
                           const PoseGraph& graph, TranslationMode mode);

SolveResult Solve(const PoseGraph& graph, std::vector<Pose> init,
                  const SolverConfig& config,
                  const StateObserver& observer = {});

ObjectiveValue EvaluateObjective(std::span<const Pose> estimates,
                                 const PoseGraph& graph);

// 1/2 sum over directed measurements of the squared geodesic residual.
double EvaluateLyapunov(std::span<const Pose> estimates,
                        const PoseGraph& graph);

// True iff every directed residual angle is <= pi/2 - epsilon.
bool InBasin(std::span<const Pose> estimates, const PoseGraph& graph,
             double epsilon);

// Largest residual angle over directed measurements.
double MaxResidualAngle(std::span<const Pose> estimates,
                        const PoseGraph& graph);

bool IsEquilibrium(std::span<const Pose> estimates, const PoseGraph& graph,
                   double tol,
                   TranslationMode mode = TranslationMode::kPerStepAveraged);

// Left-multiplies every estimate by the rigid transform that maps
// estimates[anchor] onto reference[anchor].
std::vector<Pose> AlignGauge(std::span<const Pose> estimates,
                             std::span<const Pose> reference,
                             VertexId anchor);

}  // namespace cpgo

#endif  // CPGO_SOLVER_H_
