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

#include "cpgo/consistency.h"

#include <algorithm>
#include <numbers>
#include <string>
#include <vector>

namespace cpgo {

ConsistencyReport CheckPairwise(const PoseGraph& graph,
                                const ConsistencyTolerance& tolerance) {
  ConsistencyReport report;
  report.tolerance = tolerance;
  const auto measurements = graph.measurements();
  for (std::size_t k = 0; k < measurements.size(); ++k) {
    const RelativeMeasurement& ij = measurements[k];
    if (ij.src > ij.dst) continue;
    const RelativeMeasurement& ji = measurements[graph.companion(k)];
    report.pairwise_rot_max_defect =
        std::max(report.pairwise_rot_max_defect,
                 so3::Angle(ij.r_rel * ji.r_rel));
    report.pairwise_trans_max_defect =
        std::max(report.pairwise_trans_max_defect,
                 (ij.t_rel + ij.r_rel * ji.t_rel).norm());
  }
  report.pairwise_pass = report.pairwise_rot_max_defect <= tolerance.rot &&
                         report.pairwise_trans_max_defect <= tolerance.trans;
  return report;
}

ConsistencyReport CheckMinimal(const PoseGraph& graph,
                               const ConsistencyTolerance& tolerance) {
  ConsistencyReport report;
  report.tolerance = tolerance;
  Vector3 rot_sum = Vector3::Zero();
  Vector3 trans_sum = Vector3::Zero();
  for (const RelativeMeasurement& m : graph.measurements()) {
    try {
      rot_sum += so3::Log(m.r_rel);
    } catch (const AngleAtPi& e) {
      throw AngleAtPi(e.angle(), std::make_pair(m.src, m.dst));
    }
    trans_sum += m.t_rel;
  }
  report.minimal_rot_defect = rot_sum.norm();
  report.minimal_trans_defect = trans_sum.norm();
  report.minimal_pass = report.minimal_rot_defect <= tolerance.rot &&
                        report.minimal_trans_defect <= tolerance.trans;
  return report;
}

ConsistencyReport CheckGlobal(const PoseGraph& graph,
                              std::size_t cycle_basis_limit,
                              const ConsistencyTolerance& tolerance) {
  ConsistencyReport report;
  report.tolerance = tolerance;
  report.global_checked = true;
  report.global_pass = true;
  if (graph.num_vertices() == 0) {
    report.global_max_cycle_defect = CycleDefect{};
    return report;
  }

  // Absolute poses obtained by composing measurements down the tree.
  const SpanningTree tree = BuildSpanningTree(graph, 0);
  std::vector<Pose> chained(graph.num_vertices());
  for (VertexId v : tree.order) {
    if (v == tree.root) continue;
    const RelativeMeasurement& m = graph.measurement(tree.parent[v], v);
    chained[v] = chained[tree.parent[v]] * Pose{m.t_rel, m.r_rel};
  }

  CycleDefect worst;
  for (const RelativeMeasurement& m : graph.measurements()) {
    if (report.cycles_checked >= cycle_basis_limit) break;
    if (tree.parent[m.dst] == m.src) continue;
    // Tree path src -> dst closed by the inverse of the measurement.
    const Pose via_tree = chained[m.src].Inverse() * chained[m.dst];
    const Pose loop = Pose{m.t_rel, m.r_rel}.Inverse() * via_tree;
    worst.rot = std::max(worst.rot, so3::Angle(loop.r));
    worst.trans = std::max(worst.trans, loop.t.norm());
    ++report.cycles_checked;
  }
  report.global_max_cycle_defect = worst;
  report.global_pass = worst.rot <= tolerance.rot &&
                       worst.trans <= tolerance.trans;
  return report;
}

ConsistencyReport CheckConsistency(const PoseGraph& graph,
                                   std::size_t cycle_basis_limit,
                                   const ConsistencyTolerance& tolerance) {
  ConsistencyReport report = CheckPairwise(graph, tolerance);
  const ConsistencyReport minimal = CheckMinimal(graph, tolerance);
  const ConsistencyReport global =
      CheckGlobal(graph, cycle_basis_limit, tolerance);
  report.minimal_rot_defect = minimal.minimal_rot_defect;
  report.minimal_trans_defect = minimal.minimal_trans_defect;
  report.minimal_pass = minimal.minimal_pass;
  report.global_checked = global.global_checked;
  report.cycles_checked = global.cycles_checked;
  report.global_max_cycle_defect = global.global_max_cycle_defect;
  report.global_pass = global.global_pass;
  return report;
}

Matrix3 AveragedRotation(const Matrix3& r_ij, const Matrix3& r_ji) {
  const Matrix3 discrepancy = r_ij.transpose() * r_ji.transpose();
  return r_ij * so3::Exp(0.5 * so3::Log(discrepancy));
}

PoseGraph EnforcePairwiseRotations(const PoseGraph& graph) {
  const auto measurements = graph.measurements();
  std::vector<RelativeMeasurement> averaged(measurements.begin(),
                                            measurements.end());
  for (std::size_t k = 0; k < measurements.size(); ++k) {
    const RelativeMeasurement& ij = measurements[k];
    const RelativeMeasurement& ji = measurements[graph.companion(k)];
    try {
      averaged[k].r_rel = AveragedRotation(ij.r_rel, ji.r_rel);
    } catch (const AngleAtPi& e) {
      throw AngleAtPi(e.angle(), std::make_pair(ij.src, ij.dst));
    }
  }
  return PoseGraph::Build(graph.num_vertices(), std::move(averaged));
}

Vector3 AveragedTranslation(const Vector3& t_ij, const Vector3& t_ji,
                            const Matrix3& r_ij_est) {
  return 0.5 * (t_ij - r_ij_est * t_ji);
}

Vector3 AveragedVelocityControl(const Pose& self,
                                std::span<const IncidentEdge> edges,
                                std::span<const Pose> neighbor_estimates) {
  if (edges.size() != neighbor_estimates.size()) {
    throw MissingNeighborData(
        "expected " + std::to_string(edges.size()) +
        " neighbor estimates, got " +
        std::to_string(neighbor_estimates.size()));
  }
  Vector3 velocity = Vector3::Zero();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const Pose& other = neighbor_estimates[k];
    velocity += (other.t - self.t) +
                0.5 * (other.r * edges[k].t_in - self.r * edges[k].t_out);
  }
  return velocity;
}

Vector3 AveragedVelocityControl(VertexId i, std::span<const Pose> estimates,
                                const PoseGraph& graph) {
  if (static_cast<int>(estimates.size()) != graph.num_vertices()) {
    throw MissingNeighborData("estimates cover " +
                              std::to_string(estimates.size()) + " of " +
                              std::to_string(graph.num_vertices()) +
                              " vertices");
  }
  const std::vector<IncidentEdge> edges = IncidentEdges(graph, i);
  std::vector<Pose> neighbors;
  neighbors.reserve(edges.size());
  for (const IncidentEdge& e : edges) neighbors.push_back(estimates[e.neighbor]);
  return AveragedVelocityControl(estimates[i], edges, neighbors);
}

}  // namespace cpgo
