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

#ifndef CPGO_CONSISTENCY_H_
#define CPGO_CONSISTENCY_H_

#include <cstddef>
#include <optional>
#include <span>

#include "cpgo/graph.h"

namespace cpgo {

struct ConsistencyTolerance {
  double rot = 1e-6;    // radians
  double trans = 1e-6;  // meters
};

struct CycleDefect {
  double rot = 0.0;    // radians
  double trans = 0.0;  // meters
};

// Measurement consistency at three strengths.
//
//  * pairwise: every edge's two directed measurements are mutual inverses,
//    R_ij R_ji = I and t_ij = -R_ij t_ji.
//  * minimal: the sums of log(R_ij) and of t_ij over all directed
//    measurements vanish.
//  * global: composing measurements around any cycle gives the identity.
//
// Each Check* function fills its own group of fields; the rest keep their
// defaults.
struct ConsistencyReport {
  ConsistencyTolerance tolerance;

  double pairwise_rot_max_defect = 0.0;    // max angle(R_ij R_ji)
  double pairwise_trans_max_defect = 0.0;  // max ||t_ij + R_ij t_ji||
  bool pairwise_pass = false;

  double minimal_rot_defect = 0.0;    // ||sum log(R_ij)^v||
  double minimal_trans_defect = 0.0;  // ||sum t_ij||
  bool minimal_pass = false;

  bool global_checked = false;
  std::size_t cycles_checked = 0;
  std::optional<CycleDefect> global_max_cycle_defect;
  bool global_pass = false;
};

ConsistencyReport CheckPairwise(const PoseGraph& graph,
                                const ConsistencyTolerance& tolerance = {});

// Propagates AngleAtPi when a single measurement rotation is at pi.
ConsistencyReport CheckMinimal(const PoseGraph& graph,
                               const ConsistencyTolerance& tolerance = {});

// Composes measurements around the fundamental cycles of the breadth-first
// tree rooted at 0: one cycle per directed measurement that is not a
// parent->child tree edge, at most `cycle_basis_limit` of them.
ConsistencyReport CheckGlobal(const PoseGraph& graph,
                              std::size_t cycle_basis_limit,
                              const ConsistencyTolerance& tolerance = {});

// All three checks in one report.
ConsistencyReport CheckConsistency(const PoseGraph& graph,
                                   std::size_t cycle_basis_limit,
                                   const ConsistencyTolerance& tolerance = {});

// Geodesic midpoint averaging of one edge: r_ij * exp(1/2 log(r_ij^T r_ji^T)).
// Applying it to both directions yields exactly inverse rotations.
Matrix3 AveragedRotation(const Matrix3& r_ij, const Matrix3& r_ji);

// Replaces every measurement rotation by AveragedRotation of its edge.
// Translations are left untouched. Throws AngleAtPi naming the edge if
// angle(R_ij R_ji) >= pi - 1e-9.
PoseGraph EnforcePairwiseRotations(const PoseGraph& graph);

// Translation measurement of (i,j) averaged with the reverse measurement
// mapped through the current relative rotation estimate R_i^T R_j:
// 1/2 (t_ij - r_ij_est t_ji).
Vector3 AveragedTranslation(const Vector3& t_ij, const Vector3& t_ji,
                            const Matrix3& r_ij_est);

// Linear velocity with online pairwise averaging:
//   sum_j (t_j - t_i) + 1/2 (R_j t_ji - R_i t_ij).
// neighbor_estimates[k] is the estimate of edges[k].neighbor. Throws
// MissingNeighborData if the two spans differ in length.
Vector3 AveragedVelocityControl(const Pose& self,
                                std::span<const IncidentEdge> edges,
                                std::span<const Pose> neighbor_estimates);

// Graph-level form; `estimates` must cover every vertex.
Vector3 AveragedVelocityControl(VertexId i, std::span<const Pose> estimates,
                                const PoseGraph& graph);

}  // namespace cpgo

#endif  // CPGO_CONSISTENCY_H_
