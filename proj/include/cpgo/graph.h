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

#ifndef CPGO_GRAPH_H_
#define CPGO_GRAPH_H_

#include <cstddef>
#include <span>
#include <vector>

#include "Eigen/Core"
#include "cpgo/so3.h"

namespace cpgo {

// Dense vertex index in [0, n). Files with other ids are remapped on load.
using VertexId = int;

struct Pose {
  Vector3 t = Vector3::Zero();
  Matrix3 r = Matrix3::Identity();

  static Pose Identity() { return Pose{}; }

  Pose Inverse() const;

  // Rigid-body composition: (*this) * other maps other's frame into ours.
  Pose operator*(const Pose& other) const;
};

// Pose of `dst` expressed in the frame of `src`.
struct RelativeMeasurement {
  VertexId src = 0;
  VertexId dst = 0;
  Vector3 t_rel = Vector3::Zero();
  Matrix3 r_rel = Matrix3::Identity();
};

// The opposite-direction measurement (dst, src) that is exactly consistent
// with `m`: rotation r^T, translation -r^T t.
RelativeMeasurement Inverted(const RelativeMeasurement& m);

// Adds the inverted companion of every measurement whose reverse direction
// is missing. Input order is kept; companions are appended in input order.
// Idempotent.
std::vector<RelativeMeasurement> Symmetrize(
    std::vector<RelativeMeasurement> measurements);

// What vertex i holds locally about edge {i, j}: both directed measurements.
struct IncidentEdge {
  VertexId neighbor = 0;
  Vector3 t_out = Vector3::Zero();     // measurement (i, j)
  Matrix3 r_out = Matrix3::Identity();
  Vector3 t_in = Vector3::Zero();      // measurement (j, i)
  Matrix3 r_in = Matrix3::Identity();
};

struct BuildOptions {
  // Synthesize missing (j,i) companions instead of rejecting the input.
  bool symmetrize = false;
};

// Immutable pose graph. Each undirected edge is stored as its two directed
// measurements. Measurements are kept sorted by (src, dst), so the outgoing
// measurements of a vertex line up with its ascending neighbor list.
class PoseGraph {
 public:
  // Throws DanglingVertexId, DuplicateEdge, DisconnectedGraph and, when
  // options.symmetrize is false, UnpairedMeasurement.
  static PoseGraph Build(int num_vertices,
                         std::vector<RelativeMeasurement> measurements,
                         const BuildOptions& options = {});

  int num_vertices() const { return num_vertices_; }
  // Directed measurements.
  std::size_t num_measurements() const { return measurements_.size(); }
  std::size_t num_edges() const { return measurements_.size() / 2; }

  std::span<const RelativeMeasurement> measurements() const {
    return measurements_;
  }
  std::span<const VertexId> neighbors(VertexId i) const;
  // outgoing(i)[k] is the measurement (i, neighbors(i)[k]).
  std::span<const RelativeMeasurement> outgoing(VertexId i) const;
  int degree(VertexId i) const;
  // Index into measurements() of outgoing(i)[0].
  std::size_t outgoing_offset(VertexId i) const { return offsets_[i]; }

  // Index into measurements() of (i, j), or npos.
  std::size_t Find(VertexId i, VertexId j) const;
  // Throws std::out_of_range if (i, j) is not an edge.
  const RelativeMeasurement& measurement(VertexId i, VertexId j) const;
  // Index of the reverse-direction companion of measurements()[k].
  std::size_t companion(std::size_t k) const { return companion_[k]; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  PoseGraph() = default;

  int num_vertices_ = 0;
  std::vector<RelativeMeasurement> measurements_;
  std::vector<std::size_t> offsets_;
  std::vector<VertexId> neighbor_ids_;
  std::vector<std::size_t> companion_;
};

// Incident edges of `i` in ascending neighbor order.
std::vector<IncidentEdge> IncidentEdges(const PoseGraph& graph, VertexId i);

Eigen::MatrixXd Laplacian(const PoseGraph& graph);

// Second-smallest Laplacian eigenvalue (dense eigensolver).
double AlgebraicConnectivity(const PoseGraph& graph);

int MaxDegree(const PoseGraph& graph);

struct SpanningTree {
  VertexId root = 0;
  // parent[root] == -1.
  std::vector<VertexId> parent;
  // Vertices in breadth-first discovery order, root first.
  std::vector<VertexId> order;
};

// Breadth-first tree (minimum hop count); neighbors are visited in ascending
// id order.
SpanningTree BuildSpanningTree(const PoseGraph& graph, VertexId root);

}  // namespace cpgo

#endif  // CPGO_GRAPH_H_
