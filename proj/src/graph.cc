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

#include "cpgo/graph.h"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>

#include "Eigen/Eigenvalues"

namespace cpgo {
namespace {

std::string EdgeName(VertexId i, VertexId j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

bool IsConnected(int n, const std::vector<RelativeMeasurement>& measurements) {
  if (n <= 1) return true;
  std::vector<std::vector<VertexId>> adjacency(n);
  for (const auto& m : measurements) {
    adjacency[m.src].push_back(m.dst);
    adjacency[m.dst].push_back(m.src);
  }
  std::vector<bool> seen(n, false);
  std::vector<VertexId> stack = {0};
  seen[0] = true;
  int reached = 1;
  while (!stack.empty()) {
    const VertexId v = stack.back();
    stack.pop_back();
    for (VertexId w : adjacency[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == n;
}

}  // namespace

Pose Pose::Inverse() const {
  Pose inv;
  inv.r = r.transpose();
  inv.t = -(inv.r * t);
  return inv;
}

Pose Pose::operator*(const Pose& other) const {
  Pose out;
  out.t = t + r * other.t;
  out.r = r * other.r;
  return out;
}

RelativeMeasurement Inverted(const RelativeMeasurement& m) {
  RelativeMeasurement inv;
  inv.src = m.dst;
  inv.dst = m.src;
  inv.r_rel = m.r_rel.transpose();
  inv.t_rel = -(inv.r_rel * m.t_rel);
  return inv;
}

std::vector<RelativeMeasurement> Symmetrize(
    std::vector<RelativeMeasurement> measurements) {
  std::map<std::pair<VertexId, VertexId>, bool> present;
  for (const auto& m : measurements) present[{m.src, m.dst}] = true;
  const std::size_t original = measurements.size();
  for (std::size_t k = 0; k < original; ++k) {
    const RelativeMeasurement& m = measurements[k];
    if (present.count({m.dst, m.src}) == 0) {
      present[{m.dst, m.src}] = true;
      measurements.push_back(Inverted(measurements[k]));
    }
  }
  return measurements;
}

PoseGraph PoseGraph::Build(int num_vertices,
                           std::vector<RelativeMeasurement> measurements,
                           const BuildOptions& options) {
  if (num_vertices < 0) {
    throw DanglingVertexId("negative vertex count");
  }
  for (const auto& m : measurements) {
    if (m.src < 0 || m.src >= num_vertices || m.dst < 0 ||
        m.dst >= num_vertices) {
      throw DanglingVertexId("measurement " + EdgeName(m.src, m.dst) +
                             " references a vertex outside [0, " +
                             std::to_string(num_vertices) + ")");
    }
    if (m.src == m.dst) {
      throw DanglingVertexId("self-loop measurement " +
                             EdgeName(m.src, m.dst));
    }
  }
  std::stable_sort(measurements.begin(), measurements.end(),
                   [](const RelativeMeasurement& a,
                      const RelativeMeasurement& b) {
                     return std::tie(a.src, a.dst) < std::tie(b.src, b.dst);
                   });
  for (std::size_t k = 1; k < measurements.size(); ++k) {
    if (measurements[k].src == measurements[k - 1].src &&
        measurements[k].dst == measurements[k - 1].dst) {
      throw DuplicateEdge("measurement " +
                          EdgeName(measurements[k].src, measurements[k].dst) +
                          " appears more than once");
    }
  }
  if (!IsConnected(num_vertices, measurements)) {
    throw DisconnectedGraph("pose graph with " + std::to_string(num_vertices) +
                            " vertices is not connected");
  }
  if (options.symmetrize) {
    measurements = Symmetrize(std::move(measurements));
    std::sort(measurements.begin(), measurements.end(),
              [](const RelativeMeasurement& a, const RelativeMeasurement& b) {
                return std::tie(a.src, a.dst) < std::tie(b.src, b.dst);
              });
  }

  PoseGraph graph;
  graph.num_vertices_ = num_vertices;
  graph.measurements_ = std::move(measurements);
  graph.offsets_.assign(num_vertices + 1, 0);
  for (const auto& m : graph.measurements_) ++graph.offsets_[m.src + 1];
  for (int i = 0; i < num_vertices; ++i) {
    graph.offsets_[i + 1] += graph.offsets_[i];
  }
  graph.neighbor_ids_.reserve(graph.measurements_.size());
  for (const auto& m : graph.measurements_) {
    graph.neighbor_ids_.push_back(m.dst);
  }
  graph.companion_.resize(graph.measurements_.size());
  for (std::size_t k = 0; k < graph.measurements_.size(); ++k) {
    const auto& m = graph.measurements_[k];
    const std::size_t reverse = graph.Find(m.dst, m.src);
    if (reverse == npos) {
      throw UnpairedMeasurement("measurement " + EdgeName(m.src, m.dst) +
                                " has no " + EdgeName(m.dst, m.src) +
                                " companion");
    }
    graph.companion_[k] = reverse;
  }
  return graph;
}

std::span<const VertexId> PoseGraph::neighbors(VertexId i) const {
  return std::span<const VertexId>(neighbor_ids_)
      .subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
}

std::span<const RelativeMeasurement> PoseGraph::outgoing(VertexId i) const {
  return std::span<const RelativeMeasurement>(measurements_)
      .subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
}

int PoseGraph::degree(VertexId i) const {
  return static_cast<int>(offsets_[i + 1] - offsets_[i]);
}

std::size_t PoseGraph::Find(VertexId i, VertexId j) const {
  if (i < 0 || i >= num_vertices_) return npos;
  const auto begin = neighbor_ids_.begin() + offsets_[i];
  const auto end = neighbor_ids_.begin() + offsets_[i + 1];
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return npos;
  return static_cast<std::size_t>(it - neighbor_ids_.begin());
}

const RelativeMeasurement& PoseGraph::measurement(VertexId i,
                                                  VertexId j) const {
  const std::size_t k = Find(i, j);
  if (k == npos) {
    throw std::out_of_range("no measurement " + EdgeName(i, j));
  }
  return measurements_[k];
}

std::vector<IncidentEdge> IncidentEdges(const PoseGraph& graph, VertexId i) {
  std::vector<IncidentEdge> edges;
  const std::size_t first = graph.outgoing_offset(i);
  const auto outgoing = graph.outgoing(i);
  edges.reserve(outgoing.size());
  for (std::size_t k = 0; k < outgoing.size(); ++k) {
    const RelativeMeasurement& out = outgoing[k];
    const RelativeMeasurement& in =
        graph.measurements()[graph.companion(first + k)];
    edges.push_back({out.dst, out.t_rel, out.r_rel, in.t_rel, in.r_rel});
  }
  return edges;
}

Eigen::MatrixXd Laplacian(const PoseGraph& graph) {
  const int n = graph.num_vertices();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (VertexId i = 0; i < n; ++i) {
    l(i, i) = graph.degree(i);
    for (VertexId j : graph.neighbors(i)) l(i, j) = -1.0;
  }
  return l;
}

double AlgebraicConnectivity(const PoseGraph& graph) {
  if (graph.num_vertices() < 2) return 0.0;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      Laplacian(graph), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(1);
}

int MaxDegree(const PoseGraph& graph) {
  int max_degree = 0;
  for (VertexId i = 0; i < graph.num_vertices(); ++i) {
    max_degree = std::max(max_degree, graph.degree(i));
  }
  return max_degree;
}

SpanningTree BuildSpanningTree(const PoseGraph& graph, VertexId root) {
  const int n = graph.num_vertices();
  if (root < 0 || root >= n) {
    throw DanglingVertexId("spanning tree root " + std::to_string(root) +
                           " out of range");
  }
  SpanningTree tree;
  tree.root = root;
  tree.parent.assign(n, -1);
  std::vector<bool> seen(n, false);
  std::deque<VertexId> queue = {root};
  seen[root] = true;
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    tree.order.push_back(v);
    for (VertexId w : graph.neighbors(v)) {
      if (!seen[w]) {
        seen[w] = true;
        tree.parent[w] = v;
        queue.push_back(w);
      }
    }
  }
  return tree;
}

}  // namespace cpgo
