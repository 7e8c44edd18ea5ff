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

#ifndef CPGO_TESTS_SUPPORT_FIXTURES_H_
#define CPGO_TESTS_SUPPORT_FIXTURES_H_

#include <set>
#include <utility>
#include <vector>

#include "cpgo/graph.h"
#include "cpgo/random.h"
#include "cpgo/so3.h"

namespace cpgo::testing {

using EdgeList = std::vector<std::pair<VertexId, VertexId>>;

inline EdgeList PathEdges(int n) {
  EdgeList edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return edges;
}

inline EdgeList StarEdges(int n) {
  EdgeList edges;
  for (int i = 1; i < n; ++i) edges.emplace_back(0, i);
  return edges;
}

inline EdgeList CompleteEdges(int n) {
  EdgeList edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  return edges;
}

// Random spanning tree plus `extra` random chords.
inline EdgeList RandomConnectedEdges(int n, int extra, Rng& rng) {
  std::set<std::pair<VertexId, VertexId>> edges;
  for (int i = 1; i < n; ++i) {
    const int parent = static_cast<int>(rng.UniformIndex(i));
    edges.emplace(parent, i);
  }
  for (int k = 0; k < extra && n > 2; ++k) {
    const int a = static_cast<int>(rng.UniformIndex(n));
    const int b = static_cast<int>(rng.UniformIndex(n));
    if (a != b) edges.emplace(std::min(a, b), std::max(a, b));
  }
  return {edges.begin(), edges.end()};
}

inline Pose RandomPose(Rng& rng, double spread = 5.0) {
  return Pose{Vector3(rng.Uniform(-spread, spread), rng.Uniform(-spread, spread),
                      rng.Uniform(-spread, spread)),
              so3::RandomRotation(rng)};
}

inline std::vector<Pose> RandomPoses(int n, Rng& rng, double spread = 5.0) {
  std::vector<Pose> poses;
  for (int i = 0; i < n; ++i) poses.push_back(RandomPose(rng, spread));
  return poses;
}

inline RelativeMeasurement ExactMeasurement(const std::vector<Pose>& poses,
                                            VertexId i, VertexId j) {
  return RelativeMeasurement{
      i, j, poses[i].r.transpose() * (poses[j].t - poses[i].t),
      poses[i].r.transpose() * poses[j].r};
}

inline std::vector<RelativeMeasurement> ExactMeasurements(
    const std::vector<Pose>& poses, const EdgeList& edges) {
  std::vector<RelativeMeasurement> out;
  for (const auto& [i, j] : edges) {
    out.push_back(ExactMeasurement(poses, i, j));
    out.push_back(ExactMeasurement(poses, j, i));
  }
  return out;
}

inline PoseGraph ExactGraph(const std::vector<Pose>& poses,
                            const EdgeList& edges) {
  return PoseGraph::Build(static_cast<int>(poses.size()),
                          ExactMeasurements(poses, edges));
}

// Each direction perturbed independently: rotation by exp(N(0, kappa^2 I)),
// translation by N(0, tau^2 I).
inline PoseGraph NoisyGraph(const std::vector<Pose>& poses,
                            const EdgeList& edges, double tau, double kappa,
                            Rng& rng) {
  std::vector<RelativeMeasurement> out = ExactMeasurements(poses, edges);
  for (RelativeMeasurement& m : out) {
    m.t_rel += rng.Gaussian3(tau);
    m.r_rel = m.r_rel * so3::Exp(rng.Gaussian3(kappa));
  }
  return PoseGraph::Build(static_cast<int>(poses.size()), std::move(out));
}

inline double MaxPoseError(const std::vector<Pose>& a,
                           const std::vector<Pose>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max({worst, (a[i].t - b[i].t).norm(),
                      (a[i].r - b[i].r).norm()});
  }
  return worst;
}

inline bool BitwiseEqual(const std::vector<Pose>& a,
                         const std::vector<Pose>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].t != b[i].t || a[i].r != b[i].r) return false;
  }
  return true;
}

}  // namespace cpgo::testing

#endif  // CPGO_TESTS_SUPPORT_FIXTURES_H_
