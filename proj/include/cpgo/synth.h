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

#ifndef CPGO_SYNTH_H_
#define CPGO_SYNTH_H_

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "cpgo/graph.h"

namespace cpgo {

enum class Topology { kRandom, kCircle, kGrid, kSphere };

std::string_view ToString(Topology topology);
// Accepts "random", "circle", "grid" and "sphere".
Topology ParseTopology(std::string_view name);

struct ScenarioSpec {
  Topology topology = Topology::kRandom;
  int n = 25;

  // random: each new vertex lands uniformly in the ball of this radius around
  // a uniformly chosen earlier vertex; all pairs within it are connected.
  double comm_radius = 2.0;  // meters
  // random: candidates closer than this to an existing vertex are redrawn.
  double min_separation = 0.0;  // meters
  int max_attempts = 1000;      // per vertex

  // grid: 6-neighbor lattice. n must equal the product of the dims.
  std::array<int, 3> grid_dims = {3, 3, 3};
  double grid_spacing = 1.0;  // meters

  // circle and sphere.
  double radius = 5.0;  // meters
  // circle: vertex k is linked to k +- 1 ... k +- circle_hops around the ring,
  // clamped to (n - 1) / 2.
  int circle_hops = 6;
  // sphere: directed measurement count. Ring edges come first, then the
  // shortest remaining pairs.
  int target_measurements = 544;

  // Throws ConfigError.
  void Validate() const;
};

struct NoiseModel {
  double tau = 0.5;     // translation std, meters
  double kappa = 0.524; // rotation std, radians
  std::uint64_t seed = 0;

  // Throws ConfigError.
  void Validate() const;
};

struct GroundTruth {
  std::vector<Pose> poses;
  // Undirected edges with first < second, ascending.
  std::vector<std::pair<VertexId, VertexId>> edges;
};

// Throws ConfigError and, for the random topology, GenerationFailed.
GroundTruth GenerateGroundTruth(const ScenarioSpec& spec, std::uint64_t seed);

// Both directions of every edge with independent noise:
//   t_ij = R_i^T (t_j - t_i) + N(0, tau^2 I),  R_ij = R_i^T R_j exp(nu),
//   nu ~ N(0, kappa^2 I).
// Edges are visited in order, (i, j) drawn before (j, i).
PoseGraph CorruptMeasurements(
    std::span<const Pose> poses,
    std::span<const std::pair<VertexId, VertexId>> edges,
    const NoiseModel& noise);

// t_i + N(0, tau^2 I), R_i exp(nu) with nu ~ N(0, kappa^2 I).
std::vector<Pose> GpsInit(std::span<const Pose> poses, double tau,
                          double kappa, std::uint64_t seed);

// Root at identity; every other vertex chains the measurement from its
// breadth-first parent.
std::vector<Pose> SpanningTreeInit(const PoseGraph& graph, VertexId root = 0);

std::vector<Pose> IdentityInit(int n);

}  // namespace cpgo

#endif  // CPGO_SYNTH_H_
