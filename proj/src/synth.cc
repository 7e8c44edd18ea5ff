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

#include "cpgo/synth.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>
#include <tuple>

#include "cpgo/errors.h"
#include "cpgo/random.h"

namespace cpgo {
namespace {

using Edge = std::pair<VertexId, VertexId>;

Edge Ordered(VertexId a, VertexId b) { return {std::min(a, b), std::max(a, b)}; }

Vector3 UniformInBall(Rng& rng, double radius) {
  while (true) {
    const Vector3 p(rng.Uniform(-1.0, 1.0), rng.Uniform(-1.0, 1.0),
                    rng.Uniform(-1.0, 1.0));
    if (p.squaredNorm() <= 1.0) return radius * p;
  }
}

std::vector<Vector3> RandomPositions(const ScenarioSpec& spec, Rng& rng) {
  std::vector<Vector3> points = {Vector3::Zero()};
  while (static_cast<int>(points.size()) < spec.n) {
    bool placed = false;
    for (int attempt = 0; attempt < spec.max_attempts && !placed; ++attempt) {
      const Vector3& center = points[rng.UniformIndex(points.size())];
      const Vector3 candidate = center + UniformInBall(rng, spec.comm_radius);
      const bool clear = std::none_of(
          points.begin(), points.end(), [&](const Vector3& p) {
            return (p - candidate).norm() < spec.min_separation;
          });
      if (clear) {
        points.push_back(candidate);
        placed = true;
      }
    }
    if (!placed) {
      throw GenerationFailed("could not place vertex " +
                             std::to_string(points.size()) + " in " +
                             std::to_string(spec.max_attempts) + " attempts");
    }
  }
  return points;
}

std::vector<Edge> EdgesWithinRadius(std::span<const Vector3> points,
                                    double radius) {
  std::vector<Edge> edges;
  const int n = static_cast<int>(points.size());
  for (VertexId i = 0; i < n; ++i) {
    for (VertexId j = i + 1; j < n; ++j) {
      if ((points[i] - points[j]).norm() <= radius) edges.emplace_back(i, j);
    }
  }
  return edges;
}

int CircleHops(const ScenarioSpec& spec) {
  return std::max(1, std::min(spec.circle_hops, (spec.n - 1) / 2));
}

std::vector<Vector3> CirclePositions(const ScenarioSpec& spec) {
  std::vector<Vector3> points;
  for (int k = 0; k < spec.n; ++k) {
    const double phi = 2.0 * std::numbers::pi * k / spec.n;
    points.emplace_back(spec.radius * std::cos(phi),
                        spec.radius * std::sin(phi), 0.0);
  }
  return points;
}

std::vector<Edge> CircleEdges(const ScenarioSpec& spec) {
  std::set<Edge> edges;
  for (int k = 0; k < spec.n; ++k) {
    for (int d = 1; d <= CircleHops(spec); ++d) {
      edges.insert(Ordered(k, (k + d) % spec.n));
    }
  }
  return {edges.begin(), edges.end()};
}

std::vector<Vector3> GridPositions(const ScenarioSpec& spec) {
  const auto [nx, ny, nz] = spec.grid_dims;
  std::vector<Vector3> points;
  for (int z = 0; z < nz; ++z) {
    for (int y = 0; y < ny; ++y) {
      for (int x = 0; x < nx; ++x) {
        points.emplace_back(spec.grid_spacing * x, spec.grid_spacing * y,
                            spec.grid_spacing * z);
      }
    }
  }
  return points;
}

std::vector<Edge> GridEdges(const ScenarioSpec& spec) {
  const auto [nx, ny, nz] = spec.grid_dims;
  const auto id = [&](int x, int y, int z) { return x + nx * (y + ny * z); };
  std::vector<Edge> edges;
  for (int z = 0; z < nz; ++z) {
    for (int y = 0; y < ny; ++y) {
      for (int x = 0; x < nx; ++x) {
        if (x + 1 < nx) edges.emplace_back(id(x, y, z), id(x + 1, y, z));
        if (y + 1 < ny) edges.emplace_back(id(x, y, z), id(x, y + 1, z));
        if (z + 1 < nz) edges.emplace_back(id(x, y, z), id(x, y, z + 1));
      }
    }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

std::vector<Vector3> SpherePositions(const ScenarioSpec& spec) {
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<Vector3> points;
  for (int k = 0; k < spec.n; ++k) {
    const double y = 1.0 - 2.0 * (k + 0.5) / spec.n;
    const double ring = std::sqrt(1.0 - y * y);
    const double phi = golden_angle * k;
    points.emplace_back(spec.radius * ring * std::cos(phi), spec.radius * y,
                        spec.radius * ring * std::sin(phi));
  }
  return points;
}

std::set<Edge> RingEdges(int n) {
  std::set<Edge> ring;
  for (int k = 0; k < n; ++k) ring.insert(Ordered(k, (k + 1) % n));
  return ring;
}

std::vector<Edge> SphereEdges(const ScenarioSpec& spec,
                              std::span<const Vector3> points) {
  std::set<Edge> edges = RingEdges(spec.n);
  std::vector<std::tuple<double, VertexId, VertexId>> candidates;
  for (VertexId i = 0; i < spec.n; ++i) {
    for (VertexId j = i + 1; j < spec.n; ++j) {
      if (!edges.contains({i, j})) {
        candidates.emplace_back((points[i] - points[j]).norm(), i, j);
      }
    }
  }
  std::sort(candidates.begin(), candidates.end());
  const std::size_t target = spec.target_measurements / 2;
  for (const auto& [dist, i, j] : candidates) {
    if (edges.size() >= target) break;
    edges.emplace(i, j);
  }
  return {edges.begin(), edges.end()};
}

}  // namespace

std::string_view ToString(Topology topology) {
  switch (topology) {
    case Topology::kRandom:
      return "random";
    case Topology::kCircle:
      return "circle";
    case Topology::kGrid:
      return "grid";
    case Topology::kSphere:
      return "sphere";
  }
  return "unknown";
}

Topology ParseTopology(std::string_view name) {
  if (name == "random") return Topology::kRandom;
  if (name == "circle") return Topology::kCircle;
  if (name == "grid") return Topology::kGrid;
  if (name == "sphere") return Topology::kSphere;
  throw ConfigError("topology", "unknown topology '" + std::string(name) +
                                    "' (expected random, circle, grid or "
                                    "sphere)");
}

void ScenarioSpec::Validate() const {
  if (n < 2) throw ConfigError("n", "must be at least 2");
  switch (topology) {
    case Topology::kRandom:
      if (!(comm_radius > 0.0)) {
        throw ConfigError("comm_radius", "must be positive");
      }
      if (!(min_separation >= 0.0) || !(min_separation < comm_radius)) {
        throw ConfigError("min_separation",
                          "must be in [0, comm_radius)");
      }
      if (max_attempts < 1) {
        throw ConfigError("max_attempts", "must be at least 1");
      }
      break;
    case Topology::kCircle:
      if (!(radius > 0.0)) throw ConfigError("radius", "must be positive");
      if (circle_hops < 1) {
        throw ConfigError("circle_hops", "must be at least 1");
      }
      break;
    case Topology::kGrid: {
      long product = 1;
      for (int d : grid_dims) {
        if (d < 1) throw ConfigError("grid_dims", "must be positive");
        product *= d;
      }
      if (product != n) {
        throw ConfigError("grid_dims", "product " + std::to_string(product) +
                                           " does not match n = " +
                                           std::to_string(n));
      }
      if (!(grid_spacing > 0.0)) {
        throw ConfigError("grid_spacing", "must be positive");
      }
      break;
    }
    case Topology::kSphere: {
      if (!(radius > 0.0)) throw ConfigError("radius", "must be positive");
      const long ring = static_cast<long>(RingEdges(n).size());
      const long complete = static_cast<long>(n) * (n - 1) / 2;
      if (target_measurements % 2 != 0 || target_measurements < 2 * ring ||
          target_measurements > 2 * complete) {
        throw ConfigError(
            "target_measurements",
            "must be even and in [" + std::to_string(2 * ring) + ", " +
                std::to_string(2 * complete) + "] for n = " +
                std::to_string(n));
      }
      break;
    }
  }
}

void NoiseModel::Validate() const {
  if (!(tau >= 0.0)) throw ConfigError("tau", "must be non-negative");
  if (!(kappa >= 0.0)) throw ConfigError("kappa", "must be non-negative");
}

GroundTruth GenerateGroundTruth(const ScenarioSpec& spec, std::uint64_t seed) {
  spec.Validate();
  Rng rng(seed);
  std::vector<Vector3> points;
  std::vector<Edge> edges;
  switch (spec.topology) {
    case Topology::kRandom:
      points = RandomPositions(spec, rng);
      edges = EdgesWithinRadius(points, spec.comm_radius);
      break;
    case Topology::kCircle:
      points = CirclePositions(spec);
      edges = CircleEdges(spec);
      break;
    case Topology::kGrid:
      points = GridPositions(spec);
      edges = GridEdges(spec);
      break;
    case Topology::kSphere:
      points = SpherePositions(spec);
      edges = SphereEdges(spec, points);
      break;
  }
  GroundTruth truth;
  truth.edges = std::move(edges);
  truth.poses.reserve(points.size());
  for (const Vector3& p : points) {
    truth.poses.push_back(Pose{p, so3::RandomRotation(rng)});
  }
  return truth;
}

PoseGraph CorruptMeasurements(std::span<const Pose> poses,
                              std::span<const Edge> edges,
                              const NoiseModel& noise) {
  noise.Validate();
  Rng rng(noise.seed);
  const auto measure = [&](VertexId i, VertexId j) {
    RelativeMeasurement m;
    m.src = i;
    m.dst = j;
    m.t_rel = poses[i].r.transpose() * (poses[j].t - poses[i].t) +
              rng.Gaussian3(noise.tau);
    m.r_rel = poses[i].r.transpose() * poses[j].r *
              so3::Exp(rng.Gaussian3(noise.kappa));
    return m;
  };
  std::vector<RelativeMeasurement> measurements;
  measurements.reserve(2 * edges.size());
  for (const auto& [i, j] : edges) {
    measurements.push_back(measure(i, j));
    measurements.push_back(measure(j, i));
  }
  return PoseGraph::Build(static_cast<int>(poses.size()),
                          std::move(measurements));
}

std::vector<Pose> GpsInit(std::span<const Pose> poses, double tau,
                          double kappa, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Pose> init;
  init.reserve(poses.size());
  for (const Pose& p : poses) {
    Pose noisy;
    noisy.t = p.t + rng.Gaussian3(tau);
    noisy.r = p.r * so3::Exp(rng.Gaussian3(kappa));
    init.push_back(noisy);
  }
  return init;
}

std::vector<Pose> SpanningTreeInit(const PoseGraph& graph, VertexId root) {
  const SpanningTree tree = BuildSpanningTree(graph, root);
  std::vector<Pose> init(graph.num_vertices());
  for (VertexId v : tree.order) {
    if (v == tree.root) continue;
    const Pose& parent = init[tree.parent[v]];
    const RelativeMeasurement& m = graph.measurement(tree.parent[v], v);
    init[v].t = parent.t + parent.r * m.t_rel;
    init[v].r = so3::Reorthonormalize(parent.r * m.r_rel);
  }
  return init;
}

std::vector<Pose> IdentityInit(int n) {
  return std::vector<Pose>(static_cast<std::size_t>(std::max(n, 0)));
}

}  // namespace cpgo
