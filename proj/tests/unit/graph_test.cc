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

#include <vector>

#include "Eigen/Eigenvalues"
#include "cpgo/errors.h"
#include "cpgo/random.h"
#include "gtest/gtest.h"
#include "support/fixtures.h"
#include "support/oracles.h"

namespace cpgo {
namespace {

using testing::EdgeList;

PoseGraph Topology(int n, const EdgeList& edges) {
  std::vector<RelativeMeasurement> ms;
  for (const auto& [i, j] : edges) {
    ms.push_back({i, j});
    ms.push_back({j, i});
  }
  return PoseGraph::Build(n, std::move(ms));
}

TEST(PoseTest, InverseAndComposition) {
  Rng rng(1);
  const Pose a = testing::RandomPose(rng);
  const Pose b = testing::RandomPose(rng);
  const Pose id = a * a.Inverse();
  EXPECT_LT(id.t.norm(), 1e-12);
  EXPECT_LT((id.r - Matrix3::Identity()).norm(), 1e-12);
  const Pose ab = a * b;
  EXPECT_LT((ab.t - (a.r * b.t + a.t)).norm(), 1e-12);
  EXPECT_LT((ab.r - a.r * b.r).norm(), 1e-12);
}

TEST(BuildTest, TwoNodes) {
  const PoseGraph g = PoseGraph::Build(2, {{0, 1}, {1, 0}});
  ASSERT_EQ(g.neighbors(0).size(), 1u);
  EXPECT_EQ(g.neighbors(0)[0], 1);
  ASSERT_EQ(g.neighbors(1).size(), 1u);
  EXPECT_EQ(g.neighbors(1)[0], 0);
  EXPECT_EQ(g.num_measurements(), 2u);
  EXPECT_EQ(g.num_edges(), 1u);
}

TEST(BuildTest, PathAccepted) {
  const PoseGraph g = Topology(3, testing::PathEdges(3));
  EXPECT_EQ(g.degree(1), 2);
  EXPECT_EQ(g.num_vertices(), 3);
}

TEST(BuildTest, DisconnectedRejected) {
  EXPECT_THROW(PoseGraph::Build(3, {{0, 1}, {1, 0}}), DisconnectedGraph);
}

TEST(BuildTest, DuplicateRejected) {
  EXPECT_THROW(PoseGraph::Build(2, {{0, 1}, {1, 0}, {0, 1}}), DuplicateEdge);
}

TEST(BuildTest, DanglingAndSelfLoopRejected) {
  EXPECT_THROW(PoseGraph::Build(2, {{0, 2}, {2, 0}}), DanglingVertexId);
  EXPECT_THROW(PoseGraph::Build(2, {{-1, 0}, {0, -1}}), DanglingVertexId);
  EXPECT_THROW(PoseGraph::Build(2, {{0, 0}, {0, 1}, {1, 0}}), Error);
}

TEST(BuildTest, UnpairedNeedsSymmetrize) {
  EXPECT_THROW(PoseGraph::Build(2, {{0, 1}}), UnpairedMeasurement);
  const PoseGraph g =
      PoseGraph::Build(2, {{0, 1}}, BuildOptions{.symmetrize = true});
  EXPECT_EQ(g.num_measurements(), 2u);
}

TEST(BuildTest, NeighborsSortedAndIndexed) {
  Rng rng(2);
  const EdgeList edges = testing::RandomConnectedEdges(12, 20, rng);
  const std::vector<Pose> poses = testing::RandomPoses(12, rng);
  const PoseGraph g = testing::ExactGraph(poses, edges);
  for (VertexId i = 0; i < g.num_vertices(); ++i) {
    const auto nbrs = g.neighbors(i);
    EXPECT_TRUE(std::is_sorted(nbrs.begin(), nbrs.end()));
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      const RelativeMeasurement& m = g.outgoing(i)[k];
      EXPECT_EQ(m.src, i);
      EXPECT_EQ(m.dst, nbrs[k]);
      const std::size_t index = g.Find(i, nbrs[k]);
      EXPECT_EQ(index, g.outgoing_offset(i) + k);
      const RelativeMeasurement& back = g.measurements()[g.companion(index)];
      EXPECT_EQ(back.src, nbrs[k]);
      EXPECT_EQ(back.dst, i);
      EXPECT_EQ(&g.measurement(i, nbrs[k]), &g.measurements()[index]);
    }
  }
  EXPECT_EQ(g.Find(0, 0), PoseGraph::npos);
}

TEST(SymmetrizeTest, AddsInverse) {
  Rng rng(3);
  const RelativeMeasurement m{0, 1, Vector3(1, 2, 3),
                              so3::RandomRotation(rng)};
  const std::vector<RelativeMeasurement> out = Symmetrize({m});
  ASSERT_EQ(out.size(), 2u);
  const RelativeMeasurement& inv = out[0].src == 1 ? out[0] : out[1];
  EXPECT_EQ(inv.src, 1);
  EXPECT_EQ(inv.dst, 0);
  EXPECT_LT((inv.t_rel + m.r_rel.transpose() * m.t_rel).norm(), 1e-15);
  EXPECT_LT((inv.r_rel - m.r_rel.transpose()).norm(), 1e-15);
}

TEST(SymmetrizeTest, PairedInputUnchanged) {
  Rng rng(4);
  const std::vector<Pose> poses = testing::RandomPoses(5, rng);
  const std::vector<RelativeMeasurement> paired =
      testing::ExactMeasurements(poses, testing::PathEdges(5));
  const std::vector<RelativeMeasurement> out = Symmetrize(paired);
  ASSERT_EQ(out.size(), paired.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    EXPECT_EQ(out[k].src, paired[k].src);
    EXPECT_EQ(out[k].t_rel, paired[k].t_rel);
    EXPECT_EQ(out[k].r_rel, paired[k].r_rel);
  }
  EXPECT_EQ(Symmetrize(out).size(), out.size());
}

TEST(LaplacianTest, Path) {
  Eigen::MatrixXd expected(3, 3);
  expected << 1, -1, 0, -1, 2, -1, 0, -1, 1;
  EXPECT_EQ(Laplacian(Topology(3, testing::PathEdges(3))), expected);
}

TEST(LaplacianTest, Complete) {
  const Eigen::MatrixXd l = Laplacian(Topology(3, testing::CompleteEdges(3)));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) EXPECT_EQ(l(i, j), i == j ? 2.0 : -1.0);
  }
}

TEST(LaplacianTest, MatchesOracleAndHasConstantNullSpace) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.UniformIndex(15));
    const EdgeList edges = testing::RandomConnectedEdges(n, n, rng);
    const Eigen::MatrixXd l = Laplacian(Topology(n, edges));
    EXPECT_EQ(l, testing::OracleLaplacian(n, edges));
    EXPECT_LT((l * Eigen::VectorXd::Ones(n)).norm(), 1e-12);
    EXPECT_EQ(l, l.transpose());
  }
}

TEST(AlgebraicConnectivityTest, PathThree) {
  EXPECT_NEAR(AlgebraicConnectivity(Topology(3, testing::PathEdges(3))), 1.0,
              1e-12);
}

TEST(AlgebraicConnectivityTest, PathsMatchClosedForm) {
  for (int n = 2; n <= 12; ++n) {
    EXPECT_NEAR(AlgebraicConnectivity(Topology(n, testing::PathEdges(n))),
                testing::PathLaplacianEigenvalue(n, 1), 1e-10);
  }
  // Complete graph: n.
  EXPECT_NEAR(AlgebraicConnectivity(Topology(6, testing::CompleteEdges(6))),
              6.0, 1e-10);
}

TEST(MaxDegreeTest, Examples) {
  EXPECT_EQ(MaxDegree(Topology(3, testing::PathEdges(3))), 2);
  EXPECT_EQ(MaxDegree(Topology(4, testing::CompleteEdges(4))), 3);
}

TEST(SpanningTreeTest, Path) {
  const SpanningTree tree =
      BuildSpanningTree(Topology(3, testing::PathEdges(3)), 0);
  EXPECT_EQ(tree.root, 0);
  EXPECT_EQ(tree.parent, (std::vector<VertexId>{-1, 0, 1}));
  EXPECT_EQ(tree.order, (std::vector<VertexId>{0, 1, 2}));
}

TEST(SpanningTreeTest, StarFromCenter) {
  const SpanningTree tree =
      BuildSpanningTree(Topology(6, testing::StarEdges(6)), 0);
  for (int i = 1; i < 6; ++i) EXPECT_EQ(tree.parent[i], 0);
}

TEST(SpanningTreeTest, ReachesEveryVertex) {
  Rng rng(6);
  const EdgeList edges = testing::RandomConnectedEdges(30, 40, rng);
  const PoseGraph g = Topology(30, edges);
  const SpanningTree tree = BuildSpanningTree(g, 7);
  EXPECT_EQ(tree.order.size(), 30u);
  EXPECT_EQ(tree.order.front(), 7);
  EXPECT_EQ(tree.parent[7], -1);
  for (VertexId v = 0; v < 30; ++v) {
    if (v == 7) continue;
    EXPECT_NE(g.Find(tree.parent[v], v), PoseGraph::npos);
  }
  EXPECT_THROW(BuildSpanningTree(g, 30), DanglingVertexId);
}

TEST(IncidentEdgesTest, CarriesBothDirections) {
  Rng rng(7);
  const std::vector<Pose> poses = testing::RandomPoses(4, rng);
  const PoseGraph g = testing::ExactGraph(poses, testing::CompleteEdges(4));
  const std::vector<IncidentEdge> edges = IncidentEdges(g, 2);
  ASSERT_EQ(edges.size(), 3u);
  for (const IncidentEdge& e : edges) {
    const RelativeMeasurement& out = g.measurement(2, e.neighbor);
    const RelativeMeasurement& in = g.measurement(e.neighbor, 2);
    EXPECT_EQ(e.t_out, out.t_rel);
    EXPECT_EQ(e.r_out, out.r_rel);
    EXPECT_EQ(e.t_in, in.t_rel);
    EXPECT_EQ(e.r_in, in.r_rel);
  }
}

}  // namespace
}  // namespace cpgo
