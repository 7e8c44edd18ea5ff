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

#ifndef CPGO_G2O_H_
#define CPGO_G2O_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "cpgo/graph.h"

namespace cpgo {

// VERTEX_SE3:QUAT id x y z qx qy qz qw
struct G2oVertex {
  std::int64_t id = 0;
  Vector3 t = Vector3::Zero();
  QuaternionXyzw q = QuaternionXyzw(0, 0, 0, 1);  // unit after parsing
};

// EDGE_SE3:QUAT i j x y z qx qy qz qw [21 upper-triangular information
// entries]. Pose of j in the frame of i.
struct G2oEdge {
  std::int64_t src = 0;
  std::int64_t dst = 0;
  Vector3 t = Vector3::Zero();
  QuaternionXyzw q = QuaternionXyzw(0, 0, 0, 1);
  std::optional<std::array<double, 21>> info_upper;
};

struct G2oDocument {
  std::vector<G2oVertex> vertices;
  std::vector<G2oEdge> edges;
  // Lines with a record kind other than the two above.
  std::size_t skipped_records = 0;
};

// Throws ParseError on malformed fields. Unknown record kinds are skipped
// and counted; blank lines and '#' comments are ignored.
G2oDocument ParseG2o(std::istream& in);
G2oDocument ReadG2oFile(const std::filesystem::path& path);

// Vertices first, then edges, in document order. Absent information
// matrices are written as identity.
void WriteG2o(const G2oDocument& doc, std::ostream& out);
void WriteG2oFile(const G2oDocument& doc, const std::filesystem::path& path);

// A document mapped onto dense vertex indices (ascending external id).
struct G2oData {
  std::vector<std::int64_t> external_ids;
  std::vector<Pose> poses;  // as stored in the file
  std::vector<RelativeMeasurement> measurements;  // document order
};

// Throws InconsistentVertexCount for duplicate vertex ids or edges that
// reference undeclared vertices.
G2oData Remap(const G2oDocument& doc);

struct LoadedGraph {
  std::vector<std::int64_t> external_ids;
  std::vector<Pose> poses;
  PoseGraph graph;
};

// Remap() followed by PoseGraph::Build. Edges whose reverse is missing need
// options.symmetrize.
LoadedGraph ToPoseGraph(const G2oDocument& doc,
                        const BuildOptions& options = {});

// Every directed measurement becomes one edge. `external_ids` defaults to
// the dense indices.
G2oDocument FromPoseGraph(std::span<const Pose> poses, const PoseGraph& graph,
                          std::span<const std::int64_t> external_ids = {});
G2oDocument FromMeasurements(
    std::span<const Pose> poses,
    std::span<const RelativeMeasurement> measurements,
    std::span<const std::int64_t> external_ids = {});

}  // namespace cpgo

#endif  // CPGO_G2O_H_
