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

#include "cpgo/g2o.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "cpgo/errors.h"
#include "number_format.h"
#include "spdlog/spdlog.h"

namespace cpgo {
namespace {

constexpr std::string_view kVertexTag = "VERTEX_SE3:QUAT";
constexpr std::string_view kEdgeTag = "EDGE_SE3:QUAT";

class LineReader {
 public:
  LineReader(std::size_t line, std::vector<std::string> tokens)
      : line_(line), tokens_(std::move(tokens)) {}

  std::size_t remaining() const { return tokens_.size() - next_; }

  template <typename T>
  T Next() {
    if (next_ >= tokens_.size()) {
      throw ParseError(line_, "", "unexpected end of record");
    }
    const std::string& token = tokens_[next_++];
    const std::optional<T> value = internal::ParseNumber<T>(token);
    if (!value) throw ParseError(line_, token, "malformed numeric field");
    return *value;
  }

  Vector3 NextVector3() {
    Vector3 v;
    for (int k = 0; k < 3; ++k) v[k] = Next<double>();
    return v;
  }

  QuaternionXyzw NextQuaternion() {
    QuaternionXyzw q;
    for (int k = 0; k < 4; ++k) q[k] = Next<double>();
    const double norm = q.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw ParseError(line_, tokens_[next_ - 1], "degenerate quaternion");
    }
    return q / norm;
  }

  void ExpectEnd() const {
    if (next_ != tokens_.size()) {
      throw ParseError(line_, tokens_[next_], "unexpected trailing field");
    }
  }

 private:
  std::size_t line_;
  std::vector<std::string> tokens_;
  std::size_t next_ = 1;  // tokens_[0] is the tag
};

std::vector<std::string> Tokenize(const std::string& line) {
  std::istringstream stream(line);
  std::vector<std::string> tokens;
  for (std::string token; stream >> token;) tokens.push_back(token);
  return tokens;
}

void WriteNumbers(std::ostream& out, std::span<const double> values) {
  for (double v : values) out << ' ' << internal::FormatDouble(v);
}

}  // namespace

G2oDocument ParseG2o(std::istream& in) {
  G2oDocument doc;
  std::map<std::string, std::size_t> skipped_kinds;
  std::size_t line_number = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_number;
    std::vector<std::string> tokens = Tokenize(line);
    if (tokens.empty() || tokens[0].starts_with('#')) continue;
    const std::string tag = tokens[0];
    LineReader reader(line_number, std::move(tokens));
    if (tag == kVertexTag) {
      G2oVertex v;
      v.id = reader.Next<std::int64_t>();
      v.t = reader.NextVector3();
      v.q = reader.NextQuaternion();
      reader.ExpectEnd();
      doc.vertices.push_back(v);
    } else if (tag == kEdgeTag) {
      G2oEdge e;
      e.src = reader.Next<std::int64_t>();
      e.dst = reader.Next<std::int64_t>();
      e.t = reader.NextVector3();
      e.q = reader.NextQuaternion();
      if (reader.remaining() > 0) {
        std::array<double, 21> info;
        for (double& x : info) x = reader.Next<double>();
        e.info_upper = info;
      }
      reader.ExpectEnd();
      doc.edges.push_back(e);
    } else {
      ++skipped_kinds[tag];
      ++doc.skipped_records;
    }
  }
  for (const auto& [kind, count] : skipped_kinds) {
    spdlog::warn("g2o: skipped {} record(s) of unsupported kind {}", count,
                 kind);
  }
  return doc;
}

G2oDocument ReadG2oFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, path.string(), "cannot open file");
  return ParseG2o(in);
}

void WriteG2o(const G2oDocument& doc, std::ostream& out) {
  for (const G2oVertex& v : doc.vertices) {
    out << kVertexTag << ' ' << v.id;
    WriteNumbers(out, {v.t.data(), 3});
    WriteNumbers(out, {v.q.data(), 4});
    out << '\n';
  }
  std::array<double, 21> identity_info{};
  for (int row = 0, k = 0; row < 6; ++row) {
    for (int col = row; col < 6; ++col, ++k) {
      identity_info[k] = row == col ? 1.0 : 0.0;
    }
  }
  for (const G2oEdge& e : doc.edges) {
    out << kEdgeTag << ' ' << e.src << ' ' << e.dst;
    WriteNumbers(out, {e.t.data(), 3});
    WriteNumbers(out, {e.q.data(), 4});
    WriteNumbers(out, e.info_upper ? *e.info_upper : identity_info);
    out << '\n';
  }
}

void WriteG2oFile(const G2oDocument& doc, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  WriteG2o(doc, out);
}

G2oData Remap(const G2oDocument& doc) {
  std::vector<G2oVertex> vertices = doc.vertices;
  std::sort(vertices.begin(), vertices.end(),
            [](const G2oVertex& a, const G2oVertex& b) { return a.id < b.id; });
  G2oData data;
  std::map<std::int64_t, VertexId> dense;
  for (const G2oVertex& v : vertices) {
    if (!dense.emplace(v.id, static_cast<VertexId>(data.poses.size()))
             .second) {
      throw InconsistentVertexCount("vertex " + std::to_string(v.id) +
                                    " declared twice");
    }
    data.external_ids.push_back(v.id);
    data.poses.push_back(Pose{v.t, so3::QuaternionToMatrix(v.q)});
  }
  const auto lookup = [&](std::int64_t id) {
    const auto it = dense.find(id);
    if (it == dense.end()) {
      throw InconsistentVertexCount("edge references undeclared vertex " +
                                    std::to_string(id) + " (" +
                                    std::to_string(dense.size()) +
                                    " vertices declared)");
    }
    return it->second;
  };
  data.measurements.reserve(doc.edges.size());
  for (const G2oEdge& e : doc.edges) {
    data.measurements.push_back(RelativeMeasurement{
        lookup(e.src), lookup(e.dst), e.t, so3::QuaternionToMatrix(e.q)});
  }
  return data;
}

LoadedGraph ToPoseGraph(const G2oDocument& doc, const BuildOptions& options) {
  G2oData data = Remap(doc);
  PoseGraph graph = PoseGraph::Build(static_cast<int>(data.poses.size()),
                                     std::move(data.measurements), options);
  return LoadedGraph{std::move(data.external_ids), std::move(data.poses),
                     std::move(graph)};
}

G2oDocument FromPoseGraph(std::span<const Pose> poses, const PoseGraph& graph,
                          std::span<const std::int64_t> external_ids) {
  return FromMeasurements(poses, graph.measurements(), external_ids);
}

G2oDocument FromMeasurements(std::span<const Pose> poses,
                             std::span<const RelativeMeasurement> measurements,
                             std::span<const std::int64_t> external_ids) {
  const auto external = [&](VertexId i) -> std::int64_t {
    return external_ids.empty() ? i : external_ids[i];
  };
  G2oDocument doc;
  for (std::size_t i = 0; i < poses.size(); ++i) {
    const VertexId id = static_cast<VertexId>(i);
    doc.vertices.push_back(G2oVertex{external(id), poses[i].t,
                                     so3::MatrixToQuaternion(poses[i].r)});
  }
  for (const RelativeMeasurement& m : measurements) {
    doc.edges.push_back(G2oEdge{external(m.src), external(m.dst), m.t_rel,
                                so3::MatrixToQuaternion(m.r_rel),
                                std::nullopt});
  }
  return doc;
}

}  // namespace cpgo
