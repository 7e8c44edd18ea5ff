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

#include "cpgo/csv.h"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "cpgo/errors.h"
#include "number_format.h"

namespace cpgo {
namespace {

constexpr std::string_view kTrajectoryHeader = "id,tx,ty,tz,qx,qy,qz,qw";
constexpr std::string_view kObjectiveHeader =
    "iter,geodesic,chordal,max_control_norm";

std::ofstream OpenForWrite(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

}  // namespace

void WriteTrajectoryCsv(std::span<const Pose> poses, std::ostream& out,
                        std::span<const std::int64_t> ids) {
  out << kTrajectoryHeader << '\n';
  for (std::size_t i = 0; i < poses.size(); ++i) {
    out << (ids.empty() ? static_cast<std::int64_t>(i) : ids[i]);
    const QuaternionXyzw q = so3::MatrixToQuaternion(poses[i].r);
    for (double v : {poses[i].t.x(), poses[i].t.y(), poses[i].t.z(), q.x(),
                     q.y(), q.z(), q.w()}) {
      out << ',' << internal::FormatDouble(v);
    }
    out << '\n';
  }
}

std::vector<TrajectoryRow> ReadTrajectoryCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTrajectoryHeader) {
    throw ParseError(1, line, "expected trajectory header");
  }
  std::vector<TrajectoryRow> rows;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream stream(line);
    for (std::string field; std::getline(stream, field, ',');) {
      fields.push_back(field);
    }
    if (fields.size() != 8) {
      throw ParseError(line_number, line, "expected 8 fields");
    }
    const auto id = internal::ParseNumber<std::int64_t>(fields[0]);
    if (!id) throw ParseError(line_number, fields[0], "malformed id");
    double values[7];
    for (int k = 0; k < 7; ++k) {
      const auto v = internal::ParseNumber<double>(fields[k + 1]);
      if (!v) throw ParseError(line_number, fields[k + 1], "malformed number");
      values[k] = *v;
    }
    TrajectoryRow row;
    row.id = *id;
    row.pose.t = Vector3(values[0], values[1], values[2]);
    row.pose.r = so3::QuaternionToMatrix(
        QuaternionXyzw(values[3], values[4], values[5], values[6]));
    rows.push_back(row);
  }
  return rows;
}

void WriteObjectiveCsv(std::span<const HistoryEntry> history,
                       std::ostream& out) {
  out << kObjectiveHeader << '\n';
  for (const HistoryEntry& h : history) {
    out << h.iter << ',' << internal::FormatDouble(h.objective.geodesic) << ','
        << internal::FormatDouble(h.objective.chordal) << ','
        << internal::FormatDouble(h.max_control_norm) << '\n';
  }
}

void WriteTrajectoryCsvFile(std::span<const Pose> poses,
                            const std::filesystem::path& path,
                            std::span<const std::int64_t> ids) {
  std::ofstream out = OpenForWrite(path);
  WriteTrajectoryCsv(poses, out, ids);
}

void WriteObjectiveCsvFile(std::span<const HistoryEntry> history,
                           const std::filesystem::path& path) {
  std::ofstream out = OpenForWrite(path);
  WriteObjectiveCsv(history, out);
}

}  // namespace cpgo
