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

#ifndef CPGO_CSV_H_
#define CPGO_CSV_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "cpgo/graph.h"
#include "cpgo/solver.h"

namespace cpgo {

// Header `id,tx,ty,tz,qx,qy,qz,qw`, one row per pose. `ids` defaults to the
// dense indices. Numbers use the shortest exact decimal form.
void WriteTrajectoryCsv(std::span<const Pose> poses, std::ostream& out,
                        std::span<const std::int64_t> ids = {});

struct TrajectoryRow {
  std::int64_t id = 0;
  Pose pose;
};

// Throws ParseError.
std::vector<TrajectoryRow> ReadTrajectoryCsv(std::istream& in);

// Header `iter,geodesic,chordal,max_control_norm`.
void WriteObjectiveCsv(std::span<const HistoryEntry> history,
                       std::ostream& out);

void WriteTrajectoryCsvFile(std::span<const Pose> poses,
                            const std::filesystem::path& path,
                            std::span<const std::int64_t> ids = {});
void WriteObjectiveCsvFile(std::span<const HistoryEntry> history,
                           const std::filesystem::path& path);

}  // namespace cpgo

#endif  // CPGO_CSV_H_
