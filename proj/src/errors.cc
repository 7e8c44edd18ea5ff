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

#include "cpgo/errors.h"

#include <sstream>

namespace cpgo {
namespace {

std::string DescribeAngleAtPi(double angle,
                              const std::optional<std::pair<int, int>>& edge) {
  std::ostringstream out;
  out << "rotation angle " << angle << " rad is outside the logarithm domain";
  if (edge) {
    out << " on edge (" << edge->first << "," << edge->second << ")";
  }
  return out.str();
}

}  // namespace

AngleAtPi::AngleAtPi(double angle, std::optional<std::pair<int, int>> edge)
    : Error(DescribeAngleAtPi(angle, edge)), angle_(angle), edge_(edge) {}

ParseError::ParseError(std::size_t line, std::string token,
                       const std::string& what)
    : Error("line " + std::to_string(line) + ": " + what + " (token '" +
            token + "')"),
      line_(line),
      token_(std::move(token)) {}

ConfigError::ConfigError(std::string field, const std::string& reason)
    : Error(field + ": " + reason), field_(std::move(field)) {}

}  // namespace cpgo
