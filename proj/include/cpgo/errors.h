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

#ifndef CPGO_ERRORS_H_
#define CPGO_ERRORS_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace cpgo {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonSkewInput : public Error {
 public:
  using Error::Error;
};

// A rotation (measurement, residual or estimate) whose angle reached the
// boundary of the logarithm's chart. If the rotation belongs to a graph edge
// the directed edge is attached.
class AngleAtPi : public Error {
 public:
  explicit AngleAtPi(double angle,
                     std::optional<std::pair<int, int>> edge = std::nullopt);

  double angle() const { return angle_; }
  const std::optional<std::pair<int, int>>& edge() const { return edge_; }

 private:
  double angle_;
  std::optional<std::pair<int, int>> edge_;
};

class DisconnectedGraph : public Error {
 public:
  using Error::Error;
};

class DuplicateEdge : public Error {
 public:
  using Error::Error;
};

class DanglingVertexId : public Error {
 public:
  using Error::Error;
};

// A directed measurement (i,j) without its (j,i) companion.
class UnpairedMeasurement : public Error {
 public:
  using Error::Error;
};

class MissingNeighborData : public Error {
 public:
  using Error::Error;
};

class StepSizeUnstable : public Error {
 public:
  using Error::Error;
};

class GenerationFailed : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::string token, const std::string& what);

  std::size_t line() const { return line_; }
  const std::string& token() const { return token_; }

 private:
  std::size_t line_;
  std::string token_;
};

class InconsistentVertexCount : public Error {
 public:
  using Error::Error;
};

// Configuration value rejected during validation; `field` is a dotted path
// such as "scenario.grid_dims[1]".
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& reason);

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// The distributed harness stopped making progress within its wall-clock
// bound. Indicates a harness bug, never an algorithm state.
class DeadlockTimeout : public Error {
 public:
  using Error::Error;
};

}  // namespace cpgo

#endif  // CPGO_ERRORS_H_
