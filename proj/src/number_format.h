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

#ifndef CPGO_SRC_NUMBER_FORMAT_H_
#define CPGO_SRC_NUMBER_FORMAT_H_

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>

namespace cpgo::internal {

// Shortest representation that parses back to the same double. Negative
// zero is written as "0".
inline std::string FormatDouble(double value) {
  char buffer[32];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer),
                                       value == 0.0 ? 0.0 : value);
  return ec == std::errc() ? std::string(buffer, end) : std::string("nan");
}

// Whole-token parse; nullopt on any trailing garbage.
template <typename T>
std::optional<T> ParseNumber(std::string_view token) {
  T value{};
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  const auto [end, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || end != last) return std::nullopt;
  return value;
}

}  // namespace cpgo::internal

#endif  // CPGO_SRC_NUMBER_FORMAT_H_
