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

#ifndef CPGO_TESTS_ACCEPTANCE_CRITERIA_H_
#define CPGO_TESTS_ACCEPTANCE_CRITERIA_H_

#include <functional>
#include <string>
#include <vector>

namespace cpgo::acceptance {

struct CriterionResult {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  std::function<CriterionResult()> run;
};

// All criteria in id order.
std::vector<Criterion> AllCriteria();

}  // namespace cpgo::acceptance

#endif  // CPGO_TESTS_ACCEPTANCE_CRITERIA_H_
