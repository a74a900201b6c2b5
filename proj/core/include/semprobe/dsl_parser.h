// Copyright 2026 The semprobe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEMPROBE_DSL_PARSER_H_
#define SEMPROBE_DSL_PARSER_H_

#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "semprobe/dsl_ast.h"

namespace semprobe {

// Parses one rule, `SCOPE ':' CLAUSE`. Field paths stay as written; binding
// happens in Normalize. Errors name the 1-based column.
//
// IMPLIES separates preconditions from the consequent with ';'. A comma-only
// list is also accepted, in which case the last atom is the consequent.
absl::StatusOr<ConstraintRule> ParseRule(std::string_view text);

// One rule per line; blank lines and '#' comments are skipped. Errors name
// the 1-based line.
absl::StatusOr<std::vector<ConstraintRule>> ParseRuleFile(
    std::string_view text);

}  // namespace semprobe

#endif  // SEMPROBE_DSL_PARSER_H_
