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

#ifndef SEMPROBE_SCHEMA_RULES_H_
#define SEMPROBE_SCHEMA_RULES_H_

#include <cstdint>
#include <string>
#include <vector>

#include "semprobe/dsl_evaluate.h"
#include "semprobe/field_path.h"
#include "semprobe/message_view.h"
#include "semprobe/schema.h"

namespace semprobe {

// Declared interval of an Int leaf pattern; lo <= hi.
struct RangeConstraint {
  FieldPath path;  // IE-qualified pattern
  int64_t lo = 0;
  int64_t hi = 0;

  // "range:" + pattern; disjoint from dependency-rule ids.
  std::string id() const;
  std::string ToString() const;
  friend bool operator==(const RangeConstraint&,
                         const RangeConstraint&) = default;
};

// An optional field carrying a need code.
struct PresenceConstraint {
  FieldPath path;  // IE-qualified pattern of the optional field
  NeedCode need = NeedCode::kMaintain;

  std::string id() const;
  std::string ToString() const;
  friend bool operator==(const PresenceConstraint&,
                         const PresenceConstraint&) = default;
};

// One constraint per Int leaf pattern, in IE and declaration order.
std::vector<RangeConstraint> ExtractRanges(const Schema& schema);
// One constraint per optional field with a need code, same order.
std::vector<PresenceConstraint> ExtractPresence(const Schema& schema);

// Present leaves of the pattern, in tree order.
std::vector<const LeafEntry*> RangeInstances(const DecodedMessage& msg,
                                             const RangeConstraint& rc);

struct PresenceSlot {
  FieldPath path;  // absolute path of the optional field
  bool present = false;
};

// The optional field inside every instance of its IE, in tree order.
std::vector<PresenceSlot> PresenceInstances(const DecodedMessage& msg,
                                            const PresenceConstraint& pc);

// Violated when any instance lies outside [lo, hi]; Inapplicable when the
// pattern has no present instance.
Verdict CheckRange(const DecodedMessage& msg, const RangeConstraint& rc);

}  // namespace semprobe

#endif  // SEMPROBE_SCHEMA_RULES_H_
