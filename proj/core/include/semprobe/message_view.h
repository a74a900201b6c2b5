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

#ifndef SEMPROBE_MESSAGE_VIEW_H_
#define SEMPROBE_MESSAGE_VIEW_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "nlohmann/json.hpp"
#include "semprobe/field_path.h"
#include "semprobe/schema.h"
#include "semprobe/value.h"

namespace semprobe {

// One row of the flat table. Present scalar leaves carry their value; an
// absent optional field appears once, at its own path, with present=false.
struct LeafEntry {
  FieldPath path;  // absolute instance path
  std::optional<Scalar> value;
  bool present = true;
  DomainDescriptor domain;
  std::string ie;         // owning named IE
  FieldPath pattern;      // IE-rooted pattern, e.g.
                          // SRS-Resource.resourceMapping.startPosition
  FieldPath ie_instance;  // absolute path of the owning IE instance

  friend bool operator==(const LeafEntry&, const LeafEntry&) = default;
};

struct IeInstance {
  std::string ie;
  FieldPath path;
};

// Hierarchical tree plus flat leaf table of one decoded message. Immutable;
// edits produce a new message.
class DecodedMessage {
 public:
  static absl::StatusOr<DecodedMessage> FromTree(
      std::shared_ptr<const Schema> schema, Value tree);

  const Schema& schema() const { return *schema_; }
  const std::shared_ptr<const Schema>& shared_schema() const { return schema_; }
  std::string schema_ref() const;
  const Value& tree() const { return tree_; }
  const std::vector<LeafEntry>& flat() const { return flat_; }
  // Named-IE instances in tree order (the root first).
  const std::vector<IeInstance>& instances() const { return instances_; }

  const LeafEntry* FindLeaf(const FieldPath& path) const;
  std::vector<FieldPath> InstancesOf(std::string_view ie) const;
  // Tree node at an absolute path, or null when absent.
  const Value* Lookup(const FieldPath& path) const;

  nlohmann::ordered_json ToJson() const;

 private:
  std::shared_ptr<const Schema> schema_;
  Value tree_;
  std::vector<LeafEntry> flat_;
  std::vector<IeInstance> instances_;
};

absl::StatusOr<DecodedMessage> View(std::shared_ptr<const Schema> schema,
                                    std::span<const uint8_t> bytes);

struct Edit {
  enum class Op { kSetValue, kOmit, kRawOverride };

  Op op = Op::kSetValue;
  FieldPath path;
  std::optional<Scalar> value;
  std::string rationale;  // id of the targeted constraint

  static Edit SetValue(FieldPath path, Scalar value,
                       std::string rationale = "");
  static Edit Omit(FieldPath path, std::string rationale = "");
  static Edit RawOverride(FieldPath path, int64_t value,
                          std::string rationale = "");

  std::string ToString() const;
  nlohmann::ordered_json ToJson() const;
  static absl::StatusOr<Edit> FromJson(const nlohmann::json& j);

  friend bool operator==(const Edit&, const Edit&) = default;
};

std::string_view EditOpName(Edit::Op op);

// Applies edits touching pairwise-distinct paths. SetValue requires a
// wire-representable value; RawOverride is only accepted for values the wire
// cannot carry; Omit only on a present optional field.
absl::StatusOr<DecodedMessage> ApplyEdits(const DecodedMessage& message,
                                          std::span<const Edit> edits);

// Unchecked re-encoding, so over-range but representable values survive.
absl::StatusOr<std::vector<uint8_t>> Reencode(const DecodedMessage& message);

}  // namespace semprobe

#endif  // SEMPROBE_MESSAGE_VIEW_H_
