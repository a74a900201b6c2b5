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

#ifndef SEMPROBE_SCHEMA_H_
#define SEMPROBE_SCHEMA_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "nlohmann/json.hpp"
#include "semprobe/field_path.h"

namespace semprobe {

// Need codes on optional fields: M keeps the last configured value when the
// field is absent, R clears it.
enum class NeedCode { kMaintain, kRemove };

std::string_view NeedCodeName(NeedCode need);
absl::StatusOr<NeedCode> ParseNeedCode(std::string_view text);

struct FieldDef;
struct Alternative;

// The declared type of a field. `kNested` either names an IE (`ie`) or holds
// an anonymous inline SEQUENCE (`inline_fields`), mirroring inline ASN.1
// sequences such as SRS-Resource.resourceMapping.
struct FieldKind {
  enum class Tag { kInt, kEnum, kBool, kChoice, kSeqOf, kNested };

  Tag tag = Tag::kBool;
  int64_t lo = 0;  // kInt bounds, kSeqOf count bounds
  int64_t hi = 0;
  std::vector<std::string> labels;
  std::vector<Alternative> alternatives;
  std::shared_ptr<const FieldKind> element;
  std::string ie;
  std::shared_ptr<const std::vector<FieldDef>> inline_fields;

  static FieldKind Int(int64_t lo, int64_t hi);
  static FieldKind Enum(std::vector<std::string> labels);
  static FieldKind Bool();
  static FieldKind Choice(std::vector<Alternative> alternatives);
  static FieldKind SeqOf(FieldKind element, int64_t lo, int64_t hi);
  static FieldKind Nested(std::string ie);
  static FieldKind Inline(std::vector<FieldDef> fields);

  bool IsScalar() const {
    return tag == Tag::kInt || tag == Tag::kEnum || tag == Tag::kBool;
  }
  const Alternative* FindAlternative(std::string_view name) const;
  std::optional<size_t> LabelIndex(std::string_view label) const;
};

bool operator==(const FieldKind& a, const FieldKind& b);

struct Alternative {
  std::string name;
  FieldKind kind;
};

bool operator==(const Alternative& a, const Alternative& b);

struct FieldDef {
  std::string name;
  FieldKind kind;
  bool optional = false;
  std::optional<NeedCode> need;
  std::string doc;
};

bool operator==(const FieldDef& a, const FieldDef& b);

struct IEDef {
  std::string name;
  std::vector<FieldDef> fields;

  const FieldDef* FindField(std::string_view field) const;
  friend bool operator==(const IEDef&, const IEDef&) = default;
};

// Kind plus bounds or labels of a resolved path, detached from the schema.
struct DomainDescriptor {
  FieldKind::Tag tag = FieldKind::Tag::kBool;
  int64_t lo = 0;
  int64_t hi = 0;
  std::vector<std::string> labels;  // enum labels or choice alternatives
  std::string ie;                   // nested IE name; empty when inline

  static DomainDescriptor Of(const FieldKind& kind);
  std::string ToString() const;
  friend bool operator==(const DomainDescriptor&,
                         const DomainDescriptor&) = default;
};

class Schema;

// Result of walking a path through the schema.
struct ResolvedPath {
  const FieldKind* kind = nullptr;
  // Definition of the last field segment walked. Null when the final segment
  // selects a choice alternative or a SeqOf element.
  const FieldDef* field = nullptr;
  // True when the last segment is a field (not an alternative/element).
  bool ends_on_field = false;
  // Innermost named IE the path passes through and the remainder relative
  // to it, e.g. SRS-Resource / resourceMapping.startPosition.
  std::string owning_ie;
  FieldPath ie_relative;
};

// A leaf (Int/Enum/Bool) position inside an IE, not crossing into another
// named IE. Inline SeqOf components appear as `[*]`.
struct LeafPattern {
  std::string ie;
  FieldPath relative;
  const FieldKind* kind = nullptr;

  // IE-rooted pattern, e.g. SRS-Resource.resourceMapping.startPosition.
  FieldPath Qualified() const;
};

class Schema {
 public:
  static absl::StatusOr<Schema> FromJson(const nlohmann::json& json);
  nlohmann::ordered_json ToJson() const;

  const std::string& name() const { return name_; }
  const std::string& version() const { return version_; }
  const std::string& root() const { return root_; }
  const std::vector<IEDef>& ies() const { return ies_; }
  // Abbreviations keyed by field or IE name; matches are weak evidence only.
  const std::map<std::string, std::vector<std::string>>& aliases() const {
    return aliases_;
  }

  const IEDef* FindIe(std::string_view name) const;
  const IEDef& RootIe() const;
  // Fields of a kNested kind, named or inline.
  const std::vector<FieldDef>& FieldsOf(const FieldKind& nested) const;

  absl::StatusOr<ResolvedPath> Resolve(const FieldPath& path) const;
  std::vector<LeafPattern> LeafPatterns(std::string_view ie) const;
  // Every leaf pattern of every IE, in IE declaration order.
  std::vector<LeafPattern> AllLeafPatterns() const;

  friend bool operator==(const Schema& a, const Schema& b);

 private:
  absl::Status Validate() const;

  std::string name_;
  std::string version_;
  std::string root_;
  std::vector<IEDef> ies_;
  std::map<std::string, std::vector<std::string>> aliases_;
};

absl::StatusOr<Schema> LoadSchema(const std::filesystem::path& path);
absl::StatusOr<std::shared_ptr<const Schema>> LoadSharedSchema(
    const std::filesystem::path& path);

absl::StatusOr<DomainDescriptor> FieldDomain(const Schema& schema,
                                             const FieldPath& path);

// Width in bits of an Int(lo, hi) field: ceil(log2(hi - lo + 1)).
int IntBitWidth(int64_t lo, int64_t hi);
// Width of a k-way enumeration or choice index: ceil(log2(k)).
int IndexBitWidth(size_t count);
// True when v fits the wire field of Int(lo, hi), i.e. 0 <= v - lo < 2^width.
bool IsWireRepresentable(int64_t lo, int64_t hi, int64_t v);

// Renders an IE as an ASN.1-like SEQUENCE block (used in evidence packages).
std::string RenderAsn1(const Schema& schema, const IEDef& ie);

absl::StatusOr<nlohmann::json> ReadJsonFile(const std::filesystem::path& path);
absl::StatusOr<std::string> ReadTextFile(const std::filesystem::path& path);
absl::Status WriteTextFile(const std::filesystem::path& path,
                           std::string_view contents);

}  // namespace semprobe

#endif  // SEMPROBE_SCHEMA_H_
