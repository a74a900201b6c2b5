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

#ifndef SEMPROBE_VALUE_H_
#define SEMPROBE_VALUE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "nlohmann/json.hpp"
#include "semprobe/schema.h"

namespace semprobe {

// A leaf value: Int, Bool, or Enum label. Always construct the label
// alternative from std::string, never from a bare string literal.
using Scalar = std::variant<int64_t, bool, std::string>;

std::string ScalarToString(const Scalar& s);
nlohmann::ordered_json ScalarToJson(const Scalar& s);
absl::StatusOr<Scalar> ScalarFromJson(const nlohmann::json& j);

// Schema-shaped message content. Records hold only the fields that are
// present; a choice holds its selected alternative and one child.
class Value {
 public:
  enum class Kind { kInt, kEnum, kBool, kChoice, kList, kRecord };

  Value() : kind_(Kind::kRecord) {}

  static Value Int(int64_t v);
  static Value Enum(std::string label);
  static Value Bool(bool b);
  static Value Choice(std::string alternative, Value inner);
  static Value List(std::vector<Value> items);
  static Value Record() { return Value(); }
  static Value FromScalar(const Scalar& s);

  Kind kind() const { return kind_; }
  bool is_scalar() const {
    return kind_ == Kind::kInt || kind_ == Kind::kEnum || kind_ == Kind::kBool;
  }

  int64_t int_value() const { return int_; }
  bool bool_value() const { return bool_; }
  // Enum label, or the selected alternative of a choice.
  const std::string& label() const { return text_; }
  std::optional<Scalar> AsScalar() const;

  const Value& choice_value() const { return children_.front(); }
  Value& mutable_choice_value() { return children_.front(); }

  const std::vector<Value>& items() const { return children_; }
  std::vector<Value>& mutable_items() { return children_; }

  // Record access.
  const std::vector<std::string>& member_names() const { return names_; }
  const Value* Find(std::string_view name) const;
  Value* FindMutable(std::string_view name);
  // Inserts or replaces `name`, keeping members in `declared` order.
  void SetMember(const std::string& name, Value v,
                 const std::vector<FieldDef>& declared);
  // Appends without ordering; used by decoders that visit fields in order.
  void AppendMember(std::string name, Value v);
  bool EraseMember(std::string_view name);

  // Records compare as maps; member order does not matter.
  friend bool operator==(const Value& a, const Value& b);

 private:
  Kind kind_;
  int64_t int_ = 0;
  bool bool_ = false;
  std::string text_;
  std::vector<std::string> names_;
  std::vector<Value> children_;
};

// JSON form of a message: records are objects, lists arrays, choices
// single-key objects `{alternative: value}`, enums their label strings.
absl::StatusOr<Value> ValueFromJson(const Schema& schema, const FieldKind& kind,
                                    const nlohmann::json& j,
                                    const std::string& where);
absl::StatusOr<Value> MessageFromJson(const Schema& schema,
                                      const nlohmann::json& j);
nlohmann::ordered_json ValueToJson(const Schema& schema, const FieldKind& kind,
                                   const Value& v);
nlohmann::ordered_json MessageToJson(const Schema& schema, const Value& root);

// Kind used for the root record of a message.
FieldKind RootKind(const Schema& schema);

// Checks that `root` conforms structurally: mandatory fields present, choice
// alternatives and enum labels declared, kinds match. Int values are not
// range-checked here.
absl::Status CheckStructure(const Schema& schema, const Value& root);

}  // namespace semprobe

#endif  // SEMPROBE_VALUE_H_
