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

#include "semprobe/value.h"

#include <utility>

#include "absl/strings/str_cat.h"

namespace semprobe {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

absl::Status CheckKind(const Schema& schema, const FieldKind& kind,
                       const Value& v, const std::string& where);

absl::Status CheckRecord(const Schema& schema,
                         const std::vector<FieldDef>& fields, const Value& v,
                         const std::string& where) {
  if (v.kind() != Value::Kind::kRecord) {
    return absl::InvalidArgumentError(
        absl::StrCat(where, ": expected a record"));
  }
  for (const std::string& name : v.member_names()) {
    bool declared = false;
    for (const FieldDef& f : fields) declared |= f.name == name;
    if (!declared) {
      return absl::InvalidArgumentError(
          absl::StrCat(where, ": undeclared field '", name, "'"));
    }
  }
  for (const FieldDef& f : fields) {
    const Value* member = v.Find(f.name);
    std::string child = absl::StrCat(where, ".", f.name);
    if (member == nullptr) {
      if (!f.optional) {
        return absl::InvalidArgumentError(
            absl::StrCat(child, ": mandatory field missing"));
      }
      continue;
    }
    if (absl::Status s = CheckKind(schema, f.kind, *member, child); !s.ok()) {
      return s;
    }
  }
  return absl::OkStatus();
}

absl::Status CheckKind(const Schema& schema, const FieldKind& kind,
                       const Value& v, const std::string& where) {
  switch (kind.tag) {
    case FieldKind::Tag::kInt:
      if (v.kind() != Value::Kind::kInt) {
        return absl::InvalidArgumentError(
            absl::StrCat(where, ": expected Int"));
      }
      return absl::OkStatus();
    case FieldKind::Tag::kEnum:
      if (v.kind() != Value::Kind::kEnum || !kind.LabelIndex(v.label())) {
        return absl::InvalidArgumentError(
            absl::StrCat(where, ": expected one of the declared enum labels"));
      }
      return absl::OkStatus();
    case FieldKind::Tag::kBool:
      if (v.kind() != Value::Kind::kBool) {
        return absl::InvalidArgumentError(
            absl::StrCat(where, ": expected Bool"));
      }
      return absl::OkStatus();
    case FieldKind::Tag::kChoice: {
      const Alternative* alt = v.kind() == Value::Kind::kChoice
                                   ? kind.FindAlternative(v.label())
                                   : nullptr;
      if (alt == nullptr) {
        return absl::InvalidArgumentError(
            absl::StrCat(where, ": choice must select a declared alternative"));
      }
      return CheckKind(schema, alt->kind, v.choice_value(),
                       absl::StrCat(where, ".", alt->name));
    }
    case FieldKind::Tag::kSeqOf:
      if (v.kind() != Value::Kind::kList) {
        return absl::InvalidArgumentError(
            absl::StrCat(where, ": expected list"));
      }
      for (size_t i = 0; i < v.items().size(); ++i) {
        absl::Status s = CheckKind(schema, *kind.element, v.items()[i],
                                   absl::StrCat(where, "[", i, "]"));
        if (!s.ok()) return s;
      }
      return absl::OkStatus();
    case FieldKind::Tag::kNested:
      return CheckRecord(schema, schema.FieldsOf(kind), v, where);
  }
  return absl::OkStatus();
}

}  // namespace

std::string ScalarToString(const Scalar& s) {
  if (const int64_t* i = std::get_if<int64_t>(&s)) return absl::StrCat(*i);
  if (const bool* b = std::get_if<bool>(&s)) return *b ? "true" : "false";
  return std::get<std::string>(s);
}

ordered_json ScalarToJson(const Scalar& s) {
  if (const int64_t* i = std::get_if<int64_t>(&s)) return *i;
  if (const bool* b = std::get_if<bool>(&s)) return *b;
  return std::get<std::string>(s);
}

absl::StatusOr<Scalar> ScalarFromJson(const json& j) {
  if (j.is_boolean()) return Scalar(j.get<bool>());
  if (j.is_number_integer()) return Scalar(j.get<int64_t>());
  if (j.is_string()) return Scalar(j.get<std::string>());
  return absl::InvalidArgumentError(
      absl::StrCat("not a scalar value: ", j.dump()));
}

Value Value::Int(int64_t v) {
  Value out;
  out.kind_ = Kind::kInt;
  out.int_ = v;
  return out;
}

Value Value::Enum(std::string label) {
  Value out;
  out.kind_ = Kind::kEnum;
  out.text_ = std::move(label);
  return out;
}

Value Value::Bool(bool b) {
  Value out;
  out.kind_ = Kind::kBool;
  out.bool_ = b;
  return out;
}

Value Value::Choice(std::string alternative, Value inner) {
  Value out;
  out.kind_ = Kind::kChoice;
  out.text_ = std::move(alternative);
  out.children_.push_back(std::move(inner));
  return out;
}

Value Value::List(std::vector<Value> items) {
  Value out;
  out.kind_ = Kind::kList;
  out.children_ = std::move(items);
  return out;
}

Value Value::FromScalar(const Scalar& s) {
  if (const int64_t* i = std::get_if<int64_t>(&s)) return Int(*i);
  if (const bool* b = std::get_if<bool>(&s)) return Bool(*b);
  return Enum(std::get<std::string>(s));
}

std::optional<Scalar> Value::AsScalar() const {
  switch (kind_) {
    case Kind::kInt:
      return Scalar(int_);
    case Kind::kBool:
      return Scalar(bool_);
    case Kind::kEnum:
      return Scalar(text_);
    default:
      return std::nullopt;
  }
}

const Value* Value::Find(std::string_view name) const {
  for (size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return &children_[i];
  }
  return nullptr;
}

Value* Value::FindMutable(std::string_view name) {
  for (size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return &children_[i];
  }
  return nullptr;
}

void Value::SetMember(const std::string& name, Value v,
                      const std::vector<FieldDef>& declared) {
  if (Value* existing = FindMutable(name)) {
    *existing = std::move(v);
    return;
  }
  size_t rank = 0;
  for (; rank < declared.size(); ++rank) {
    if (declared[rank].name == name) break;
  }
  size_t insert_at = names_.size();
  for (size_t i = 0; i < names_.size(); ++i) {
    size_t other = 0;
    for (; other < declared.size(); ++other) {
      if (declared[other].name == names_[i]) break;
    }
    if (other > rank) {
      insert_at = i;
      break;
    }
  }
  names_.insert(names_.begin() + static_cast<std::ptrdiff_t>(insert_at), name);
  children_.insert(children_.begin() + static_cast<std::ptrdiff_t>(insert_at),
                   std::move(v));
}

void Value::AppendMember(std::string name, Value v) {
  names_.push_back(std::move(name));
  children_.push_back(std::move(v));
}

bool Value::EraseMember(std::string_view name) {
  for (size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) {
      names_.erase(names_.begin() + static_cast<std::ptrdiff_t>(i));
      children_.erase(children_.begin() + static_cast<std::ptrdiff_t>(i));
      return true;
    }
  }
  return false;
}

bool operator==(const Value& a, const Value& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case Value::Kind::kInt:
      return a.int_ == b.int_;
    case Value::Kind::kBool:
      return a.bool_ == b.bool_;
    case Value::Kind::kEnum:
      return a.text_ == b.text_;
    case Value::Kind::kChoice:
      return a.text_ == b.text_ && a.children_ == b.children_;
    case Value::Kind::kList:
      return a.children_ == b.children_;
    case Value::Kind::kRecord: {
      if (a.names_.size() != b.names_.size()) return false;
      for (size_t i = 0; i < a.names_.size(); ++i) {
        const Value* other = b.Find(a.names_[i]);
        if (other == nullptr || !(*other == a.children_[i])) return false;
      }
      return true;
    }
  }
  return false;
}

absl::StatusOr<Value> ValueFromJson(const Schema& schema, const FieldKind& kind,
                                    const json& j, const std::string& where) {
  switch (kind.tag) {
    case FieldKind::Tag::kInt:
      if (!j.is_number_integer()) {
        return absl::InvalidArgumentError(
            absl::StrCat(where, ": expected integer"));
      }
      return Value::Int(j.get<int64_t>());
    case FieldKind::Tag::kEnum:
      if (!j.is_string() || !kind.LabelIndex(j.get<std::string>())) {
        return absl::InvalidArgumentError(
            absl::StrCat(where, ": expected a declared enum label"));
      }
      return Value::Enum(j.get<std::string>());
    case FieldKind::Tag::kBool:
      if (!j.is_boolean()) {
        return absl::InvalidArgumentError(
            absl::StrCat(where, ": expected boolean"));
      }
      return Value::Bool(j.get<bool>());
    case FieldKind::Tag::kChoice: {
      if (!j.is_object() || j.size() != 1) {
        return absl::InvalidArgumentError(
            absl::StrCat(where, ": choice must be a single-key object"));
      }
      const auto& [name, body] = *j.items().begin();
      const Alternative* alt = kind.FindAlternative(name);
      if (alt == nullptr) {
        return absl::InvalidArgumentError(
            absl::StrCat(where, ": undeclared alternative '", name, "'"));
      }
      absl::StatusOr<Value> inner = ValueFromJson(
          schema, alt->kind, body, absl::StrCat(where, ".", name));
      if (!inner.ok()) return inner.status();
      return Value::Choice(name, *std::move(inner));
    }
    case FieldKind::Tag::kSeqOf: {
      if (!j.is_array()) {
        return absl::InvalidArgumentError(
            absl::StrCat(where, ": expected array"));
      }
      std::vector<Value> items;
      for (size_t i = 0; i < j.size(); ++i) {
        absl::StatusOr<Value> item = ValueFromJson(
            schema, *kind.element, j[i], absl::StrCat(where, "[", i, "]"));
        if (!item.ok()) return item.status();
        items.push_back(*std::move(item));
      }
      return Value::List(std::move(items));
    }
    case FieldKind::Tag::kNested: {
      if (!j.is_object()) {
        return absl::InvalidArgumentError(
            absl::StrCat(where, ": expected object"));
      }
      const std::vector<FieldDef>& fields = schema.FieldsOf(kind);
      for (const auto& [name, _] : j.items()) {
        bool declared = false;
        for (const FieldDef& f : fields) declared |= f.name == name;
        if (!declared) {
          return absl::InvalidArgumentError(
              absl::StrCat(where, ": undeclared field '", name, "'"));
        }
      }
      Value record = Value::Record();
      for (const FieldDef& f : fields) {
        if (!j.contains(f.name)) {
          if (!f.optional) {
            return absl::InvalidArgumentError(
                absl::StrCat(where, ".", f.name, ": mandatory field missing"));
          }
          continue;
        }
        absl::StatusOr<Value> member = ValueFromJson(
            schema, f.kind, j[f.name], absl::StrCat(where, ".", f.name));
        if (!member.ok()) return member.status();
        record.AppendMember(f.name, *std::move(member));
      }
      return record;
    }
  }
  return absl::InternalError("unreachable");
}

FieldKind RootKind(const Schema& schema) {
  return FieldKind::Nested(schema.root());
}

absl::StatusOr<Value> MessageFromJson(const Schema& schema, const json& j) {
  return ValueFromJson(schema, RootKind(schema), j, schema.root());
}

ordered_json ValueToJson(const Schema& schema, const FieldKind& kind,
                         const Value& v) {
  switch (kind.tag) {
    case FieldKind::Tag::kInt:
      return v.int_value();
    case FieldKind::Tag::kEnum:
      return v.label();
    case FieldKind::Tag::kBool:
      return v.bool_value();
    case FieldKind::Tag::kChoice: {
      ordered_json out = ordered_json::object();
      const Alternative* alt = kind.FindAlternative(v.label());
      out[v.label()] = ValueToJson(schema, alt->kind, v.choice_value());
      return out;
    }
    case FieldKind::Tag::kSeqOf: {
      ordered_json out = ordered_json::array();
      for (const Value& item : v.items()) {
        out.push_back(ValueToJson(schema, *kind.element, item));
      }
      return out;
    }
    case FieldKind::Tag::kNested: {
      ordered_json out = ordered_json::object();
      for (const FieldDef& f : schema.FieldsOf(kind)) {
        if (const Value* member = v.Find(f.name)) {
          out[f.name] = ValueToJson(schema, f.kind, *member);
        }
      }
      return out;
    }
  }
  return nullptr;
}

ordered_json MessageToJson(const Schema& schema, const Value& root) {
  return ValueToJson(schema, RootKind(schema), root);
}

absl::Status CheckStructure(const Schema& schema, const Value& root) {
  return CheckKind(schema, RootKind(schema), root, schema.root());
}

}  // namespace semprobe
