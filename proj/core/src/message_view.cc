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

#include "semprobe/message_view.h"

#include <set>
#include <utility>

#include "absl/strings/str_cat.h"
#include "semprobe/wire_codec.h"

namespace semprobe {
namespace {

using ordered_json = nlohmann::ordered_json;

struct FlattenState {
  const Schema& schema;
  std::vector<LeafEntry>& flat;
  std::vector<IeInstance>& instances;
};

FieldPath Qualify(const std::string& ie, const FieldPath& rel) {
  std::vector<PathSegment> segments;
  segments.push_back(PathSegment{ie, std::nullopt, false});
  for (const PathSegment& s : rel.segments()) segments.push_back(s);
  return FieldPath(std::move(segments));
}

void Flatten(FlattenState& st, const FieldKind& kind, const Value& v,
             const FieldPath& abs, std::string ie, FieldPath rel,
             FieldPath ie_instance) {
  switch (kind.tag) {
    case FieldKind::Tag::kInt:
    case FieldKind::Tag::kEnum:
    case FieldKind::Tag::kBool:
      st.flat.push_back(LeafEntry{abs, v.AsScalar(), true,
                                  DomainDescriptor::Of(kind), ie,
                                  Qualify(ie, rel), ie_instance});
      return;
    case FieldKind::Tag::kChoice: {
      const Alternative* alt = kind.FindAlternative(v.label());
      Flatten(st, alt->kind, v.choice_value(), abs.Child(alt->name), ie,
              rel.Child(alt->name), ie_instance);
      return;
    }
    case FieldKind::Tag::kSeqOf:
      for (size_t i = 0; i < v.items().size(); ++i) {
        Flatten(st, *kind.element, v.items()[i], abs.Element(i), ie,
                rel.Wildcard(), ie_instance);
      }
      return;
    case FieldKind::Tag::kNested: {
      if (!kind.inline_fields) {
        ie = kind.ie;
        rel = FieldPath();
        ie_instance = abs;
        st.instances.push_back(IeInstance{ie, abs});
      }
      for (const FieldDef& f : st.schema.FieldsOf(kind)) {
        FieldPath child_abs = abs.Child(f.name);
        FieldPath child_rel = rel.Child(f.name);
        const Value* member = v.Find(f.name);
        if (member == nullptr) {
          st.flat.push_back(LeafEntry{child_abs, std::nullopt, false,
                                      DomainDescriptor::Of(f.kind), ie,
                                      Qualify(ie, child_rel), ie_instance});
          continue;
        }
        Flatten(st, f.kind, *member, child_abs, ie, child_rel, ie_instance);
      }
      return;
    }
  }
}

const Value* Step(const Value* node, const PathSegment& seg) {
  if (node == nullptr) return nullptr;
  const Value* next = nullptr;
  if (node->kind() == Value::Kind::kRecord) {
    next = node->Find(seg.name);
  } else if (node->kind() == Value::Kind::kChoice) {
    if (node->label() == seg.name) next = &node->choice_value();
  }
  if (next == nullptr) return nullptr;
  if (seg.index.has_value()) {
    if (next->kind() != Value::Kind::kList ||
        *seg.index >= next->items().size()) {
      return nullptr;
    }
    next = &next->items()[*seg.index];
  } else if (seg.wildcard) {
    return nullptr;
  }
  return next;
}

// Mutable node holding the last segment's value: the parent record or choice
// plus the segment. Returns null if an intermediate node is absent.
Value* MutableParent(Value& root, const FieldPath& path) {
  Value* node = &root;
  for (size_t i = 1; i + 1 < path.size(); ++i) {
    const Value* next = Step(node, path.segments()[i]);
    if (next == nullptr) return nullptr;
    node = const_cast<Value*>(next);
  }
  return node;
}

Value* MutableChild(Value* parent, const PathSegment& seg) {
  return const_cast<Value*>(Step(parent, seg));
}

absl::Status CheckScalarKind(const FieldKind& kind, const Scalar& value,
                             const FieldPath& path) {
  switch (kind.tag) {
    case FieldKind::Tag::kInt:
      if (std::holds_alternative<int64_t>(value)) return absl::OkStatus();
      break;
    case FieldKind::Tag::kBool:
      if (std::holds_alternative<bool>(value)) return absl::OkStatus();
      break;
    case FieldKind::Tag::kEnum:
      if (const std::string* label = std::get_if<std::string>(&value)) {
        if (kind.LabelIndex(*label)) return absl::OkStatus();
        return absl::InvalidArgumentError(absl::StrCat(
            path.ToString(), ": '", *label, "' is not a declared label"));
      }
      break;
    default:
      return absl::InvalidArgumentError(
          absl::StrCat(path.ToString(), ": not a scalar field"));
  }
  return absl::InvalidArgumentError(absl::StrCat(path.ToString(), ": value ",
                                                 ScalarToString(value),
                                                 " has the wrong type"));
}

absl::Status ApplyOne(const Schema& schema, Value& root, const Edit& edit) {
  const FieldPath& path = edit.path;
  absl::StatusOr<ResolvedPath> resolved = schema.Resolve(path);
  if (!resolved.ok()) return resolved.status();
  if (path.size() < 2 || path.segments().front().name != schema.root()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "edit path '", path.ToString(), "' must be rooted at ", schema.root()));
  }
  Value* parent = MutableParent(root, path);
  if (parent == nullptr) {
    return absl::NotFoundError(
        absl::StrCat(path.ToString(), ": enclosing structure is absent"));
  }
  const PathSegment& last = path.back();
  Value* target = MutableChild(parent, last);

  switch (edit.op) {
    case Edit::Op::kOmit: {
      if (!resolved->ends_on_field || !resolved->field->optional) {
        return absl::InvalidArgumentError(
            absl::StrCat(path.ToString(), ": Omit needs an optional field"));
      }
      if (target == nullptr) {
        return absl::NotFoundError(
            absl::StrCat(path.ToString(), ": field already absent"));
      }
      parent->EraseMember(last.name);
      return absl::OkStatus();
    }
    case Edit::Op::kSetValue:
    case Edit::Op::kRawOverride: {
      if (!edit.value.has_value()) {
        return absl::InvalidArgumentError(
            absl::StrCat(path.ToString(), ": edit carries no value"));
      }
      const FieldKind& kind = *resolved->kind;
      if (absl::Status s = CheckScalarKind(kind, *edit.value, path); !s.ok()) {
        return s;
      }
      if (kind.tag == FieldKind::Tag::kInt) {
        const int64_t v = std::get<int64_t>(*edit.value);
        const bool representable = IsWireRepresentable(kind.lo, kind.hi, v);
        if (edit.op == Edit::Op::kSetValue && !representable) {
          return absl::OutOfRangeError(
              absl::StrCat(path.ToString(), ": value ", v,
                           " is not wire-representable; use RawOverride"));
        }
        if (edit.op == Edit::Op::kRawOverride && representable) {
          return absl::InvalidArgumentError(
              absl::StrCat(path.ToString(),
                           ": RawOverride is reserved for values the wire "
                           "cannot carry; use SetValue"));
        }
      } else if (edit.op == Edit::Op::kRawOverride) {
        return absl::InvalidArgumentError(
            absl::StrCat(path.ToString(), ": RawOverride needs an Int field"));
      }
      Value replacement = Value::FromScalar(*edit.value);
      if (target != nullptr) {
        *target = std::move(replacement);
        return absl::OkStatus();
      }
      if (resolved->ends_on_field && resolved->field->optional &&
          parent->kind() == Value::Kind::kRecord) {
        absl::StatusOr<ResolvedPath> parent_kind =
            schema.Resolve(path.Parent());
        const std::vector<FieldDef>& declared =
            path.size() == 2 ? schema.RootIe().fields
                             : schema.FieldsOf(*parent_kind->kind);
        parent->SetMember(last.name, std::move(replacement), declared);
        return absl::OkStatus();
      }
      return absl::NotFoundError(
          absl::StrCat(path.ToString(), ": no such leaf in this message"));
    }
  }
  return absl::InternalError("unreachable");
}

}  // namespace

absl::StatusOr<DecodedMessage> DecodedMessage::FromTree(
    std::shared_ptr<const Schema> schema, Value tree) {
  if (absl::Status s = CheckStructure(*schema, tree); !s.ok()) return s;
  DecodedMessage msg;
  msg.schema_ = std::move(schema);
  msg.tree_ = std::move(tree);
  FlattenState st{*msg.schema_, msg.flat_, msg.instances_};
  const FieldPath root({PathSegment{msg.schema_->root(), std::nullopt, false}});
  Flatten(st, RootKind(*msg.schema_), msg.tree_, root, "", FieldPath(),
          FieldPath());
  return msg;
}

std::string DecodedMessage::schema_ref() const {
  return absl::StrCat(schema_->name(), "@", schema_->version());
}

const LeafEntry* DecodedMessage::FindLeaf(const FieldPath& path) const {
  for (const LeafEntry& e : flat_) {
    if (e.path == path) return &e;
  }
  return nullptr;
}

std::vector<FieldPath> DecodedMessage::InstancesOf(std::string_view ie) const {
  std::vector<FieldPath> out;
  for (const IeInstance& inst : instances_) {
    if (inst.ie == ie) out.push_back(inst.path);
  }
  return out;
}

const Value* DecodedMessage::Lookup(const FieldPath& path) const {
  if (path.empty() || path.segments().front().name != schema_->root()) {
    return nullptr;
  }
  const Value* node = &tree_;
  for (size_t i = 1; i < path.size() && node != nullptr; ++i) {
    node = Step(node, path.segments()[i]);
  }
  return node;
}

ordered_json DecodedMessage::ToJson() const {
  ordered_json out;
  out["schema"] = schema_ref();
  out["tree"] = MessageToJson(*schema_, tree_);
  ordered_json flat = ordered_json::array();
  for (const LeafEntry& e : flat_) {
    ordered_json row;
    row["path"] = e.path.ToString();
    row["present"] = e.present;
    row["value"] = e.value ? ScalarToJson(*e.value) : ordered_json(nullptr);
    row["domain"] = e.domain.ToString();
    row["ie"] = e.ie;
    row["pattern"] = e.pattern.ToString();
    flat.push_back(std::move(row));
  }
  out["flat"] = std::move(flat);
  return out;
}

absl::StatusOr<DecodedMessage> View(std::shared_ptr<const Schema> schema,
                                    std::span<const uint8_t> bytes) {
  absl::StatusOr<Value> tree = Decode(*schema, bytes);
  if (!tree.ok()) return tree.status();
  return DecodedMessage::FromTree(std::move(schema), *std::move(tree));
}

Edit Edit::SetValue(FieldPath path, Scalar value, std::string rationale) {
  return Edit{Op::kSetValue, std::move(path), std::move(value),
              std::move(rationale)};
}

Edit Edit::Omit(FieldPath path, std::string rationale) {
  return Edit{Op::kOmit, std::move(path), std::nullopt, std::move(rationale)};
}

Edit Edit::RawOverride(FieldPath path, int64_t value, std::string rationale) {
  return Edit{Op::kRawOverride, std::move(path), Scalar(value),
              std::move(rationale)};
}

std::string_view EditOpName(Edit::Op op) {
  switch (op) {
    case Edit::Op::kSetValue:
      return "set";
    case Edit::Op::kOmit:
      return "omit";
    case Edit::Op::kRawOverride:
      return "raw";
  }
  return "";
}

std::string Edit::ToString() const {
  if (op == Op::kOmit) return absl::StrCat("omit ", path.ToString());
  return absl::StrCat(std::string(EditOpName(op)), " ", path.ToString(), "=",
                      ScalarToString(*value));
}

ordered_json Edit::ToJson() const {
  ordered_json out;
  out["op"] = std::string(EditOpName(op));
  out["path"] = path.ToString();
  if (value) out["value"] = ScalarToJson(*value);
  if (!rationale.empty()) out["rationale"] = rationale;
  return out;
}

namespace {

absl::StatusOr<Edit> EditFromJsonUnchecked(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("op") || !j.contains("path")) {
    return absl::InvalidArgumentError("edit needs 'op' and 'path'");
  }
  Edit edit;
  const std::string op = j["op"].get<std::string>();
  if (op == "set") {
    edit.op = Edit::Op::kSetValue;
  } else if (op == "omit") {
    edit.op = Edit::Op::kOmit;
  } else if (op == "raw") {
    edit.op = Edit::Op::kRawOverride;
  } else {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown edit op '", op, "'"));
  }
  absl::StatusOr<FieldPath> path =
      FieldPath::Parse(j["path"].get<std::string>());
  if (!path.ok()) return path.status();
  edit.path = *std::move(path);
  if (j.contains("value")) {
    absl::StatusOr<Scalar> value = ScalarFromJson(j["value"]);
    if (!value.ok()) return value.status();
    edit.value = *std::move(value);
  }
  edit.rationale = j.value("rationale", "");
  return edit;
}

}  // namespace

absl::StatusOr<Edit> Edit::FromJson(const nlohmann::json& j) {
  try {
    return EditFromJsonUnchecked(j);
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("edit: ", e.what()));
  }
}

absl::StatusOr<DecodedMessage> ApplyEdits(const DecodedMessage& message,
                                          std::span<const Edit> edits) {
  std::set<FieldPath> touched;
  for (const Edit& e : edits) {
    if (!touched.insert(e.path).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("two edits touch ", e.path.ToString()));
    }
  }
  Value tree = message.tree();
  for (const Edit& e : edits) {
    if (absl::Status s = ApplyOne(message.schema(), tree, e); !s.ok()) return s;
  }
  return DecodedMessage::FromTree(message.shared_schema(), std::move(tree));
}

absl::StatusOr<std::vector<uint8_t>> Reencode(const DecodedMessage& message) {
  return Encode(message.schema(), message.tree(), EncodeMode::kUnchecked);
}

}  // namespace semprobe
