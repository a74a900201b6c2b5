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

#include "semprobe/schema.h"

#include <bit>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace semprobe {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

absl::StatusOr<FieldKind> KindFromJson(const json& j, const std::string& where);

absl::StatusOr<std::vector<FieldDef>> FieldsFromJson(const json& j,
                                                     const std::string& where) {
  if (!j.is_array()) {
    return absl::InvalidArgumentError(
        absl::StrCat(where, ": 'fields' must be an array"));
  }
  std::vector<FieldDef> fields;
  for (const json& f : j) {
    if (!f.is_object() || !f.contains("name") || !f["name"].is_string() ||
        !f.contains("kind")) {
      return absl::InvalidArgumentError(
          absl::StrCat(where, ": field needs 'name' and 'kind'"));
    }
    FieldDef def;
    def.name = f["name"].get<std::string>();
    std::string child_where = absl::StrCat(where, ".", def.name);
    absl::StatusOr<FieldKind> kind = KindFromJson(f["kind"], child_where);
    if (!kind.ok()) return kind.status();
    def.kind = *std::move(kind);
    def.optional = f.value("optional", false);
    if (f.contains("need") && !f["need"].is_null()) {
      if (!f["need"].is_string()) {
        return absl::InvalidArgumentError(
            absl::StrCat(child_where, ": 'need' must be \"M\" or \"R\""));
      }
      absl::StatusOr<NeedCode> need =
          ParseNeedCode(f["need"].get<std::string>());
      if (!need.ok()) {
        return absl::InvalidArgumentError(
            absl::StrCat(child_where, ": ", need.status().message()));
      }
      def.need = *need;
    }
    def.doc = f.value("doc", "");
    fields.push_back(std::move(def));
  }
  return fields;
}

absl::StatusOr<FieldKind> KindFromJson(const json& j,
                                       const std::string& where) {
  if (!j.is_object() || j.size() != 1) {
    return absl::InvalidArgumentError(
        absl::StrCat(where, ": kind must be a single-key tagged object"));
  }
  const auto& [tag, body] = *j.items().begin();
  try {
    if (tag == "int") {
      return FieldKind::Int(body.at("lo").get<int64_t>(),
                            body.at("hi").get<int64_t>());
    }
    if (tag == "enum") {
      return FieldKind::Enum(body.get<std::vector<std::string>>());
    }
    if (tag == "bool") return FieldKind::Bool();
    if (tag == "choice") {
      std::vector<Alternative> alternatives;
      for (const json& alt : body) {
        std::string name = alt.at("name").get<std::string>();
        absl::StatusOr<FieldKind> kind =
            KindFromJson(alt.at("kind"), absl::StrCat(where, ".", name));
        if (!kind.ok()) return kind.status();
        alternatives.push_back(Alternative{std::move(name), *std::move(kind)});
      }
      return FieldKind::Choice(std::move(alternatives));
    }
    if (tag == "seqOf") {
      absl::StatusOr<FieldKind> element =
          KindFromJson(body.at("element"), absl::StrCat(where, "[*]"));
      if (!element.ok()) return element.status();
      return FieldKind::SeqOf(*std::move(element), body.at("lo").get<int64_t>(),
                              body.at("hi").get<int64_t>());
    }
    if (tag == "nested") {
      if (body.is_string()) return FieldKind::Nested(body.get<std::string>());
      absl::StatusOr<std::vector<FieldDef>> fields =
          FieldsFromJson(body.at("fields"), where);
      if (!fields.ok()) return fields.status();
      return FieldKind::Inline(*std::move(fields));
    }
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat(where, ": malformed '", tag, "' kind: ", e.what()));
  }
  return absl::InvalidArgumentError(
      absl::StrCat(where, ": unknown kind tag '", tag, "'"));
}

ordered_json FieldsToJson(const std::vector<FieldDef>& fields);

ordered_json KindToJson(const FieldKind& kind) {
  ordered_json out = ordered_json::object();
  switch (kind.tag) {
    case FieldKind::Tag::kInt:
      out["int"] = ordered_json{{"lo", kind.lo}, {"hi", kind.hi}};
      break;
    case FieldKind::Tag::kEnum:
      out["enum"] = kind.labels;
      break;
    case FieldKind::Tag::kBool:
      out["bool"] = ordered_json::object();
      break;
    case FieldKind::Tag::kChoice: {
      ordered_json alts = ordered_json::array();
      for (const Alternative& alt : kind.alternatives) {
        alts.push_back(
            ordered_json{{"name", alt.name}, {"kind", KindToJson(alt.kind)}});
      }
      out["choice"] = std::move(alts);
      break;
    }
    case FieldKind::Tag::kSeqOf:
      out["seqOf"] = ordered_json{{"element", KindToJson(*kind.element)},
                                  {"lo", kind.lo},
                                  {"hi", kind.hi}};
      break;
    case FieldKind::Tag::kNested:
      if (kind.inline_fields) {
        out["nested"] =
            ordered_json{{"fields", FieldsToJson(*kind.inline_fields)}};
      } else {
        out["nested"] = kind.ie;
      }
      break;
  }
  return out;
}

ordered_json FieldsToJson(const std::vector<FieldDef>& fields) {
  ordered_json out = ordered_json::array();
  for (const FieldDef& f : fields) {
    ordered_json j;
    j["name"] = f.name;
    j["kind"] = KindToJson(f.kind);
    j["optional"] = f.optional;
    if (f.need) j["need"] = std::string(NeedCodeName(*f.need));
    if (!f.doc.empty()) j["doc"] = f.doc;
    out.push_back(std::move(j));
  }
  return out;
}

absl::Status ValidateKind(const Schema& schema, const FieldKind& kind,
                          const std::string& where);

absl::Status ValidateFields(const Schema& schema,
                            const std::vector<FieldDef>& fields,
                            const std::string& where) {
  std::set<std::string> names;
  for (const FieldDef& f : fields) {
    std::string field_where = absl::StrCat(where, ".", f.name);
    if (f.name.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat(where, ": empty field name"));
    }
    if (!names.insert(f.name).second) {
      return absl::InvalidArgumentError(
          absl::StrCat(field_where, ": duplicate field name"));
    }
    if (f.need && !f.optional) {
      return absl::InvalidArgumentError(
          absl::StrCat(field_where, ": need code on a mandatory field"));
    }
    if (absl::Status s = ValidateKind(schema, f.kind, field_where); !s.ok()) {
      return s;
    }
  }
  return absl::OkStatus();
}

absl::Status ValidateKind(const Schema& schema, const FieldKind& kind,
                          const std::string& where) {
  switch (kind.tag) {
    case FieldKind::Tag::kInt:
      if (kind.lo > kind.hi) {
        return absl::InvalidArgumentError(
            absl::StrCat(where, ": Int lo ", kind.lo, " > hi ", kind.hi));
      }
      if (IntBitWidth(kind.lo, kind.hi) > 62) {
        return absl::InvalidArgumentError(
            absl::StrCat(where, ": Int range too wide"));
      }
      return absl::OkStatus();
    case FieldKind::Tag::kEnum: {
      if (kind.labels.empty()) {
        return absl::InvalidArgumentError(
            absl::StrCat(where, ": Enum needs at least one label"));
      }
      std::set<std::string> seen(kind.labels.begin(), kind.labels.end());
      if (seen.size() != kind.labels.size()) {
        return absl::InvalidArgumentError(
            absl::StrCat(where, ": duplicate Enum label"));
      }
      return absl::OkStatus();
    }
    case FieldKind::Tag::kBool:
      return absl::OkStatus();
    case FieldKind::Tag::kChoice: {
      if (kind.alternatives.empty()) {
        return absl::InvalidArgumentError(
            absl::StrCat(where, ": Choice needs at least one alternative"));
      }
      std::set<std::string> seen;
      for (const Alternative& alt : kind.alternatives) {
        if (!seen.insert(alt.name).second) {
          return absl::InvalidArgumentError(
              absl::StrCat(where, ": duplicate alternative ", alt.name));
        }
        absl::Status s =
            ValidateKind(schema, alt.kind, absl::StrCat(where, ".", alt.name));
        if (!s.ok()) return s;
      }
      return absl::OkStatus();
    }
    case FieldKind::Tag::kSeqOf:
      if (kind.lo < 0 || kind.lo > kind.hi) {
        return absl::InvalidArgumentError(
            absl::StrCat(where, ": SeqOf needs 0 <= lo <= hi, got ", kind.lo,
                         "..", kind.hi));
      }
      return ValidateKind(schema, *kind.element, absl::StrCat(where, "[*]"));
    case FieldKind::Tag::kNested:
      if (kind.inline_fields) {
        return ValidateFields(schema, *kind.inline_fields, where);
      }
      if (schema.FindIe(kind.ie) == nullptr) {
        return absl::InvalidArgumentError(
            absl::StrCat(where, ": reference to undefined IE '", kind.ie, "'"));
      }
      return absl::OkStatus();
  }
  return absl::OkStatus();
}

void CollectLeaves(const Schema& schema, const std::string& ie,
                   const FieldKind& kind, const FieldPath& rel,
                   std::vector<LeafPattern>& out) {
  switch (kind.tag) {
    case FieldKind::Tag::kInt:
    case FieldKind::Tag::kEnum:
    case FieldKind::Tag::kBool:
      out.push_back(LeafPattern{ie, rel, &kind});
      return;
    case FieldKind::Tag::kChoice:
      for (const Alternative& alt : kind.alternatives) {
        CollectLeaves(schema, ie, alt.kind, rel.Child(alt.name), out);
      }
      return;
    case FieldKind::Tag::kSeqOf:
      CollectLeaves(schema, ie, *kind.element, rel.Wildcard(), out);
      return;
    case FieldKind::Tag::kNested:
      if (!kind.inline_fields) return;  // another IE's leaves
      for (const FieldDef& f : *kind.inline_fields) {
        CollectLeaves(schema, ie, f.kind, rel.Child(f.name), out);
      }
      return;
  }
}

std::string KindToAsn1(const Schema& schema, const FieldKind& kind, int indent);

std::string FieldsToAsn1(const Schema& schema,
                         const std::vector<FieldDef>& fields, int indent) {
  std::string pad(static_cast<size_t>(indent + 2), ' ');
  std::vector<std::string> lines;
  for (const FieldDef& f : fields) {
    std::string line =
        absl::StrCat(pad, f.name, " ", KindToAsn1(schema, f.kind, indent + 2));
    if (f.optional) absl::StrAppend(&line, " OPTIONAL");
    if (f.need)
      absl::StrAppend(&line, " -- Need ", std::string(NeedCodeName(*f.need)));
    lines.push_back(std::move(line));
  }
  return absl::StrCat("SEQUENCE {\n", absl::StrJoin(lines, ",\n"), "\n",
                      std::string(static_cast<size_t>(indent), ' '), "}");
}

std::string KindToAsn1(const Schema& schema, const FieldKind& kind,
                       int indent) {
  switch (kind.tag) {
    case FieldKind::Tag::kInt:
      return absl::StrCat("INTEGER (", kind.lo, "..", kind.hi, ")");
    case FieldKind::Tag::kEnum:
      return absl::StrCat("ENUMERATED {", absl::StrJoin(kind.labels, ", "),
                          "}");
    case FieldKind::Tag::kBool:
      return "BOOLEAN";
    case FieldKind::Tag::kChoice: {
      std::vector<std::string> alts;
      for (const Alternative& alt : kind.alternatives) {
        alts.push_back(
            absl::StrCat(alt.name, " ", KindToAsn1(schema, alt.kind, indent)));
      }
      return absl::StrCat("CHOICE {", absl::StrJoin(alts, ", "), "}");
    }
    case FieldKind::Tag::kSeqOf:
      return absl::StrCat("SEQUENCE (SIZE (", kind.lo, "..", kind.hi, ")) OF ",
                          KindToAsn1(schema, *kind.element, indent));
    case FieldKind::Tag::kNested:
      if (kind.inline_fields) {
        return FieldsToAsn1(schema, *kind.inline_fields, indent);
      }
      return kind.ie;
  }
  return "";
}

}  // namespace

std::string_view NeedCodeName(NeedCode need) {
  return need == NeedCode::kMaintain ? "M" : "R";
}

absl::StatusOr<NeedCode> ParseNeedCode(std::string_view text) {
  if (text == "M") return NeedCode::kMaintain;
  if (text == "R") return NeedCode::kRemove;
  return absl::InvalidArgumentError(
      absl::StrCat("need code must be M or R, got '", std::string(text), "'"));
}

FieldKind FieldKind::Int(int64_t lo, int64_t hi) {
  FieldKind k;
  k.tag = Tag::kInt;
  k.lo = lo;
  k.hi = hi;
  return k;
}

FieldKind FieldKind::Enum(std::vector<std::string> labels) {
  FieldKind k;
  k.tag = Tag::kEnum;
  k.labels = std::move(labels);
  return k;
}

FieldKind FieldKind::Bool() { return FieldKind(); }

FieldKind FieldKind::Choice(std::vector<Alternative> alternatives) {
  FieldKind k;
  k.tag = Tag::kChoice;
  k.alternatives = std::move(alternatives);
  return k;
}

FieldKind FieldKind::SeqOf(FieldKind element, int64_t lo, int64_t hi) {
  FieldKind k;
  k.tag = Tag::kSeqOf;
  k.element = std::make_shared<const FieldKind>(std::move(element));
  k.lo = lo;
  k.hi = hi;
  return k;
}

FieldKind FieldKind::Nested(std::string ie) {
  FieldKind k;
  k.tag = Tag::kNested;
  k.ie = std::move(ie);
  return k;
}

FieldKind FieldKind::Inline(std::vector<FieldDef> fields) {
  FieldKind k;
  k.tag = Tag::kNested;
  k.inline_fields =
      std::make_shared<const std::vector<FieldDef>>(std::move(fields));
  return k;
}

const Alternative* FieldKind::FindAlternative(std::string_view name) const {
  for (const Alternative& alt : alternatives) {
    if (alt.name == name) return &alt;
  }
  return nullptr;
}

std::optional<size_t> FieldKind::LabelIndex(std::string_view label) const {
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return i;
  }
  return std::nullopt;
}

bool operator==(const FieldKind& a, const FieldKind& b) {
  if (a.tag != b.tag) return false;
  switch (a.tag) {
    case FieldKind::Tag::kInt:
      return a.lo == b.lo && a.hi == b.hi;
    case FieldKind::Tag::kEnum:
      return a.labels == b.labels;
    case FieldKind::Tag::kBool:
      return true;
    case FieldKind::Tag::kChoice:
      return a.alternatives == b.alternatives;
    case FieldKind::Tag::kSeqOf:
      return a.lo == b.lo && a.hi == b.hi && *a.element == *b.element;
    case FieldKind::Tag::kNested:
      if (static_cast<bool>(a.inline_fields) !=
          static_cast<bool>(b.inline_fields)) {
        return false;
      }
      if (a.inline_fields) return *a.inline_fields == *b.inline_fields;
      return a.ie == b.ie;
  }
  return false;
}

bool operator==(const Alternative& a, const Alternative& b) {
  return a.name == b.name && a.kind == b.kind;
}

bool operator==(const FieldDef& a, const FieldDef& b) {
  return a.name == b.name && a.kind == b.kind && a.optional == b.optional &&
         a.need == b.need && a.doc == b.doc;
}

const FieldDef* IEDef::FindField(std::string_view field) const {
  for (const FieldDef& f : fields) {
    if (f.name == field) return &f;
  }
  return nullptr;
}

DomainDescriptor DomainDescriptor::Of(const FieldKind& kind) {
  DomainDescriptor d;
  d.tag = kind.tag;
  switch (kind.tag) {
    case FieldKind::Tag::kInt:
    case FieldKind::Tag::kSeqOf:
      d.lo = kind.lo;
      d.hi = kind.hi;
      break;
    case FieldKind::Tag::kEnum:
      d.labels = kind.labels;
      break;
    case FieldKind::Tag::kChoice:
      for (const Alternative& alt : kind.alternatives) {
        d.labels.push_back(alt.name);
      }
      break;
    case FieldKind::Tag::kNested:
      d.ie = kind.ie;
      break;
    case FieldKind::Tag::kBool:
      break;
  }
  return d;
}

std::string DomainDescriptor::ToString() const {
  switch (tag) {
    case FieldKind::Tag::kInt:
      return absl::StrCat("Int(", lo, ",", hi, ")");
    case FieldKind::Tag::kEnum:
      return absl::StrCat("Enum(", absl::StrJoin(labels, ","), ")");
    case FieldKind::Tag::kBool:
      return "Bool";
    case FieldKind::Tag::kChoice:
      return absl::StrCat("Choice(", absl::StrJoin(labels, ","), ")");
    case FieldKind::Tag::kSeqOf:
      return absl::StrCat("SeqOf(", lo, ",", hi, ")");
    case FieldKind::Tag::kNested:
      return absl::StrCat("Nested(", ie.empty() ? "inline" : ie, ")");
  }
  return "";
}

FieldPath LeafPattern::Qualified() const {
  std::vector<PathSegment> segments;
  segments.push_back(PathSegment{ie, std::nullopt, false});
  for (const PathSegment& s : relative.segments()) segments.push_back(s);
  return FieldPath(std::move(segments));
}

absl::StatusOr<Schema> Schema::FromJson(const json& j) {
  if (!j.is_object()) {
    return absl::InvalidArgumentError("schema must be a JSON object");
  }
  Schema schema;
  try {
    schema.name_ = j.at("name").get<std::string>();
    schema.version_ = j.value("version", "");
    schema.root_ = j.at("root").get<std::string>();
    for (const json& ie : j.at("ies")) {
      IEDef def;
      def.name = ie.at("name").get<std::string>();
      absl::StatusOr<std::vector<FieldDef>> fields =
          FieldsFromJson(ie.at("fields"), def.name);
      if (!fields.ok()) return fields.status();
      def.fields = *std::move(fields);
      schema.ies_.push_back(std::move(def));
    }
    if (j.contains("aliases")) {
      schema.aliases_ =
          j["aliases"].get<std::map<std::string, std::vector<std::string>>>();
    }
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed schema: ", e.what()));
  }
  if (absl::Status s = schema.Validate(); !s.ok()) return s;
  return schema;
}

ordered_json Schema::ToJson() const {
  ordered_json out;
  out["name"] = name_;
  out["version"] = version_;
  out["root"] = root_;
  ordered_json ies = ordered_json::array();
  for (const IEDef& ie : ies_) {
    ies.push_back(
        ordered_json{{"name", ie.name}, {"fields", FieldsToJson(ie.fields)}});
  }
  out["ies"] = std::move(ies);
  if (!aliases_.empty()) {
    ordered_json aliases = ordered_json::object();
    for (const auto& [key, values] : aliases_) aliases[key] = values;
    out["aliases"] = std::move(aliases);
  }
  return out;
}

absl::Status Schema::Validate() const {
  std::set<std::string> names;
  for (const IEDef& ie : ies_) {
    if (!names.insert(ie.name).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate IE name '", ie.name, "'"));
    }
  }
  if (FindIe(root_) == nullptr) {
    return absl::InvalidArgumentError(
        absl::StrCat("root IE '", root_, "' is not defined"));
  }
  for (const IEDef& ie : ies_) {
    if (absl::Status s = ValidateFields(*this, ie.fields, ie.name); !s.ok()) {
      return s;
    }
  }
  return absl::OkStatus();
}

const IEDef* Schema::FindIe(std::string_view name) const {
  for (const IEDef& ie : ies_) {
    if (ie.name == name) return &ie;
  }
  return nullptr;
}

const IEDef& Schema::RootIe() const { return *FindIe(root_); }

const std::vector<FieldDef>& Schema::FieldsOf(const FieldKind& nested) const {
  if (nested.inline_fields) return *nested.inline_fields;
  return FindIe(nested.ie)->fields;
}

absl::StatusOr<ResolvedPath> Schema::Resolve(const FieldPath& path) const {
  if (path.empty()) return absl::InvalidArgumentError("empty path");
  const PathSegment& head = path.segments().front();
  const IEDef* ie = FindIe(head.name);
  if (ie == nullptr || head.has_subscript()) {
    return absl::NotFoundError(
        absl::StrCat("path '", path.ToString(), "' does not start at an IE"));
  }
  ResolvedPath out;
  out.owning_ie = ie->name;
  std::vector<PathSegment> rel;
  const std::vector<FieldDef>* record = &ie->fields;
  const FieldKind* kind = nullptr;
  for (size_t i = 1; i < path.size(); ++i) {
    const PathSegment& seg = path.segments()[i];
    if (kind != nullptr && kind->tag == FieldKind::Tag::kNested &&
        !kind->inline_fields) {
      out.owning_ie = kind->ie;
      rel.clear();
    }
    if (record != nullptr) {
      const FieldDef* def = nullptr;
      for (const FieldDef& f : *record) {
        if (f.name == seg.name) def = &f;
      }
      if (def == nullptr) {
        return absl::NotFoundError(absl::StrCat(
            "no field '", seg.name, "' in path '", path.ToString(), "'"));
      }
      out.field = def;
      out.ends_on_field = true;
      kind = &def->kind;
    } else if (kind != nullptr && kind->tag == FieldKind::Tag::kChoice) {
      const Alternative* alt = kind->FindAlternative(seg.name);
      if (alt == nullptr) {
        return absl::NotFoundError(absl::StrCat(
            "no alternative '", seg.name, "' in path '", path.ToString(), "'"));
      }
      out.field = nullptr;
      out.ends_on_field = false;
      kind = &alt->kind;
    } else {
      return absl::NotFoundError(absl::StrCat(
          "cannot descend past a scalar in '", path.ToString(), "'"));
    }
    rel.push_back(seg);
    if (seg.has_subscript()) {
      if (kind->tag != FieldKind::Tag::kSeqOf) {
        return absl::NotFoundError(absl::StrCat("subscript on non-SeqOf '",
                                                seg.name, "' in '",
                                                path.ToString(), "'"));
      }
      kind = kind->element.get();
      out.ends_on_field = false;
    }
    record = nullptr;
    if (kind->tag == FieldKind::Tag::kNested) record = &FieldsOf(*kind);
  }
  out.kind = kind;
  out.ie_relative = FieldPath(std::move(rel));
  if (kind == nullptr) {
    return absl::InvalidArgumentError(
        absl::StrCat("path '", path.ToString(), "' names an IE, not a field"));
  }
  return out;
}

std::vector<LeafPattern> Schema::LeafPatterns(std::string_view ie) const {
  std::vector<LeafPattern> out;
  const IEDef* def = FindIe(ie);
  if (def == nullptr) return out;
  for (const FieldDef& f : def->fields) {
    CollectLeaves(*this, def->name, f.kind,
                  FieldPath({PathSegment{f.name, std::nullopt, false}}), out);
  }
  return out;
}

std::vector<LeafPattern> Schema::AllLeafPatterns() const {
  std::vector<LeafPattern> out;
  for (const IEDef& ie : ies_) {
    std::vector<LeafPattern> leaves = LeafPatterns(ie.name);
    out.insert(out.end(), leaves.begin(), leaves.end());
  }
  return out;
}

bool operator==(const Schema& a, const Schema& b) {
  return a.name_ == b.name_ && a.version_ == b.version_ && a.root_ == b.root_ &&
         a.ies_ == b.ies_ && a.aliases_ == b.aliases_;
}

absl::StatusOr<Schema> LoadSchema(const std::filesystem::path& path) {
  absl::StatusOr<json> j = ReadJsonFile(path);
  if (!j.ok()) return j.status();
  return Schema::FromJson(*j);
}

absl::StatusOr<std::shared_ptr<const Schema>> LoadSharedSchema(
    const std::filesystem::path& path) {
  absl::StatusOr<Schema> schema = LoadSchema(path);
  if (!schema.ok()) return schema.status();
  return std::make_shared<const Schema>(*std::move(schema));
}

absl::StatusOr<DomainDescriptor> FieldDomain(const Schema& schema,
                                             const FieldPath& path) {
  absl::StatusOr<ResolvedPath> resolved = schema.Resolve(path);
  if (!resolved.ok()) return resolved.status();
  return DomainDescriptor::Of(*resolved->kind);
}

int IntBitWidth(int64_t lo, int64_t hi) {
  uint64_t range = static_cast<uint64_t>(hi) - static_cast<uint64_t>(lo);
  return static_cast<int>(std::bit_width(range));
}

int IndexBitWidth(size_t count) {
  if (count <= 1) return 0;
  return static_cast<int>(std::bit_width(static_cast<uint64_t>(count - 1)));
}

bool IsWireRepresentable(int64_t lo, int64_t hi, int64_t v) {
  __int128 offset = static_cast<__int128>(v) - lo;
  if (offset < 0) return false;
  int width = IntBitWidth(lo, hi);
  return offset < (static_cast<__int128>(1) << width);
}

std::string RenderAsn1(const Schema& schema, const IEDef& ie) {
  return absl::StrCat(ie.name, " ::= ", FieldsToAsn1(schema, ie.fields, 0));
}

absl::StatusOr<json> ReadJsonFile(const std::filesystem::path& path) {
  absl::StatusOr<std::string> text = ReadTextFile(path);
  if (!text.ok()) return text.status();
  json j = json::parse(*text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    return absl::InvalidArgumentError(
        absl::StrCat("parse error: ", path.string(), " is not valid JSON"));
  }
  return j;
}

absl::StatusOr<std::string> ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot open ", path.string()));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::Status WriteTextFile(const std::filesystem::path& path,
                           std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot write ", path.string()));
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  return out ? absl::OkStatus()
             : absl::DataLossError(
                   absl::StrCat("short write to ", path.string()));
}

}  // namespace semprobe
