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

#include "semprobe/schema_rules.h"

#include <utility>

#include "absl/strings/str_cat.h"

namespace semprobe {
namespace {

FieldPath Join(const FieldPath& base, const std::vector<PathSegment>& rel,
               size_t from, size_t to) {
  std::vector<PathSegment> segments = base.segments();
  for (size_t i = from; i < to; ++i) segments.push_back(rel[i]);
  return FieldPath(std::move(segments));
}

void CollectPresence(const Schema& schema, const std::vector<FieldDef>& fields,
                     const FieldPath& prefix,
                     std::vector<PresenceConstraint>& out) {
  for (const FieldDef& f : fields) {
    FieldPath here = prefix.Child(f.name);
    if (f.optional && f.need) out.push_back(PresenceConstraint{here, *f.need});
    const FieldKind* kind = &f.kind;
    if (kind->tag == FieldKind::Tag::kSeqOf) {
      here = here.Wildcard();
      kind = kind->element.get();
    }
    if (kind->tag == FieldKind::Tag::kNested && kind->inline_fields) {
      CollectPresence(schema, *kind->inline_fields, here, out);
    }
  }
}

// Expands the wildcards of `rel` (IE-relative, concrete names) below `base`.
void ExpandSlots(const DecodedMessage& msg, const FieldPath& base,
                 const std::vector<PathSegment>& rel, size_t at,
                 std::vector<PresenceSlot>& out) {
  for (size_t i = at; i < rel.size(); ++i) {
    if (!rel[i].wildcard) continue;
    PathSegment bare{rel[i].name, std::nullopt, false};
    std::vector<PathSegment> head(rel.begin() + at, rel.begin() + i);
    head.push_back(bare);
    FieldPath list = Join(base, head, 0, head.size());
    const Value* node = msg.Lookup(list);
    if (node == nullptr) return;  // the containing list itself is absent
    for (size_t k = 0; k < node->items().size(); ++k) {
      ExpandSlots(msg, list.Element(k), rel, i + 1, out);
    }
    return;
  }
  FieldPath abs = Join(base, rel, at, rel.size());
  if (abs.size() > 1 && msg.Lookup(abs.Parent()) == nullptr) return;
  out.push_back(PresenceSlot{abs, msg.Lookup(abs) != nullptr});
}

}  // namespace

std::string RangeConstraint::id() const {
  return absl::StrCat("range:", path.ToString());
}

std::string RangeConstraint::ToString() const {
  return absl::StrCat("RANGE(", path.ToString(), ", ", lo, "..", hi, ")");
}

std::string PresenceConstraint::id() const {
  return absl::StrCat("presence:", path.ToString());
}

std::string PresenceConstraint::ToString() const {
  return absl::StrCat("PRESENCE(", path.ToString(), ", Need ",
                      std::string(NeedCodeName(need)), ")");
}

std::vector<RangeConstraint> ExtractRanges(const Schema& schema) {
  std::vector<RangeConstraint> out;
  for (const LeafPattern& leaf : schema.AllLeafPatterns()) {
    if (leaf.kind->tag != FieldKind::Tag::kInt) continue;
    out.push_back(
        RangeConstraint{leaf.Qualified(), leaf.kind->lo, leaf.kind->hi});
  }
  return out;
}

std::vector<PresenceConstraint> ExtractPresence(const Schema& schema) {
  std::vector<PresenceConstraint> out;
  for (const IEDef& ie : schema.ies()) {
    FieldPath root({PathSegment{ie.name, std::nullopt, false}});
    CollectPresence(schema, ie.fields, root, out);
  }
  return out;
}

std::vector<const LeafEntry*> RangeInstances(const DecodedMessage& msg,
                                             const RangeConstraint& rc) {
  std::vector<const LeafEntry*> out;
  for (const LeafEntry& e : msg.flat()) {
    if (e.present && e.value && e.pattern == rc.path) out.push_back(&e);
  }
  return out;
}

std::vector<PresenceSlot> PresenceInstances(const DecodedMessage& msg,
                                            const PresenceConstraint& pc) {
  std::vector<PresenceSlot> out;
  const std::string& ie = pc.path.segments().front().name;
  const std::vector<PathSegment> rel(pc.path.segments().begin() + 1,
                                     pc.path.segments().end());
  for (const FieldPath& inst : msg.InstancesOf(ie)) {
    ExpandSlots(msg, inst, rel, 0, out);
  }
  return out;
}

Verdict CheckRange(const DecodedMessage& msg, const RangeConstraint& rc) {
  const std::vector<const LeafEntry*> leaves = RangeInstances(msg, rc);
  if (leaves.empty()) {
    return Verdict::Inapplicable(
        absl::StrCat("no instance of ", rc.path.ToString()));
  }
  for (const LeafEntry* e : leaves) {
    const int64_t v = std::get<int64_t>(*e->value);
    if (v >= rc.lo && v <= rc.hi) continue;
    Verdict out;
    out.kind = Verdict::Kind::kViolated;
    out.atom = rc.ToString();
    out.witness.push_back(BoundValue{e->path, *e->value});
    out.margin = v > rc.hi ? Rational(v - rc.hi) : Rational(rc.lo - v);
    return out;
  }
  return Verdict::Satisfied();
}

}  // namespace semprobe
