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

#include "semprobe/mutation_engine.h"

#include <algorithm>
#include <limits>
#include <map>
#include <tuple>
#include <utility>

#include "absl/strings/escaping.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "semprobe/dsl_evaluate.h"
#include "semprobe/dsl_normalize.h"
#include "semprobe/wire_codec.h"

namespace semprobe {
namespace {

using ordered_json = nlohmann::ordered_json;

// Applies edits and packages the result; nullopt when the message cannot be
// delivered (re-encode or decode failure), which callers treat as discarded.
std::optional<TestCase> Materialize(const DecodedMessage& seed,
                                    std::vector<Edit> edits, std::string id,
                                    std::string targeted, ConstraintClass cls,
                                    std::string_view seed_ref) {
  absl::StatusOr<DecodedMessage> mutated = ApplyEdits(seed, edits);
  if (!mutated.ok()) return std::nullopt;
  TestCase tc;
  tc.id = std::move(id);
  tc.seed_ref = std::string(seed_ref);
  tc.edits = std::move(edits);
  tc.targeted = std::move(targeted);
  tc.expected_class = cls;
  const bool raw =
      std::any_of(tc.edits.begin(), tc.edits.end(),
                  [](const Edit& e) { return e.op == Edit::Op::kRawOverride; });
  if (raw) {
    tc.delivery = Delivery::kRawOverride;
    tc.form = mutated->tree();
    return tc;
  }
  absl::StatusOr<std::vector<uint8_t>> bytes = Reencode(*mutated);
  if (!bytes.ok()) return std::nullopt;
  if (!View(seed.shared_schema(), *bytes).ok()) return std::nullopt;
  tc.delivery = Delivery::kWire;
  tc.payload = *std::move(bytes);
  return tc;
}

int64_t ScalarDeviation(const Scalar& from, const Scalar& to) {
  if (std::holds_alternative<int64_t>(from) &&
      std::holds_alternative<int64_t>(to)) {
    const int64_t d = std::get<int64_t>(to) - std::get<int64_t>(from);
    return d < 0 ? -d : d;
  }
  return from == to ? 0 : 1;
}

struct Candidate {
  int64_t deviation = 0;
  std::vector<std::string> paths;  // edited instance paths, sorted
  Rational margin = 0;
  std::vector<size_t> order;  // domain indices
  std::vector<Edit> edits;

  auto Key() const {
    return std::make_tuple(deviation, paths.size(), std::cref(paths), -margin,
                           std::cref(order));
  }
};

}  // namespace

std::string_view DeliveryName(Delivery d) {
  return d == Delivery::kWire ? "wire" : "raw-override";
}

ordered_json TestCase::ToJson(const Schema& schema) const {
  ordered_json j;
  j["id"] = id;
  j["seed"] = seed_ref;
  j["targeted"] = targeted;
  j["class"] = std::string(ConstraintClassName(expected_class));
  j["edits"] = ordered_json::array();
  for (const Edit& e : edits) j["edits"].push_back(e.ToJson());
  j["delivery"] = std::string(DeliveryName(delivery));
  if (delivery == Delivery::kWire) {
    j["payload"] = absl::BytesToHexString(absl::string_view(
        reinterpret_cast<const char*>(payload.data()), payload.size()));
  } else if (form) {
    j["form"] = MessageToJson(schema, *form);
  }
  if (need) j["need"] = std::string(NeedCodeName(*need));
  return j;
}

absl::StatusOr<TestCase> TestCase::FromJson(const Schema& schema,
                                            const nlohmann::json& j) {
  try {
    TestCase tc;
    tc.id = j.at("id").get<std::string>();
    tc.seed_ref = j.value("seed", "");
    tc.targeted = j.at("targeted").get<std::string>();
    absl::StatusOr<ConstraintClass> cls =
        ParseConstraintClass(j.at("class").get<std::string>());
    if (!cls.ok()) return cls.status();
    tc.expected_class = *cls;
    for (const nlohmann::json& e : j.at("edits")) {
      absl::StatusOr<Edit> edit = Edit::FromJson(e);
      if (!edit.ok()) return edit.status();
      tc.edits.push_back(*std::move(edit));
    }
    const std::string delivery = j.at("delivery").get<std::string>();
    if (delivery == "wire") {
      tc.delivery = Delivery::kWire;
      const std::string bytes =
          absl::HexStringToBytes(j.at("payload").get<std::string>());
      tc.payload.assign(bytes.begin(), bytes.end());
    } else if (delivery == "raw-override") {
      tc.delivery = Delivery::kRawOverride;
      absl::StatusOr<Value> form = MessageFromJson(schema, j.at("form"));
      if (!form.ok()) return form.status();
      tc.form = *std::move(form);
    } else {
      return absl::InvalidArgumentError(absl::StrCat(
          "test case ", tc.id, ": unknown delivery '", delivery, "'"));
    }
    if (j.contains("need")) {
      absl::StatusOr<NeedCode> need =
          ParseNeedCode(j["need"].get<std::string>());
      if (!need.ok()) return need.status();
      tc.need = *need;
    }
    return tc;
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("test case: ", e.what()));
  }
}

absl::StatusOr<DecodedMessage> DeliveredMessage(
    std::shared_ptr<const Schema> schema, const TestCase& tc) {
  if (tc.delivery == Delivery::kWire)
    return View(std::move(schema), tc.payload);
  if (!tc.form)
    return absl::InvalidArgumentError("raw-override case without a form");
  return DecodedMessage::FromTree(std::move(schema), *tc.form);
}

PlanOutcome PlanRange(const DecodedMessage& seed, const RangeConstraint& rc,
                      std::string_view seed_ref) {
  const std::vector<const LeafEntry*> leaves = RangeInstances(seed, rc);
  if (leaves.empty()) {
    return PlanOutcome::Infeasible("no instance of the field in the seed");
  }
  PlanOutcome out;
  for (const LeafEntry* leaf : leaves) {
    for (int64_t v : {rc.hi + 1, rc.lo - 1}) {
      Edit e = IsWireRepresentable(rc.lo, rc.hi, v)
                   ? Edit::SetValue(leaf->path, Scalar(v), rc.id())
                   : Edit::RawOverride(leaf->path, v, rc.id());
      std::optional<TestCase> tc =
          Materialize(seed, {std::move(e)},
                      absl::StrCat(rc.id(), "@", leaf->path.ToString(), "=", v),
                      rc.id(), ConstraintClass::kValue, seed_ref);
      if (tc) out.cases.push_back(*std::move(tc));
    }
  }
  if (out.cases.empty())
    return PlanOutcome::Infeasible("no probe could be delivered");
  return out;
}

PlanOutcome PlanPresence(const DecodedMessage& seed,
                         const PresenceConstraint& pc,
                         std::string_view seed_ref) {
  for (const PresenceSlot& slot : PresenceInstances(seed, pc)) {
    if (!slot.present) continue;
    std::optional<TestCase> tc =
        Materialize(seed, {Edit::Omit(slot.path, pc.id())},
                    absl::StrCat(pc.id(), "@", slot.path.ToString()), pc.id(),
                    ConstraintClass::kPresence, seed_ref);
    if (!tc) return PlanOutcome::Infeasible("omission could not be delivered");
    tc->need = pc.need;
    PlanOutcome out;
    out.cases.push_back(*std::move(tc));
    return out;
  }
  return PlanOutcome::Infeasible("field absent in the seed");
}

int64_t EditDeviation(const DecodedMessage& seed,
                      const std::vector<Edit>& edits) {
  int64_t total = 0;
  for (const Edit& e : edits) {
    const LeafEntry* leaf = seed.FindLeaf(e.path);
    if (leaf == nullptr || !leaf->value || !e.value) {
      total += 1;
      continue;
    }
    total += ScalarDeviation(*leaf->value, *e.value);
  }
  return total;
}

PlanOutcome PlanDependency(const DecodedMessage& seed,
                           const ConstraintRule& rule,
                           const DependencyOptions& options,
                           std::string_view seed_ref) {
  if (Evaluate(rule, seed).violated()) {
    return PlanOutcome::Infeasible("seed already violates the rule");
  }
  const std::vector<RuleEnv> envs = Environments(rule, seed);
  if (envs.empty())
    return PlanOutcome::Infeasible("no instance of the scope in the seed");
  const RuleEnv& base = envs.front();

  std::vector<FieldPath> fields = rule.Fields();
  std::sort(fields.begin(), fields.end());
  fields.erase(std::unique(fields.begin(), fields.end()), fields.end());
  for (const FieldPath& f : fields) {
    if (!base.values.contains(f)) {
      return PlanOutcome::Infeasible(
          absl::StrCat(f.ToString(), " is absent in the seed"));
    }
  }
  // Reference integrity is probed by moving the reference, not the target.
  std::vector<FieldPath> editable = fields;
  if (rule.consequent.kind == AtomKind::kMatch && !rule.is_implies()) {
    const bool def_a = IsDefiningIdentifier(rule.consequent.field);
    const bool def_b = IsDefiningIdentifier(rule.consequent.field2);
    if (def_a != def_b) {
      editable = {def_a ? rule.consequent.field2 : rule.consequent.field};
    }
  }

  std::vector<std::vector<Scalar>> domains;
  size_t total = 1;
  for (const FieldPath& f : editable) {
    const FieldKind* kind = PatternKind(seed.schema(), f);
    if (kind == nullptr)
      return PlanOutcome::Infeasible(
          absl::StrCat(f.ToString(), " is not a leaf"));
    std::optional<std::vector<Scalar>> d =
        EnumerateDomain(*kind, options.budget);
    if (!d) return PlanOutcome::Infeasible("budget");
    total *= d->size();
    if (total > options.budget) return PlanOutcome::Infeasible("budget");
    domains.push_back(*std::move(d));
  }

  std::vector<Candidate> candidates;
  std::vector<size_t> index(editable.size(), 0);
  for (size_t n = 0; n < total; ++n) {
    RuleEnv env = base;
    Candidate c;
    c.order = index;
    for (size_t i = 0; i < editable.size(); ++i) {
      const Scalar& v = domains[i][index[i]];
      BoundValue& bound = env.values.at(editable[i]);
      if (bound.value != v) {
        c.deviation += ScalarDeviation(bound.value, v);
        c.edits.push_back(Edit::SetValue(bound.path, v, rule.id));
        c.paths.push_back(bound.path.ToString());
        bound.value = v;
      }
    }
    if (!c.edits.empty()) {
      Verdict verdict = EvaluateClause(rule, env);
      if (verdict.violated()) {
        c.margin = verdict.margin;
        std::sort(c.paths.begin(), c.paths.end());
        candidates.push_back(std::move(c));
      }
    }
    for (size_t i = 0; i < index.size(); ++i) {
      if (++index[i] < domains[i].size()) break;
      index[i] = 0;
    }
  }
  std::sort(
      candidates.begin(), candidates.end(),
      [](const Candidate& a, const Candidate& b) { return a.Key() < b.Key(); });
  for (Candidate& c : candidates) {
    // The environment-level verdict is confirmed on the whole message, since
    // an existential reference may be satisfied by another instance.
    absl::StatusOr<DecodedMessage> mutated = ApplyEdits(seed, c.edits);
    if (!mutated.ok() || !Evaluate(rule, *mutated).violated()) continue;
    std::vector<std::string> parts;
    for (const Edit& e : c.edits) {
      parts.push_back(
          absl::StrCat(e.path.ToString(), "=", ScalarToString(*e.value)));
    }
    std::optional<TestCase> tc = Materialize(
        seed, c.edits, absl::StrCat(rule.id, "@", absl::StrJoin(parts, ",")),
        rule.id, ClassOf(rule), seed_ref);
    if (!tc) continue;
    PlanOutcome out;
    out.cases.push_back(*std::move(tc));
    return out;
  }
  return PlanOutcome::Infeasible(
      "no violating assignment within the field domains");
}

std::vector<TestCase> PlanEnumeration(const DecodedMessage& seed,
                                      const FieldPair& pair,
                                      std::string_view seed_ref) {
  auto first = [&](const FieldPath& pattern) -> const LeafEntry* {
    for (const LeafEntry& e : seed.flat()) {
      if (e.present && e.value && e.pattern == pattern) return &e;
    }
    return nullptr;
  };
  const LeafEntry* a = first(pair.a);
  const LeafEntry* b = first(pair.b);
  if (a == nullptr || b == nullptr) return {};
  const FieldKind* ka = PatternKind(seed.schema(), pair.a);
  const FieldKind* kb = PatternKind(seed.schema(), pair.b);
  if (ka == nullptr || kb == nullptr) return {};
  const size_t unlimited = std::numeric_limits<size_t>::max();
  const std::vector<Scalar> da = *EnumerateDomain(*ka, unlimited);
  const std::vector<Scalar> db = *EnumerateDomain(*kb, unlimited);
  const ConstraintClass cls =
      pair.inter() ? ConstraintClass::kInter : ConstraintClass::kIntra;
  std::vector<TestCase> out;
  out.reserve(da.size() * db.size());
  for (const Scalar& va : da) {
    for (const Scalar& vb : db) {
      std::vector<Edit> edits = {
          Edit::SetValue(a->path, va, std::string(kEnumBaselineId)),
          Edit::SetValue(b->path, vb, std::string(kEnumBaselineId))};
      std::optional<TestCase> tc = Materialize(
          seed, std::move(edits),
          absl::StrCat(std::string(kEnumBaselineId), "@", a->path.ToString(),
                       "=", ScalarToString(va), ",", b->path.ToString(), "=",
                       ScalarToString(vb)),
          std::string(kEnumBaselineId), cls, seed_ref);
      if (tc) out.push_back(*std::move(tc));
    }
  }
  return out;
}

absl::StatusOr<uint64_t> EnumerationSize(const Schema& schema,
                                         const FieldPair& pair) {
  const FieldKind* ka = PatternKind(schema, pair.a);
  const FieldKind* kb = PatternKind(schema, pair.b);
  if (ka == nullptr || kb == nullptr) {
    return absl::InvalidArgumentError(
        absl::StrCat("not a leaf pair: ", pair.ToString()));
  }
  auto size = [](const FieldKind& k) -> uint64_t {
    switch (k.tag) {
      case FieldKind::Tag::kInt:
        return static_cast<uint64_t>(k.hi - k.lo) + 1;
      case FieldKind::Tag::kEnum:
        return k.labels.size();
      case FieldKind::Tag::kBool:
        return 2;
      default:
        return 0;
    }
  };
  return size(*ka) * size(*kb);
}

}  // namespace semprobe
