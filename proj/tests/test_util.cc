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

#include "test_util.h"

#include "absl/strings/str_split.h"
#include "semprobe/dsl_evaluate.h"
#include "semprobe/rule_set.h"
#include "semprobe/ue_sim.h"
#include "semprobe/wire_codec.h"

namespace semprobe::testing {

namespace {

using json = nlohmann::json;

void OracleWalk(const json& fields, const std::string& prefix,
                std::map<std::string, std::string>& out);

void OracleKind(const json& kind, const std::string& path,
                std::map<std::string, std::string>& out) {
  if (kind.contains("int")) {
    out[path] = "Int(" + std::to_string(kind["int"]["lo"].get<int64_t>()) +
                "," + std::to_string(kind["int"]["hi"].get<int64_t>()) + ")";
  } else if (kind.contains("enum")) {
    std::string s = "Enum(";
    bool first = true;
    for (const json& l : kind["enum"]) {
      if (!first) s += ",";
      s += l.get<std::string>();
      first = false;
    }
    out[path] = s + ")";
  } else if (kind.contains("bool")) {
    out[path] = "Bool";
  } else if (kind.contains("choice")) {
    for (const json& alt : kind["choice"]) {
      OracleKind(alt["kind"], path + "." + alt["name"].get<std::string>(), out);
    }
  } else if (kind.contains("seqOf")) {
    OracleKind(kind["seqOf"]["element"], path + "[*]", out);
  } else if (kind.contains("nested") && kind["nested"].is_object()) {
    OracleWalk(kind["nested"]["fields"], path, out);
  }
}

void OracleWalk(const json& fields, const std::string& prefix,
                std::map<std::string, std::string>& out) {
  for (const json& f : fields) {
    OracleKind(f["kind"], prefix + "." + f["name"].get<std::string>(), out);
  }
}

void OptionalWalk(const json& fields, const std::string& prefix,
                  std::map<std::string, std::string>& out) {
  for (const json& f : fields) {
    const std::string path = prefix + "." + f["name"].get<std::string>();
    if (f.value("optional", false)) out[path] = f.value("need", "");
    json kind = f["kind"];
    std::string at = path;
    if (kind.contains("seqOf")) {
      kind = kind["seqOf"]["element"];
      at += "[*]";
    }
    if (kind.contains("nested") && kind["nested"].is_object()) {
      OptionalWalk(kind["nested"]["fields"], at, out);
    }
  }
}

}  // namespace

std::map<std::string, std::string> OracleLeafDomains(const json& raw) {
  std::map<std::string, std::string> out;
  for (const json& ie : raw["ies"]) {
    OracleWalk(ie["fields"], ie["name"].get<std::string>(), out);
  }
  return out;
}

std::map<std::string, std::string> OracleOptionalFields(const json& raw) {
  std::map<std::string, std::string> out;
  for (const json& ie : raw["ies"]) {
    OptionalWalk(ie["fields"], ie["name"].get<std::string>(), out);
  }
  return out;
}

std::filesystem::path AssetDir() { return SEMPROBE_TEST_ASSET_DIR; }

std::shared_ptr<const Schema> MiniSchema() {
  static const std::shared_ptr<const Schema> schema =
      Must(LoadSharedSchema(AssetDir() / "mini-rrc.json"));
  return schema;
}

Value SeedTree() {
  static const Value tree = Must(MessageFromJson(
      *MiniSchema(),
      Must(ReadJsonFile(AssetDir() / "seeds/seed_rrcsetup.json"))));
  return tree;
}

DecodedMessage SeedMessage() {
  return Must(DecodedMessage::FromTree(MiniSchema(), SeedTree()));
}

std::vector<uint8_t> SeedBytes() {
  return Must(Encode(*MiniSchema(), SeedTree(), EncodeMode::kChecked));
}

FieldPath P(const std::string& text) { return FieldPath::FromString(text); }

Value RandomValue(const Schema& schema, const FieldKind& kind,
                  std::mt19937_64& rng) {
  switch (kind.tag) {
    case FieldKind::Tag::kInt:
      return Value::Int(
          std::uniform_int_distribution<int64_t>(kind.lo, kind.hi)(rng));
    case FieldKind::Tag::kEnum:
      return Value::Enum(kind.labels[std::uniform_int_distribution<size_t>(
          0, kind.labels.size() - 1)(rng)]);
    case FieldKind::Tag::kBool:
      return Value::Bool(std::uniform_int_distribution<int>(0, 1)(rng) == 1);
    case FieldKind::Tag::kChoice: {
      const Alternative& alt =
          kind.alternatives[std::uniform_int_distribution<size_t>(
              0, kind.alternatives.size() - 1)(rng)];
      return Value::Choice(alt.name, RandomValue(schema, alt.kind, rng));
    }
    case FieldKind::Tag::kSeqOf: {
      const int64_t n =
          std::uniform_int_distribution<int64_t>(kind.lo, kind.hi)(rng);
      std::vector<Value> items;
      for (int64_t i = 0; i < n; ++i) {
        items.push_back(RandomValue(schema, *kind.element, rng));
      }
      return Value::List(std::move(items));
    }
    case FieldKind::Tag::kNested: {
      Value record = Value::Record();
      for (const FieldDef& f : schema.FieldsOf(kind)) {
        if (f.optional && std::uniform_int_distribution<int>(0, 1)(rng) == 0) {
          continue;
        }
        record.AppendMember(f.name, RandomValue(schema, f.kind, rng));
      }
      return record;
    }
  }
  return Value();
}

Value RandomMessage(const Schema& schema, std::mt19937_64& rng) {
  return RandomValue(schema, RootKind(schema), rng);
}

CampaignInputs BundledInputs(const std::string& profile) {
  CampaignInputs in;
  in.schema = MiniSchema();
  in.corpus = Must(Corpus::Load(AssetDir() / "corpus/corpus.json"));
  in.seeds.push_back(
      Must(LoadSeed(in.schema, AssetDir() / "seeds", "seed_rrcsetup")));
  in.profile = Must(
      LoadProfile(AssetDir() / "profiles" / (profile + ".json"), *in.schema));
  in.target_rules =
      Must(ValidatorRuleSet(*in.schema, AssetDir() / "rules/mini_rules.dsl"));
  return in;
}

ToolConfig BundledConfig() {
  return Must(LoadToolConfig(AssetDir() / "config.json"));
}

// Values of an oracle domain text, in declaration order.
std::vector<Scalar> OracleValues(const std::string& text) {
  std::vector<Scalar> out;
  if (text == "Bool") return {Scalar(false), Scalar(true)};
  const size_t open = text.find('(');
  const std::string inner = text.substr(open + 1, text.size() - open - 2);
  if (text.rfind("Int", 0) == 0) {
    const std::vector<std::string> lohi = absl::StrSplit(inner, ',');
    for (int64_t v = std::stoll(lohi[0]); v <= std::stoll(lohi[1]); ++v) {
      out.emplace_back(v);
    }
  } else {
    for (absl::string_view l : absl::StrSplit(inner, ','))
      out.emplace_back(std::string(l));
  }
  return out;
}

int64_t OracleDeviation(const Scalar& from, const Scalar& to) {
  if (from == to) return 0;
  if (std::holds_alternative<int64_t>(from)) {
    return std::abs(std::get<int64_t>(to) - std::get<int64_t>(from));
  }
  return 1;
}

absl::StatusOr<int64_t> OracleMinDeviation(const DecodedMessage& seed,
                                           const ConstraintRule& rule) {
  static const auto* domains = new std::map<std::string, std::string>(
      OracleLeafDomains(Must(ReadJsonFile(AssetDir() / "mini-rrc.json"))));
  std::vector<const LeafEntry*> leaves;
  for (const FieldPath& f : rule.Fields()) {
    for (const LeafEntry& leaf : seed.flat()) {
      if (leaf.present && leaf.pattern == f) {
        leaves.push_back(&leaf);
        break;
      }
    }
  }
  if (leaves.size() != rule.Fields().size()) {
    return absl::NotFoundError("a rule field is absent from the seed");
  }
  std::vector<std::vector<Scalar>> values;
  for (const LeafEntry* leaf : leaves) {
    values.push_back(OracleValues(domains->at(leaf->pattern.ToString())));
  }
  std::optional<int64_t> best;
  std::vector<size_t> idx(leaves.size(), 0);
  while (true) {
    std::vector<Edit> edits;
    int64_t dev = 0;
    for (size_t k = 0; k < leaves.size(); ++k) {
      const Scalar& v = values[k][idx[k]];
      if (v != *leaves[k]->value) {
        edits.push_back(Edit::SetValue(leaves[k]->path, v));
        dev += OracleDeviation(*leaves[k]->value, v);
      }
    }
    if (!best || dev < *best) {
      absl::StatusOr<DecodedMessage> m = ApplyEdits(seed, edits);
      if (m.ok() && Evaluate(rule, *m).violated()) best = dev;
    }
    size_t k = 0;
    while (k < idx.size() && ++idx[k] == values[k].size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  if (!best) return absl::NotFoundError("no violating assignment");
  return *best;
}

}  // namespace semprobe::testing
