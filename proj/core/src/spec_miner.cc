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

#include "semprobe/spec_miner.h"

#include <algorithm>
#include <cctype>
#include <set>
#include <utility>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "semprobe/dsl_evaluate.h"

namespace semprobe {
namespace {

using ordered_json = nlohmann::ordered_json;

bool IsIdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
}

std::string Lower(std::string_view s) {
  return absl::AsciiStrToLower(absl::string_view(s.data(), s.size()));
}

// "nrofSRS-Ports" -> {nrof, srs, ports}.
std::vector<std::string> SplitWords(std::string_view identifier) {
  std::vector<std::string> words;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) words.push_back(Lower(cur));
    cur.clear();
  };
  for (size_t i = 0; i < identifier.size(); ++i) {
    const char c = identifier[i];
    if (c == '-' || c == '_' || c == ' ') {
      flush();
      continue;
    }
    const bool upper = std::isupper(static_cast<unsigned char>(c));
    if (upper && !cur.empty()) {
      const char prev = cur.back();
      const bool prev_upper = std::isupper(static_cast<unsigned char>(prev));
      const bool next_lower =
          i + 1 < identifier.size() &&
          std::islower(static_cast<unsigned char>(identifier[i + 1]));
      if (!prev_upper || next_lower) flush();
    }
    cur.push_back(c);
  }
  flush();
  return words;
}

std::string NormalizedName(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '-' || c == '_') continue;
    out.push_back(
        static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

bool MentionedStrongly(std::string_view text,
                       const std::vector<SurfaceForm>& forms) {
  for (const SurfaceForm& f : forms) {
    if (!f.weak && ContainsForm(text, f.text)) return true;
  }
  return false;
}

bool Mentioned(std::string_view text, const std::vector<SurfaceForm>& forms) {
  for (const SurfaceForm& f : forms) {
    if (ContainsForm(text, f.text)) return true;
  }
  return false;
}

const std::string& IeOf(const FieldPath& p) {
  return p.segments().front().name;
}

}  // namespace

absl::StatusOr<Corpus> Corpus::Load(const std::filesystem::path& manifest) {
  absl::StatusOr<nlohmann::json> j = ReadJsonFile(manifest);
  if (!j.ok()) return j.status();
  if (!j->is_object() || !j->contains("docs") || !(*j)["docs"].is_array()) {
    return absl::InvalidArgumentError(
        absl::StrCat(manifest.string(), ": manifest needs a 'docs' array"));
  }
  Corpus out;
  std::set<std::string> ids;
  for (const nlohmann::json& d : (*j)["docs"]) {
    CorpusDoc doc;
    doc.id = d.value("id", "");
    const std::string role = d.value("role", "");
    if (role == "schema-doc") {
      doc.role = DocRole::kSchemaDoc;
    } else if (role == "crossdoc") {
      doc.role = DocRole::kCrossDoc;
    } else {
      return absl::InvalidArgumentError(
          absl::StrCat("doc '", doc.id, "': unknown role '", role, "'"));
    }
    if (doc.id.empty() || !ids.insert(doc.id).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("doc id '", doc.id, "' is empty or repeated"));
    }
    absl::StatusOr<std::string> text =
        ReadTextFile(manifest.parent_path() / d.value("path", ""));
    if (!text.ok()) return text.status();
    for (absl::string_view line : absl::StrSplit(*text, '\n')) {
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      doc.lines.emplace_back(line);
    }
    if (!doc.lines.empty() && doc.lines.back().empty()) doc.lines.pop_back();
    out.docs.push_back(std::move(doc));
  }
  return out;
}

const CorpusDoc* Corpus::Find(std::string_view id) const {
  for (const CorpusDoc& d : docs) {
    if (d.id == id) return &d;
  }
  return nullptr;
}

std::string_view EvidenceModeName(EvidenceMode mode) {
  switch (mode) {
    case EvidenceMode::kFull:
      return "full";
    case EvidenceMode::kNoCrossDocs:
      return "no-crossdocs";
    case EvidenceMode::kAsn1Only:
      return "asn1-only";
  }
  return "?";
}

absl::StatusOr<EvidenceMode> ParseEvidenceMode(std::string_view text) {
  for (EvidenceMode m : {EvidenceMode::kFull, EvidenceMode::kNoCrossDocs,
                         EvidenceMode::kAsn1Only}) {
    if (EvidenceModeName(m) == text) return m;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown evidence mode '", std::string(text), "'"));
}

bool FieldPair::inter() const { return IeOf(a) != IeOf(b); }

std::string FieldPair::ToString() const {
  return absl::StrCat(a.ToString(), " ~ ", b.ToString());
}

std::vector<SurfaceForm> SurfaceForms(
    std::string_view identifier,
    const std::map<std::string, std::vector<std::string>>& aliases) {
  std::vector<SurfaceForm> out;
  std::set<std::string> seen;
  auto add = [&](std::string text, bool weak) {
    if (text.empty() || !seen.insert(Lower(text)).second) return;
    out.push_back(SurfaceForm{std::move(text), weak});
  };
  add(std::string(identifier), false);
  const std::vector<std::string> words = SplitWords(identifier);
  add(absl::StrJoin(words, " "), false);
  add(absl::StrJoin(words, "-"), false);
  auto alias = aliases.find(std::string(identifier));
  if (alias != aliases.end()) {
    for (const std::string& a : alias->second) add(a, true);
  }
  return out;
}

std::string FieldIdentifier(const Schema& schema, const FieldPath& pattern) {
  for (size_t n = pattern.size(); n >= 2; --n) {
    std::vector<PathSegment> head(pattern.segments().begin(),
                                  pattern.segments().begin() + n);
    absl::StatusOr<ResolvedPath> r = schema.Resolve(FieldPath(head));
    if (r.ok() && r->ends_on_field) return head.back().name;
  }
  return pattern.back().name;
}

const std::vector<KeywordCategory>& KeywordCategories() {
  static const auto* kCategories = new std::vector<KeywordCategory>{
      {"mandatory", {"shall", "must", "required"}},
      {"conditional", {"if", "when", "only if"}},
      {"dependency", {"depends on", "determined by", "according to"}},
      {"reference", {"correspond", "match", "associate with"}},
  };
  return *kCategories;
}

std::vector<std::string> MatchKeywords(std::string_view text) {
  std::vector<std::string> out;
  for (const KeywordCategory& cat : KeywordCategories()) {
    for (const std::string& cue : cat.cues) {
      if (ContainsForm(text, cue))
        out.push_back(absl::StrCat(cat.name, ":", cue));
    }
  }
  return out;
}

bool ContainsForm(std::string_view text, std::string_view form) {
  if (form.empty()) return false;
  const std::string hay = Lower(text);
  const std::string needle = Lower(form);
  for (size_t at = hay.find(needle); at != std::string::npos;
       at = hay.find(needle, at + 1)) {
    const size_t end = at + needle.size();
    const bool left = at == 0 || !IsIdentChar(hay[at - 1]);
    const bool right = end == hay.size() || !IsIdentChar(hay[end]);
    if (left && right) return true;
  }
  return false;
}

ordered_json EvidencePackage::ToJson() const {
  ordered_json j;
  j["pair"] = {pair.a.ToString(), pair.b.ToString()};
  j["scope"] = {{"kind", scope.inter ? "INTER" : "INTRA"}, {"ies", scope.ies}};
  j["asn1"] = asn1_block;
  j["snippets"] = ordered_json::array();
  for (const Snippet& s : snippets) {
    j["snippets"].push_back(ordered_json{{"doc", s.doc},
                                         {"lines", {s.first_line, s.last_line}},
                                         {"text", s.text},
                                         {"keywords", s.keywords}});
  }
  j["field_mentions"] = ordered_json::object();
  for (const auto& [field, forms] : field_mentions) {
    j["field_mentions"][field] = forms;
  }
  return j;
}

absl::StatusOr<EvidencePackage> EvidencePackage::FromJson(
    const nlohmann::json& j) {
  try {
    EvidencePackage p;
    const nlohmann::json& pair = j.at("pair");
    absl::StatusOr<FieldPath> a =
        FieldPath::Parse(pair.at(0).get<std::string>());
    absl::StatusOr<FieldPath> b =
        FieldPath::Parse(pair.at(1).get<std::string>());
    if (!a.ok()) return a.status();
    if (!b.ok()) return b.status();
    p.pair = FieldPair{*a, *b};
    p.scope.inter = j.at("scope").at("kind").get<std::string>() == "INTER";
    p.scope.ies = j.at("scope").at("ies").get<std::vector<std::string>>();
    p.asn1_block = j.at("asn1").get<std::string>();
    for (const nlohmann::json& s : j.at("snippets")) {
      p.snippets.push_back(Snippet{
          s.at("doc").get<std::string>(), s.at("lines").at(0).get<int>(),
          s.at("lines").at(1).get<int>(), s.at("text").get<std::string>(),
          s.at("keywords").get<std::vector<std::string>>()});
    }
    for (const auto& [field, forms] : j.at("field_mentions").items()) {
      p.field_mentions[field] = forms.get<std::vector<std::string>>();
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("evidence package: ", e.what()));
  }
}

ordered_json CoverageReport::ToJson() const {
  return ordered_json{{"selected", selected},
                      {"covered_fraction", covered_fraction.ToString()},
                      {"covered_percent", covered_fraction.ToDouble() * 100},
                      {"pairs", pairs}};
}

std::vector<std::string> CoverElements(const Schema& schema,
                                       std::string_view ie) {
  std::set<std::string> distinct;
  for (const LeafPattern& leaf : schema.LeafPatterns(ie)) {
    distinct.insert(leaf.relative.ToString());
  }
  return std::vector<std::string>(distinct.begin(), distinct.end());
}

CoverageReport SelectIntraIes(const Schema& schema, size_t budget) {
  std::map<std::string, std::vector<std::string>> sets;
  std::set<std::string> universe;
  for (const IEDef& ie : schema.ies()) {
    sets[ie.name] = CoverElements(schema, ie.name);
    universe.insert(sets[ie.name].begin(), sets[ie.name].end());
  }
  CoverageReport out;
  std::set<std::string> covered;
  while (out.selected.size() < budget) {
    const std::string* best = nullptr;
    size_t best_gain = 0;
    // std::map iterates names ascending, so strict > keeps the smaller name.
    for (const auto& [name, elements] : sets) {
      if (std::find(out.selected.begin(), out.selected.end(), name) !=
          out.selected.end()) {
        continue;
      }
      size_t gain = 0;
      for (const std::string& e : elements) gain += covered.count(e) == 0;
      if (gain > best_gain) {
        best = &name;
        best_gain = gain;
      }
    }
    if (best == nullptr) break;
    out.selected.push_back(*best);
    covered.insert(sets[*best].begin(), sets[*best].end());
    const int64_t n = static_cast<int64_t>(schema.LeafPatterns(*best).size());
    out.pairs += n * (n - 1) / 2;
  }
  out.covered_fraction = universe.empty()
                             ? Rational(1)
                             : Rational(static_cast<int64_t>(covered.size()),
                                        static_cast<int64_t>(universe.size()));
  return out;
}

std::vector<ReferenceField> FindReferenceFields(const Schema& schema) {
  std::vector<ReferenceField> out;
  for (const LeafPattern& leaf : schema.AllLeafPatterns()) {
    const std::string& name = leaf.relative.back().name;
    if (name.size() <= 2) continue;
    const std::string suffix = name.substr(name.size() - 2);
    if (suffix != "Id" && suffix != "ID") continue;
    const std::string base = NormalizedName(name.substr(0, name.size() - 2));
    if (base == NormalizedName(leaf.ie)) continue;  // defines its own IE
    for (const IEDef& ie : schema.ies()) {
      if (ie.name != leaf.ie && NormalizedName(ie.name) == base) {
        out.push_back(ReferenceField{leaf.Qualified(), ie.name});
      }
    }
  }
  return out;
}

std::vector<FieldPair> IntraPairs(const Schema& schema,
                                  const std::vector<std::string>& ies) {
  std::vector<FieldPair> out;
  for (const std::string& ie : ies) {
    std::vector<FieldPath> leaves;
    for (const LeafPattern& leaf : schema.LeafPatterns(ie)) {
      leaves.push_back(leaf.Qualified());
    }
    std::sort(leaves.begin(), leaves.end());
    for (size_t i = 0; i < leaves.size(); ++i) {
      for (size_t k = i + 1; k < leaves.size(); ++k) {
        out.push_back(FieldPair{leaves[i], leaves[k]});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<FieldPair> ReferencePairs(const Schema& schema) {
  std::vector<FieldPair> out;
  for (const ReferenceField& ref : FindReferenceFields(schema)) {
    for (const LeafPattern& leaf : schema.LeafPatterns(ref.target_ie)) {
      if (IsDefiningIdentifier(leaf.Qualified())) {
        out.push_back(FieldPair{ref.field, leaf.Qualified()});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

EvidencePackage ScanEvidence(const Schema& schema, const Corpus& corpus,
                             const FieldPair& pair, EvidenceMode mode) {
  EvidencePackage pkg;
  pkg.pair = pair;
  const std::string& ie_a = IeOf(pair.a);
  const std::string& ie_b = IeOf(pair.b);
  pkg.scope = pair.inter() ? Scope::Inter(ie_a, ie_b) : Scope::Intra(ie_a);
  for (const std::string& ie : pkg.scope.ies) {
    if (const IEDef* def = schema.FindIe(ie)) {
      if (!pkg.asn1_block.empty()) pkg.asn1_block += "\n";
      pkg.asn1_block += RenderAsn1(schema, *def);
    }
  }
  if (mode == EvidenceMode::kAsn1Only) return pkg;

  const std::vector<SurfaceForm> forms_a =
      SurfaceForms(FieldIdentifier(schema, pair.a), schema.aliases());
  const std::vector<SurfaceForm> forms_b =
      SurfaceForms(FieldIdentifier(schema, pair.b), schema.aliases());
  const std::vector<SurfaceForm> ie_forms_a =
      SurfaceForms(ie_a, schema.aliases());
  const std::vector<SurfaceForm> ie_forms_b =
      SurfaceForms(ie_b, schema.aliases());

  std::map<std::string, std::vector<std::string>> mentions;
  auto note = [&](const FieldPath& f, const std::vector<SurfaceForm>& forms,
                  std::string_view text) {
    std::vector<std::string>& seen = mentions[f.ToString()];
    for (const SurfaceForm& form : forms) {
      if (ContainsForm(text, form.text) &&
          std::find(seen.begin(), seen.end(), form.text) == seen.end()) {
        seen.push_back(form.text);
      }
    }
  };

  for (const CorpusDoc& doc : corpus.docs) {
    if (mode == EvidenceMode::kNoCrossDocs && doc.role == DocRole::kCrossDoc) {
      continue;
    }
    const int n = static_cast<int>(doc.lines.size());
    std::set<std::pair<int, int>> windows;
    for (int i = 1; i <= n; ++i) {
      if (MatchKeywords(doc.lines[i - 1]).empty()) continue;
      const int first = std::max(1, i - 2);
      const int last = std::min(n, i + 2);
      if (!windows.insert({first, last}).second) continue;
      std::string text = doc.lines[first - 1];
      for (int k = first + 1; k <= last; ++k) {
        absl::StrAppend(&text, "\n", doc.lines[k - 1]);
      }
      if (!MentionedStrongly(text, forms_a) ||
          !MentionedStrongly(text, forms_b)) {
        continue;
      }
      if (pair.inter() &&
          (!Mentioned(text, ie_forms_a) || !Mentioned(text, ie_forms_b))) {
        continue;
      }
      note(pair.a, forms_a, text);
      note(pair.b, forms_b, text);
      pkg.snippets.push_back(
          Snippet{doc.id, first, last, text, MatchKeywords(text)});
    }
  }
  pkg.field_mentions = std::move(mentions);
  return pkg;
}

}  // namespace semprobe
