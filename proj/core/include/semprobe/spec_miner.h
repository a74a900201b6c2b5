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

#ifndef SEMPROBE_SPEC_MINER_H_
#define SEMPROBE_SPEC_MINER_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "nlohmann/json.hpp"
#include "semprobe/dsl_ast.h"
#include "semprobe/field_path.h"
#include "semprobe/rational.h"
#include "semprobe/schema.h"

namespace semprobe {

enum class DocRole { kSchemaDoc, kCrossDoc };

struct CorpusDoc {
  std::string id;
  DocRole role = DocRole::kSchemaDoc;
  std::vector<std::string> lines;  // line k is lines[k - 1]
};

struct Corpus {
  std::vector<CorpusDoc> docs;  // ids unique

  // Manifest: {"docs":[{"id", "role":"schema-doc"|"crossdoc", "path"}]},
  // paths relative to the manifest.
  static absl::StatusOr<Corpus> Load(const std::filesystem::path& manifest);
  const CorpusDoc* Find(std::string_view id) const;
};

enum class EvidenceMode { kFull, kNoCrossDocs, kAsn1Only };

std::string_view EvidenceModeName(EvidenceMode mode);
absl::StatusOr<EvidenceMode> ParseEvidenceMode(std::string_view text);

// Two IE-qualified leaf patterns. Intra when both share the first segment.
struct FieldPair {
  FieldPath a;
  FieldPath b;

  bool inter() const;
  std::string ToString() const;
  friend auto operator<=>(const FieldPair&, const FieldPair&) = default;
  friend bool operator==(const FieldPair&, const FieldPair&) = default;
};

struct SurfaceForm {
  std::string text;
  bool weak = false;  // alias-table abbreviation; never enough on its own

  friend bool operator==(const SurfaceForm&, const SurfaceForm&) = default;
};

// Verbatim, split lowercase words, hyphenated, then weak aliases from the
// schema alias table. Forms equal up to case appear once.
std::vector<SurfaceForm> SurfaceForms(
    std::string_view identifier,
    const std::map<std::string, std::vector<std::string>>& aliases = {});

// Name under which a leaf pattern appears in prose: its last field segment,
// skipping trailing choice alternatives.
std::string FieldIdentifier(const Schema& schema, const FieldPath& pattern);

struct KeywordCategory {
  std::string name;
  std::vector<std::string> cues;
};

// mandatory, conditional, dependency, reference.
const std::vector<KeywordCategory>& KeywordCategories();

// Cues found in `text`, case-insensitive on word boundaries, as
// "category:cue" in category order.
std::vector<std::string> MatchKeywords(std::string_view text);

// Case-insensitive occurrence of `form` delimited by non-identifier
// characters.
bool ContainsForm(std::string_view text, std::string_view form);

struct Snippet {
  std::string doc;
  int first_line = 0;  // 1-based, inclusive
  int last_line = 0;
  std::string text;  // verbatim lines joined by '\n'
  std::vector<std::string> keywords;

  friend bool operator==(const Snippet&, const Snippet&) = default;
};

struct EvidencePackage {
  FieldPair pair;
  Scope scope;
  std::string asn1_block;
  std::vector<Snippet> snippets;
  // Pattern text to the forms matched across the retained snippets.
  std::map<std::string, std::vector<std::string>> field_mentions;

  nlohmann::ordered_json ToJson() const;
  static absl::StatusOr<EvidencePackage> FromJson(const nlohmann::json& j);
  friend bool operator==(const EvidencePackage&,
                         const EvidencePackage&) = default;
};

struct CoverageReport {
  std::vector<std::string> selected;  // in selection order
  Rational covered_fraction = 0;
  int64_t pairs = 0;  // sum over selected IEs of C(leaves, 2)

  nlohmann::ordered_json ToJson() const;
};

// Distinct IE-relative leaf paths of `ie`; the set-cover elements.
std::vector<std::string> CoverElements(const Schema& schema,
                                       std::string_view ie);

// Greedy set cover over the IE-relative leaf paths; ties go to the smaller
// IE name and an IE with zero marginal gain is never taken.
CoverageReport SelectIntraIes(const Schema& schema, size_t budget);

struct ReferenceField {
  FieldPath field;  // IE-qualified referencing leaf
  std::string target_ie;

  friend bool operator==(const ReferenceField&,
                         const ReferenceField&) = default;
};

// Leaves named <Base>Id / <Base>ID whose base names another IE, compared
// case- and hyphen-insensitively. A field naming its own IE is a definition,
// not a reference.
std::vector<ReferenceField> FindReferenceFields(const Schema& schema);

// All leaf pairs inside each listed IE, sorted.
std::vector<FieldPair> IntraPairs(const Schema& schema,
                                  const std::vector<std::string>& ies);
// (reference, defining identifier of the target IE), sorted.
std::vector<FieldPair> ReferencePairs(const Schema& schema);

// Keyword windows of +-2 lines kept only when both fields co-occur under
// strong surface forms (and, across IEs, both IEs are named).
EvidencePackage ScanEvidence(const Schema& schema, const Corpus& corpus,
                             const FieldPair& pair, EvidenceMode mode);

}  // namespace semprobe

#endif  // SEMPROBE_SPEC_MINER_H_
