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

#include "semprobe/rule_induction.h"

#include <algorithm>
#include <atomic>
#include <map>
#include <regex>
#include <set>
#include <thread>
#include <utility>

#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_replace.h"
#include "absl/strings/str_split.h"
#include "semprobe/dsl_evaluate.h"
#include "semprobe/dsl_normalize.h"
#include "semprobe/dsl_parser.h"

namespace semprobe {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr size_t kDomainEnumLimit = 4096;
constexpr size_t kAssignmentLimit = 200000;

std::string Trim(std::string_view s) {
  return std::string(
      absl::StripAsciiWhitespace(absl::string_view(s.data(), s.size())));
}

std::string DslLiteral(const std::string& token) {
  const bool numeric =
      !token.empty() && std::all_of(token.begin(), token.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c));
      });
  return numeric ? token : absl::StrCat("'", token, "'");
}

class Mock : public InducerClient {
 public:
  explicit Mock(const Schema& schema) : schema_(schema) {}

  absl::StatusOr<std::string> Propose(const EvidencePackage& pkg,
                                      std::string_view) override {
    static const std::regex kAssociate(R"(associate\b.*\bby ([A-Za-z][\w-]*))");
    static const std::regex kSetIf(
        R"(([A-Za-z][\w-]*) shall be set to ([\w-]+) if ([A-Za-z][\w-]*) is ([\w-]+))");
    static const std::regex kAtLeast(
        R"(([A-Za-z][\w-]*) shall be at least ([A-Za-z][\w-]*|\d+)(?: minus (\d+))?)");
    const std::string id_a = FieldIdentifier(schema_, pkg.pair.a);
    const std::string id_b = FieldIdentifier(schema_, pkg.pair.b);
    auto is_pair = [&](const std::string& f, const std::string& g) {
      return (f == id_a && g == id_b) || (f == id_b && g == id_a);
    };
    const std::string scope =
        pkg.scope.inter ? absl::StrCat("INTER(", pkg.scope.ies[0], ", ",
                                       pkg.scope.ies[1], ")")
                        : absl::StrCat("INTRA(", pkg.scope.ies[0], ")");
    for (const Snippet& snippet : pkg.snippets) {
      std::vector<std::string> lines;
      for (absl::string_view l : absl::StrSplit(snippet.text, '\n')) {
        lines.emplace_back(l);
      }
      for (const std::string& line : lines) {
        std::smatch m;
        std::string type;
        std::string clause;
        if (pkg.scope.inter && std::regex_search(line, m, kAssociate) &&
            (m[1] == id_a || m[1] == id_b)) {
          type = "ValueDependency";
          clause = absl::StrCat("MATCH(", pkg.pair.a.ToString(), ", ",
                                pkg.pair.b.ToString(), ")");
        } else if (!pkg.scope.inter && std::regex_search(line, m, kSetIf) &&
                   is_pair(m[1], m[3])) {
          type = "ValueDependency";
          clause =
              absl::StrCat("IMPLIES(EQ(", m[3].str(), ", ", DslLiteral(m[4]),
                           "); EQ(", m[1].str(), ", ", DslLiteral(m[2]), "))");
        } else if (!pkg.scope.inter && std::regex_search(line, m, kAtLeast) &&
                   is_pair(m[1], m[2])) {
          type = "RangeAlignment";
          clause = absl::StrCat("GE(", m[1].str(), ", ", m[2].str());
          if (m[3].matched) absl::StrAppend(&clause, " - ", m[3].str());
          clause += ")";
        } else {
          continue;
        }
        ordered_json out{
            {"result", "RULE"},
            {"type", type},
            {"dsl", absl::StrCat(scope, ": ", clause)},
            {"citations", {{{"doc", snippet.doc}, {"quote", line}}}}};
        return out.dump();
      }
    }
    return std::string(kNoRule);
  }

 private:
  const Schema& schema_;
};

bool HasCategory(std::string_view text, std::string_view category) {
  for (const std::string& k : MatchKeywords(text)) {
    if (absl::StartsWith(k, absl::StrCat(std::string(category), ":")))
      return true;
  }
  return false;
}

// True when some assignment over the rule's field domains satisfies it.
// nullopt when the domains are too large to enumerate.
std::optional<bool> Satisfiable(const ConstraintRule& rule,
                                const Schema& schema) {
  std::vector<FieldPath> fields = rule.Fields();
  std::sort(fields.begin(), fields.end());
  fields.erase(std::unique(fields.begin(), fields.end()), fields.end());
  std::vector<std::vector<Scalar>> domains;
  size_t total = 1;
  for (const FieldPath& f : fields) {
    const FieldKind* kind = PatternKind(schema, f);
    if (kind == nullptr) return false;
    std::optional<std::vector<Scalar>> d =
        EnumerateDomain(*kind, kDomainEnumLimit);
    if (!d || d->empty()) return std::nullopt;
    total *= d->size();
    if (total > kAssignmentLimit) return std::nullopt;
    domains.push_back(*std::move(d));
  }
  std::vector<size_t> index(fields.size(), 0);
  for (size_t n = 0; n < total; ++n) {
    RuleEnv env;
    for (size_t i = 0; i < fields.size(); ++i) {
      env.values.emplace(fields[i],
                         BoundValue{fields[i], domains[i][index[i]]});
    }
    if (EvaluateClause(rule, env).satisfied()) return true;
    for (size_t i = 0; i < index.size(); ++i) {
      if (++index[i] < domains[i].size()) break;
      index[i] = 0;
    }
  }
  return false;
}

// Model output is untrusted: a missing or non-string member reads as "".
std::string StringField(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  return it != j.end() && it->is_string() ? it->get<std::string>() : "";
}

bool IsNoRule(const std::string& candidate) {
  return Trim(candidate) == kNoRule;
}

}  // namespace

std::unique_ptr<InducerClient> MockInducer(const Schema& schema) {
  return std::make_unique<Mock>(schema);
}

std::string RenderPrompt(std::string_view tmpl, const EvidencePackage& pkg) {
  std::string snippets;
  for (const Snippet& s : pkg.snippets) {
    absl::StrAppend(&snippets, "[", s.doc, ":", s.first_line, "-", s.last_line,
                    "]\n", s.text, "\n");
  }
  if (snippets.empty()) snippets = "(none)\n";
  return absl::StrReplaceAll(absl::string_view(tmpl.data(), tmpl.size()),
                             {{"{{ie}}", absl::StrJoin(pkg.scope.ies, ", ")},
                              {"{{field_a}}", pkg.pair.a.ToString()},
                              {"{{field_b}}", pkg.pair.b.ToString()},
                              {"{{asn1}}", pkg.asn1_block},
                              {"{{snippets}}", snippets}});
}

std::string_view GateStatusName(GateStatus s) {
  switch (s) {
    case GateStatus::kPass:
      return "pass";
    case GateStatus::kFail:
      return "fail";
    case GateStatus::kSkip:
      return "skip";
  }
  return "?";
}

const std::vector<std::string>& GateNames() {
  static const auto* kNames = new std::vector<std::string>{
      "evidence-citation", "normative-wording", "scope",
      "direction-trigger", "dsl-wellformed",    "domain-validity"};
  return *kNames;
}

ordered_json GateReport::ToJson() const {
  ordered_json j;
  j["pair"] = {pair.a.ToString(), pair.b.ToString()};
  j["candidate"] = candidate;
  j["gates"] = ordered_json::array();
  for (const GateResult& g : gates) {
    j["gates"].push_back(
        ordered_json{{"gate", g.gate},
                     {"status", std::string(GateStatusName(g.status))},
                     {"detail", g.detail}});
  }
  j["accepted"] = accepted;
  j["reason"] = reason;
  return j;
}

InductionResult CheckCandidate(const EvidencePackage& pkg,
                               std::string_view candidate,
                               const Schema& schema) {
  InductionResult out;
  GateReport& report = out.report;
  report.pair = pkg.pair;
  report.candidate = std::string(candidate);
  std::map<std::string, GateResult> gates;
  for (const std::string& name : GateNames())
    gates[name] = GateResult{name, GateStatus::kSkip, ""};
  auto finish = [&](std::string reason) {
    for (const std::string& name : GateNames())
      report.gates.push_back(gates[name]);
    report.accepted = std::all_of(
        report.gates.begin(), report.gates.end(),
        [](const GateResult& g) { return g.status == GateStatus::kPass; });
    if (report.accepted) {
      report.reason = "accepted";
      return;
    }
    report.reason = std::move(reason);
    if (report.reason.empty()) {
      for (const GateResult& g : report.gates) {
        if (g.status == GateStatus::kFail) {
          report.reason = absl::StrCat(g.gate, ": ", g.detail);
          break;
        }
      }
    }
    out.rule.reset();
  };
  auto fail = [&](const std::string& gate, std::string detail) {
    gates[gate].status = GateStatus::kFail;
    gates[gate].detail = std::move(detail);
  };
  auto pass = [&](const std::string& gate, std::string detail = "") {
    gates[gate].status = GateStatus::kPass;
    gates[gate].detail = std::move(detail);
  };

  const std::string text(candidate);
  if (IsNoRule(text)) {
    finish("client returned NO_RULE");
    return out;
  }
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    fail("dsl-wellformed", "candidate is neither NO_RULE nor a JSON object");
    finish("");
    return out;
  }
  if (StringField(j, "result") == kNoRule) {
    finish("client returned NO_RULE");
    return out;
  }

  // Gate 1: every citation quotes a provided snippet verbatim.
  std::vector<Citation> citations;
  if (j.contains("citations") && j["citations"].is_array()) {
    for (const nlohmann::json& c : j["citations"]) {
      if (!c.is_object()) continue;
      citations.push_back(
          Citation{StringField(c, "doc"), StringField(c, "quote")});
    }
  }
  std::string uncited;
  for (const Citation& c : citations) {
    bool found = false;
    for (const Snippet& s : pkg.snippets) {
      if (s.doc == c.doc && !c.quote.empty() &&
          s.text.find(c.quote) != std::string::npos) {
        found = true;
        break;
      }
    }
    if (!found) uncited = c.quote;
  }
  const bool cited = !citations.empty() && uncited.empty();
  if (citations.empty()) {
    fail("evidence-citation", "no citation");
  } else if (!uncited.empty()) {
    fail("evidence-citation",
         absl::StrCat("not in any snippet: \"", uncited, "\""));
  } else {
    pass("evidence-citation");
  }

  // Gate 2: the cited text itself carries a mandatory or conditional cue.
  bool conditional = false;
  if (cited) {
    bool normative = true;
    for (const Citation& c : citations) {
      conditional = conditional || HasCategory(c.quote, "conditional");
      normative = normative && (HasCategory(c.quote, "mandatory") ||
                                HasCategory(c.quote, "conditional"));
    }
    if (normative) {
      pass("normative-wording");
    } else {
      fail("normative-wording",
           "citation lacks mandatory or conditional wording");
    }
  }

  // Gate 5 first, since scope and trigger read the rule.
  const std::string dsl = StringField(j, "dsl");
  absl::StatusOr<ConstraintRule> parsed = ParseRule(dsl);
  std::optional<ConstraintRule> rule;
  if (!parsed.ok()) {
    fail("dsl-wellformed", std::string(parsed.status().message()));
  } else {
    NormalizeResult n = Normalize(*parsed, schema);
    const std::string type = StringField(j, "type");
    if (!n.ok()) {
      fail("dsl-wellformed", absl::StrCat("NO_RULE: ", n.reason));
    } else if (!type.empty() && type != FamilyName(n.rule->family)) {
      fail("dsl-wellformed",
           absl::StrCat("type ", type, " but clause is ",
                        std::string(FamilyName(n.rule->family))));
    } else {
      pass("dsl-wellformed");
      rule = std::move(n.rule);
    }
  }

  // Gate 3: declared scope and every bound field stay inside the package.
  if (parsed.ok()) {
    std::string outside;
    for (const std::string& ie : parsed->scope.ies) {
      if (std::find(pkg.scope.ies.begin(), pkg.scope.ies.end(), ie) ==
          pkg.scope.ies.end()) {
        outside = ie;
      }
    }
    if (rule) {
      for (const FieldPath& f : rule->Fields()) {
        if (f != pkg.pair.a && f != pkg.pair.b) outside = f.ToString();
      }
    }
    if (outside.empty()) {
      pass("scope");
    } else {
      fail("scope", absl::StrCat(outside, " is outside the package"));
    }
  }

  // Gate 4: conditional evidence must yield an IMPLIES clause.
  if (parsed.ok() && cited) {
    if (conditional && !parsed->is_implies()) {
      fail("direction-trigger", "conditional evidence but no IMPLIES form");
    } else {
      pass("direction-trigger");
    }
  }

  // Gate 6: literals are domain-valid (normalization coerced them) and the
  // clause admits at least one assignment.
  if (rule) {
    std::optional<bool> sat = Satisfiable(*rule, schema);
    if (!sat) {
      pass("domain-validity", "domains too large to enumerate");
    } else if (*sat) {
      pass("domain-validity");
    } else {
      fail("domain-validity",
           "no assignment within the declared domains satisfies it");
    }
  }

  if (rule) {
    rule->provenance = Provenance::kInduced;
    rule->citations = citations;
    out.rule = std::move(rule);
  }
  finish("");
  return out;
}

absl::StatusOr<InductionResult> Induce(const EvidencePackage& pkg,
                                       InducerClient& client,
                                       const Schema& schema,
                                       std::string_view prompt_template) {
  const std::string prompt =
      prompt_template.empty() ? "" : RenderPrompt(prompt_template, pkg);
  absl::StatusOr<std::string> candidate = client.Propose(pkg, prompt);
  if (!candidate.ok()) return candidate.status();
  return CheckCandidate(pkg, *candidate, schema);
}

ordered_json InductionStats::ToJson() const {
  return ordered_json{{"pairs", pairs},
                      {"candidates", candidates},
                      {"accepted", accepted},
                      {"no_rule", no_rule},
                      {"transport_failures", transport_failures}};
}

BatchResult BatchInduce(std::vector<FieldPair> pairs, const Corpus& corpus,
                        EvidenceMode mode, InducerClient& client,
                        const Schema& schema, const BatchOptions& options) {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  std::vector<absl::StatusOr<InductionResult>> results(
      pairs.size(), absl::UnknownError("not run"));
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < pairs.size(); i = next++) {
      const EvidencePackage pkg = ScanEvidence(schema, corpus, pairs[i], mode);
      results[i] = Induce(pkg, client, schema, options.prompt_template);
    }
  };
  const int n = std::max(1, options.parallelism);
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < n; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }

  BatchResult out;
  std::map<std::string, ConstraintRule> by_id;
  out.stats.pairs = static_cast<int64_t>(pairs.size());
  for (size_t i = 0; i < pairs.size(); ++i) {
    if (!results[i].ok()) {
      ++out.stats.transport_failures;
      out.failures.push_back(TransportFailure{
          pairs[i], std::string(results[i].status().message())});
      continue;
    }
    InductionResult& r = *results[i];
    if (!IsNoRule(r.report.candidate)) {
      nlohmann::json j =
          nlohmann::json::parse(r.report.candidate, nullptr, false);
      const bool said_no = j.is_object() && StringField(j, "result") == kNoRule;
      if (!said_no) ++out.stats.candidates;
    }
    if (r.rule) {
      ++out.stats.accepted;
      by_id.emplace(r.rule->id, *r.rule);
    } else {
      ++out.stats.no_rule;
    }
    out.reports.push_back(std::move(r.report));
  }
  for (auto& [id, rule] : by_id) out.rules.push_back(std::move(rule));
  return out;
}

}  // namespace semprobe
