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

#ifndef SEMPROBE_FIELD_PATH_H_
#define SEMPROBE_FIELD_PATH_H_

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace semprobe {

// One dot-separated component of a canonical path. A SeqOf component carries
// either a concrete element index (`list[2]`) or the wildcard (`list[*]`).
struct PathSegment {
  std::string name;
  std::optional<size_t> index;
  bool wildcard = false;

  bool has_subscript() const { return index.has_value() || wildcard; }
  friend bool operator==(const PathSegment&, const PathSegment&) = default;
};

// Canonical, IE-rooted field path, e.g.
//   RRCSetup.srs-Config.srs-ResourceToAddModList[0].resourceMapping.nrofSymbols
// The first segment names an IE; the rest walk fields and choice alternatives.
class FieldPath {
 public:
  FieldPath() = default;
  explicit FieldPath(std::vector<PathSegment> segments);

  static absl::StatusOr<FieldPath> Parse(std::string_view text);
  // Parse for literals known to be well-formed; aborts otherwise.
  static FieldPath FromString(std::string_view text);

  const std::vector<PathSegment>& segments() const { return segments_; }
  bool empty() const { return segments_.empty(); }
  size_t size() const { return segments_.size(); }
  const PathSegment& back() const { return segments_.back(); }

  FieldPath Child(std::string_view name) const;
  FieldPath Element(size_t index) const;
  FieldPath Wildcard() const;
  FieldPath Parent() const;
  // Segments [from, size()) as a new path.
  FieldPath Suffix(size_t from) const;

  bool HasPrefix(const FieldPath& prefix) const;
  // Replaces every concrete index with `[*]`.
  FieldPath AsPattern() const;

  const std::string& ToString() const { return text_; }

  friend bool operator==(const FieldPath& a, const FieldPath& b) {
    return a.text_ == b.text_;
  }
  friend std::strong_ordering operator<=>(const FieldPath& a,
                                          const FieldPath& b) {
    return a.text_ <=> b.text_;
  }

 private:
  void Render();

  std::vector<PathSegment> segments_;
  std::string text_;
};

}  // namespace semprobe

#endif  // SEMPROBE_FIELD_PATH_H_
