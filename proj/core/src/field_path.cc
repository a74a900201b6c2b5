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

#include "semprobe/field_path.h"

#include <cstdlib>
#include <utility>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"

namespace semprobe {
namespace {

bool IsNameChar(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '-' || c == '_';
}

}  // namespace

FieldPath::FieldPath(std::vector<PathSegment> segments)
    : segments_(std::move(segments)) {
  Render();
}

absl::StatusOr<FieldPath> FieldPath::Parse(std::string_view text) {
  std::vector<PathSegment> segments;
  size_t pos = 0;
  if (text.empty()) return absl::InvalidArgumentError("empty field path");
  while (true) {
    PathSegment segment;
    size_t start = pos;
    while (pos < text.size() && IsNameChar(text[pos])) ++pos;
    if (pos == start) {
      return absl::InvalidArgumentError(
          absl::StrCat("expected field name at offset ", start, " in '",
                       std::string(text), "'"));
    }
    segment.name = std::string(text.substr(start, pos - start));
    if (pos < text.size() && text[pos] == '[') {
      size_t close = text.find(']', pos);
      if (close == std::string_view::npos) {
        return absl::InvalidArgumentError(absl::StrCat(
            "unterminated subscript in '", std::string(text), "'"));
      }
      std::string_view inner = text.substr(pos + 1, close - pos - 1);
      if (inner == "*") {
        segment.wildcard = true;
      } else {
        uint64_t index = 0;
        if (!absl::SimpleAtoi(absl::string_view(inner.data(), inner.size()),
                              &index)) {
          return absl::InvalidArgumentError(
              absl::StrCat("bad subscript '", std::string(inner), "' in '",
                           std::string(text), "'"));
        }
        segment.index = static_cast<size_t>(index);
      }
      pos = close + 1;
    }
    segments.push_back(std::move(segment));
    if (pos == text.size()) break;
    if (text[pos] != '.') {
      return absl::InvalidArgumentError(
          absl::StrCat("unexpected '", std::string(1, text[pos]), "' in '",
                       std::string(text), "'"));
    }
    ++pos;
  }
  return FieldPath(std::move(segments));
}

FieldPath FieldPath::FromString(std::string_view text) {
  absl::StatusOr<FieldPath> path = Parse(text);
  if (!path.ok()) std::abort();
  return *std::move(path);
}

FieldPath FieldPath::Child(std::string_view name) const {
  std::vector<PathSegment> segments = segments_;
  segments.push_back(PathSegment{std::string(name), std::nullopt, false});
  return FieldPath(std::move(segments));
}

FieldPath FieldPath::Element(size_t index) const {
  std::vector<PathSegment> segments = segments_;
  segments.back().index = index;
  segments.back().wildcard = false;
  return FieldPath(std::move(segments));
}

FieldPath FieldPath::Wildcard() const {
  std::vector<PathSegment> segments = segments_;
  segments.back().index.reset();
  segments.back().wildcard = true;
  return FieldPath(std::move(segments));
}

FieldPath FieldPath::Parent() const {
  std::vector<PathSegment> segments = segments_;
  if (!segments.empty()) segments.pop_back();
  return FieldPath(std::move(segments));
}

FieldPath FieldPath::Suffix(size_t from) const {
  if (from >= segments_.size()) return FieldPath();
  return FieldPath(
      std::vector<PathSegment>(segments_.begin() + from, segments_.end()));
}

bool FieldPath::HasPrefix(const FieldPath& prefix) const {
  if (prefix.size() > size()) return false;
  for (size_t i = 0; i < prefix.size(); ++i) {
    const PathSegment& p = prefix.segments_[i];
    const PathSegment& s = segments_[i];
    if (p.name != s.name) return false;
    // A bare prefix segment (no subscript) covers every element below it.
    if (i + 1 == prefix.size() && !p.has_subscript()) continue;
    if (!(p == s)) return false;
  }
  return true;
}

FieldPath FieldPath::AsPattern() const {
  std::vector<PathSegment> segments = segments_;
  for (PathSegment& s : segments) {
    if (s.index.has_value()) {
      s.index.reset();
      s.wildcard = true;
    }
  }
  return FieldPath(std::move(segments));
}

void FieldPath::Render() {
  text_.clear();
  for (size_t i = 0; i < segments_.size(); ++i) {
    if (i > 0) text_.push_back('.');
    const PathSegment& s = segments_[i];
    text_ += s.name;
    if (s.wildcard) {
      text_ += "[*]";
    } else if (s.index.has_value()) {
      absl::StrAppend(&text_, "[", *s.index, "]");
    }
  }
}

}  // namespace semprobe
