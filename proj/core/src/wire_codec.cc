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

#include "semprobe/wire_codec.h"

#include <string>
#include <utility>

#include "absl/strings/cord.h"
#include "absl/strings/str_cat.h"

namespace semprobe {
namespace {

constexpr char kRawOverridePayload[] = "semprobe/raw-override";

absl::Status EncodeAt(const Schema& schema, const FieldKind& kind,
                      const Value& v, EncodeMode mode, BitWriter& out,
                      const std::string& path);

absl::Status EncodeInt(int64_t lo, int64_t hi, int64_t v, EncodeMode mode,
                       BitWriter& out, const std::string& path) {
  if (mode == EncodeMode::kChecked && (v < lo || v > hi)) {
    return absl::OutOfRangeError(
        absl::StrCat(path, ": value ", v, " outside Int(", lo, ",", hi, ")"));
  }
  if (!IsWireRepresentable(lo, hi, v)) {
    absl::Status status = absl::OutOfRangeError(
        absl::StrCat(path, ": value ", v, " is not wire-representable in Int(",
                     lo, ",", hi, "); deliver via raw override"));
    status.SetPayload(kRawOverridePayload, absl::Cord("1"));
    return status;
  }
  out.Write(static_cast<uint64_t>(v - lo), IntBitWidth(lo, hi));
  return absl::OkStatus();
}

absl::Status EncodeRecord(const Schema& schema,
                          const std::vector<FieldDef>& fields, const Value& v,
                          EncodeMode mode, BitWriter& out,
                          const std::string& path) {
  if (v.kind() != Value::Kind::kRecord) {
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": expected a record"));
  }
  size_t seen = 0;
  for (const FieldDef& f : fields) {
    const Value* member = v.Find(f.name);
    if (member != nullptr) ++seen;
    if (f.optional) {
      out.Write(member != nullptr ? 1 : 0, 1);
    } else if (member == nullptr) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ".", f.name, ": mandatory field missing"));
    }
  }
  if (seen != v.member_names().size()) {
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": record carries undeclared fields"));
  }
  for (const FieldDef& f : fields) {
    const Value* member = v.Find(f.name);
    if (member == nullptr) continue;
    absl::Status s = EncodeAt(schema, f.kind, *member, mode, out,
                              absl::StrCat(path, ".", f.name));
    if (!s.ok()) return s;
  }
  return absl::OkStatus();
}

absl::Status EncodeAt(const Schema& schema, const FieldKind& kind,
                      const Value& v, EncodeMode mode, BitWriter& out,
                      const std::string& path) {
  switch (kind.tag) {
    case FieldKind::Tag::kInt:
      if (v.kind() != Value::Kind::kInt) {
        return absl::InvalidArgumentError(absl::StrCat(path, ": expected Int"));
      }
      return EncodeInt(kind.lo, kind.hi, v.int_value(), mode, out, path);
    case FieldKind::Tag::kEnum: {
      std::optional<size_t> index = v.kind() == Value::Kind::kEnum
                                        ? kind.LabelIndex(v.label())
                                        : std::nullopt;
      if (!index) {
        return absl::InvalidArgumentError(
            absl::StrCat(path, ": not a declared enum label"));
      }
      out.Write(*index, IndexBitWidth(kind.labels.size()));
      return absl::OkStatus();
    }
    case FieldKind::Tag::kBool:
      if (v.kind() != Value::Kind::kBool) {
        return absl::InvalidArgumentError(
            absl::StrCat(path, ": expected Bool"));
      }
      out.Write(v.bool_value() ? 1 : 0, 1);
      return absl::OkStatus();
    case FieldKind::Tag::kChoice: {
      if (v.kind() != Value::Kind::kChoice) {
        return absl::InvalidArgumentError(
            absl::StrCat(path, ": expected choice"));
      }
      for (size_t i = 0; i < kind.alternatives.size(); ++i) {
        const Alternative& alt = kind.alternatives[i];
        if (alt.name != v.label()) continue;
        out.Write(i, IndexBitWidth(kind.alternatives.size()));
        return EncodeAt(schema, alt.kind, v.choice_value(), mode, out,
                        absl::StrCat(path, ".", alt.name));
      }
      return absl::InvalidArgumentError(
          absl::StrCat(path, ": undeclared alternative '", v.label(), "'"));
    }
    case FieldKind::Tag::kSeqOf: {
      if (v.kind() != Value::Kind::kList) {
        return absl::InvalidArgumentError(
            absl::StrCat(path, ": expected list"));
      }
      const int64_t count = static_cast<int64_t>(v.items().size());
      absl::Status s = EncodeInt(kind.lo, kind.hi, count, mode, out,
                                 absl::StrCat(path, "#count"));
      if (!s.ok()) return s;
      for (size_t i = 0; i < v.items().size(); ++i) {
        s = EncodeAt(schema, *kind.element, v.items()[i], mode, out,
                     absl::StrCat(path, "[", i, "]"));
        if (!s.ok()) return s;
      }
      return absl::OkStatus();
    }
    case FieldKind::Tag::kNested:
      return EncodeRecord(schema, schema.FieldsOf(kind), v, mode, out, path);
  }
  return absl::InternalError("unreachable");
}

absl::StatusOr<Value> DecodeAt(const Schema& schema, const FieldKind& kind,
                               BitReader& in, const std::string& path) {
  switch (kind.tag) {
    case FieldKind::Tag::kInt: {
      absl::StatusOr<uint64_t> raw = in.Read(IntBitWidth(kind.lo, kind.hi));
      if (!raw.ok()) return raw.status();
      return Value::Int(kind.lo + static_cast<int64_t>(*raw));
    }
    case FieldKind::Tag::kEnum: {
      absl::StatusOr<uint64_t> raw = in.Read(IndexBitWidth(kind.labels.size()));
      if (!raw.ok()) return raw.status();
      if (*raw >= kind.labels.size()) {
        return absl::DataLossError(
            absl::StrCat(path, ": enum index ", *raw, " out of range (",
                         kind.labels.size(), " labels)"));
      }
      return Value::Enum(kind.labels[*raw]);
    }
    case FieldKind::Tag::kBool: {
      absl::StatusOr<uint64_t> raw = in.Read(1);
      if (!raw.ok()) return raw.status();
      return Value::Bool(*raw != 0);
    }
    case FieldKind::Tag::kChoice: {
      absl::StatusOr<uint64_t> raw =
          in.Read(IndexBitWidth(kind.alternatives.size()));
      if (!raw.ok()) return raw.status();
      if (*raw >= kind.alternatives.size()) {
        return absl::DataLossError(
            absl::StrCat(path, ": choice index ", *raw, " out of range (",
                         kind.alternatives.size(), " alternatives)"));
      }
      const Alternative& alt = kind.alternatives[*raw];
      absl::StatusOr<Value> inner =
          DecodeAt(schema, alt.kind, in, absl::StrCat(path, ".", alt.name));
      if (!inner.ok()) return inner.status();
      return Value::Choice(alt.name, *std::move(inner));
    }
    case FieldKind::Tag::kSeqOf: {
      absl::StatusOr<uint64_t> raw = in.Read(IntBitWidth(kind.lo, kind.hi));
      if (!raw.ok()) return raw.status();
      const uint64_t count = static_cast<uint64_t>(kind.lo) + *raw;
      std::vector<Value> items;
      for (uint64_t i = 0; i < count; ++i) {
        absl::StatusOr<Value> item = DecodeAt(schema, *kind.element, in,
                                              absl::StrCat(path, "[", i, "]"));
        if (!item.ok()) return item.status();
        items.push_back(*std::move(item));
      }
      return Value::List(std::move(items));
    }
    case FieldKind::Tag::kNested: {
      const std::vector<FieldDef>& fields = schema.FieldsOf(kind);
      std::vector<bool> present(fields.size(), true);
      for (size_t i = 0; i < fields.size(); ++i) {
        if (!fields[i].optional) continue;
        absl::StatusOr<uint64_t> bit = in.Read(1);
        if (!bit.ok()) return bit.status();
        present[i] = *bit != 0;
      }
      Value record = Value::Record();
      for (size_t i = 0; i < fields.size(); ++i) {
        if (!present[i]) continue;
        absl::StatusOr<Value> member =
            DecodeAt(schema, fields[i].kind, in,
                     absl::StrCat(path, ".", fields[i].name));
        if (!member.ok()) return member.status();
        record.AppendMember(fields[i].name, *std::move(member));
      }
      return record;
    }
  }
  return absl::InternalError("unreachable");
}

}  // namespace

void BitWriter::Write(uint64_t value, int width) {
  for (int i = width - 1; i >= 0; --i) {
    if (bit_count_ % 8 == 0) bytes_.push_back(0);
    if ((value >> i) & 1U) {
      bytes_.back() |= static_cast<uint8_t>(0x80U >> (bit_count_ % 8));
    }
    ++bit_count_;
  }
}

std::vector<uint8_t> BitWriter::Finish() && { return std::move(bytes_); }

absl::StatusOr<uint64_t> BitReader::Read(int width) {
  if (static_cast<size_t>(width) > remaining()) {
    return absl::DataLossError(absl::StrCat("truncated input: need ", width,
                                            " bits at bit ", position_,
                                            ", have ", remaining()));
  }
  uint64_t value = 0;
  for (int i = 0; i < width; ++i) {
    const uint8_t byte = bytes_[position_ / 8];
    const unsigned bit = (byte >> (7 - position_ % 8)) & 1U;
    value = (value << 1) | bit;
    ++position_;
  }
  return value;
}

absl::StatusOr<std::vector<uint8_t>> Encode(const Schema& schema,
                                            const Value& message,
                                            EncodeMode mode) {
  BitWriter out;
  absl::Status s =
      EncodeAt(schema, RootKind(schema), message, mode, out, schema.root());
  if (!s.ok()) return s;
  return std::move(out).Finish();
}

absl::StatusOr<Value> Decode(const Schema& schema,
                             std::span<const uint8_t> bytes) {
  if (bytes.empty()) return absl::DataLossError("truncated input: no bytes");
  BitReader in(bytes);
  absl::StatusOr<Value> root =
      DecodeAt(schema, RootKind(schema), in, schema.root());
  if (!root.ok()) return root.status();
  const size_t rest = in.remaining();
  if (rest >= 8) {
    return absl::DataLossError(
        absl::StrCat("trailing data: ", rest, " unread bits"));
  }
  absl::StatusOr<uint64_t> padding = in.Read(static_cast<int>(rest));
  if (!padding.ok() || *padding != 0) {
    return absl::DataLossError("non-zero padding bits");
  }
  return root;
}

bool NeedsRawOverride(const absl::Status& status) {
  return status.GetPayload(kRawOverridePayload).has_value();
}

absl::Status EncodeKind(const Schema& schema, const FieldKind& kind,
                        const Value& value, EncodeMode mode, BitWriter& out) {
  return EncodeAt(schema, kind, value, mode, out, "value");
}

absl::StatusOr<Value> DecodeKind(const Schema& schema, const FieldKind& kind,
                                 BitReader& in) {
  return DecodeAt(schema, kind, in, "value");
}

}  // namespace semprobe
