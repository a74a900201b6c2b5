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

#ifndef SEMPROBE_WIRE_CODEC_H_
#define SEMPROBE_WIRE_CODEC_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "semprobe/schema.h"
#include "semprobe/value.h"

namespace semprobe {

// Simplified unaligned PER:
//   SEQUENCE  one presence bit per optional field (declaration order), then
//             the present fields in declaration order
//   Int(l,h)  v - l in ceil(log2(h - l + 1)) bits
//   Enum      label index in ceil(log2(k)) bits; Choice likewise, then body
//   Bool      1 bit
//   SeqOf     count as Int(lo, hi), then elements
// Bits are packed MSB-first; the final byte is zero-padded.
enum class EncodeMode {
  kChecked,    // Int values must lie in [lo, hi]
  kUnchecked,  // any value with 0 <= v - lo < 2^width is emitted verbatim
};

class BitWriter {
 public:
  void Write(uint64_t value, int width);
  size_t bit_count() const { return bit_count_; }
  std::vector<uint8_t> Finish() &&;

 private:
  std::vector<uint8_t> bytes_;
  size_t bit_count_ = 0;
};

class BitReader {
 public:
  explicit BitReader(std::span<const uint8_t> bytes) : bytes_(bytes) {}
  absl::StatusOr<uint64_t> Read(int width);
  size_t remaining() const { return bytes_.size() * 8 - position_; }
  size_t position() const { return position_; }

 private:
  std::span<const uint8_t> bytes_;
  size_t position_ = 0;
};

absl::StatusOr<std::vector<uint8_t>> Encode(const Schema& schema,
                                            const Value& message,
                                            EncodeMode mode);

// Decodes a root message. Int values above their declared maximum are
// returned as-is; no semantic range validation happens here.
absl::StatusOr<Value> Decode(const Schema& schema,
                             std::span<const uint8_t> bytes);

// True when `status` came from an unchecked encode of a value the wire field
// cannot carry, so the value has to be injected through the raw channel.
bool NeedsRawOverride(const absl::Status& status);

// Single-kind helpers, exposed for tests and benchmarks.
absl::Status EncodeKind(const Schema& schema, const FieldKind& kind,
                        const Value& value, EncodeMode mode, BitWriter& out);
absl::StatusOr<Value> DecodeKind(const Schema& schema, const FieldKind& kind,
                                 BitReader& in);

}  // namespace semprobe

#endif  // SEMPROBE_WIRE_CODEC_H_
