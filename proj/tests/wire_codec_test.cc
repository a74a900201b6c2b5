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

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "nlohmann/json.hpp"
#include "test_util.h"

namespace semprobe {
namespace {

using testing::AssetDir;
using testing::MiniSchema;
using testing::Must;

// Independent bit-string encoder written from the wire-format rules; used as
// the oracle for the production encoder.
int OracleWidth(uint64_t count) {
  int w = 0;
  while (count > (uint64_t{1} << w)) ++w;
  return w;
}

void OracleBits(std::string& out, uint64_t v, int width) {
  for (int i = width - 1; i >= 0; --i)
    out.push_back(((v >> i) & 1) ? '1' : '0');
}

void OracleEncode(const Schema& schema, const FieldKind& kind, const Value& v,
                  std::string& out) {
  switch (kind.tag) {
    case FieldKind::Tag::kInt:
      OracleBits(out, static_cast<uint64_t>(v.int_value() - kind.lo),
                 OracleWidth(static_cast<uint64_t>(kind.hi - kind.lo) + 1));
      return;
    case FieldKind::Tag::kEnum:
      OracleBits(out, *kind.LabelIndex(v.label()),
                 OracleWidth(kind.labels.size()));
      return;
    case FieldKind::Tag::kBool:
      out.push_back(v.bool_value() ? '1' : '0');
      return;
    case FieldKind::Tag::kChoice:
      for (size_t i = 0; i < kind.alternatives.size(); ++i) {
        if (kind.alternatives[i].name == v.label()) {
          OracleBits(out, i, OracleWidth(kind.alternatives.size()));
          OracleEncode(schema, kind.alternatives[i].kind, v.choice_value(),
                       out);
        }
      }
      return;
    case FieldKind::Tag::kSeqOf:
      OracleBits(out, v.items().size() - kind.lo,
                 OracleWidth(static_cast<uint64_t>(kind.hi - kind.lo) + 1));
      for (const Value& item : v.items()) {
        OracleEncode(schema, *kind.element, item, out);
      }
      return;
    case FieldKind::Tag::kNested: {
      const std::vector<FieldDef>& fields = schema.FieldsOf(kind);
      for (const FieldDef& f : fields) {
        if (f.optional) out.push_back(v.Find(f.name) ? '1' : '0');
      }
      for (const FieldDef& f : fields) {
        if (const Value* m = v.Find(f.name))
          OracleEncode(schema, f.kind, *m, out);
      }
      return;
    }
  }
}

std::string BytesToBits(const std::vector<uint8_t>& bytes) {
  std::string out;
  for (uint8_t b : bytes) OracleBits(out, b, 8);
  return out;
}

std::shared_ptr<const Schema> OneFieldSchema(const std::string& kind) {
  const std::string text = R"({"name":"t","version":"1","root":"M","ies":[
      {"name":"M","fields":[{"name":"f","kind":)" +
                           kind + "}]}]}";
  return std::make_shared<const Schema>(
      Must(Schema::FromJson(nlohmann::json::parse(text))));
}

Value OneField(Value v) {
  Value r = Value::Record();
  r.AppendMember("f", std::move(v));
  return r;
}

TEST(WireCodecTest, IntZeroToFiveEncodesThreeAsBits011) {
  auto schema = OneFieldSchema(R"({"int":{"lo":0,"hi":5}})");
  std::vector<uint8_t> bytes =
      Must(Encode(*schema, OneField(Value::Int(3)), EncodeMode::kChecked));
  ASSERT_EQ(bytes.size(), 1u);
  EXPECT_EQ(BytesToBits(bytes).substr(0, 3), "011");
  EXPECT_EQ(bytes[0], 0x60);
  for (int64_t v = 0; v <= 5; ++v) {
    std::vector<uint8_t> b =
        Must(Encode(*schema, OneField(Value::Int(v)), EncodeMode::kChecked));
    Value back = Must(Decode(*schema, b));
    EXPECT_EQ(back.Find("f")->int_value(), v);
  }
}

TEST(WireCodecTest, UncheckedCarriesOverRangeRepresentableValues) {
  auto schema = OneFieldSchema(R"({"int":{"lo":0,"hi":191}})");
  absl::StatusOr<std::vector<uint8_t>> checked =
      Encode(*schema, OneField(Value::Int(192)), EncodeMode::kChecked);
  ASSERT_FALSE(checked.ok());
  EXPECT_NE(std::string(checked.status().message()).find("M.f"),
            std::string::npos);
  std::vector<uint8_t> bytes =
      Must(Encode(*schema, OneField(Value::Int(192)), EncodeMode::kUnchecked));
  EXPECT_EQ(Must(Decode(*schema, bytes)).Find("f")->int_value(), 192);
}

TEST(WireCodecTest, BelowLowerBoundNeedsRawOverride) {
  auto schema = OneFieldSchema(R"({"int":{"lo":0,"hi":191}})");
  absl::StatusOr<std::vector<uint8_t>> r =
      Encode(*schema, OneField(Value::Int(-1)), EncodeMode::kUnchecked);
  ASSERT_FALSE(r.ok());
  EXPECT_TRUE(NeedsRawOverride(r.status()));
  EXPECT_FALSE(NeedsRawOverride(absl::InvalidArgumentError("other")));
  absl::StatusOr<std::vector<uint8_t>> too_big =
      Encode(*schema, OneField(Value::Int(256)), EncodeMode::kUnchecked);
  ASSERT_FALSE(too_big.ok());
  EXPECT_TRUE(NeedsRawOverride(too_big.status()));
}

TEST(WireCodecTest, EnumIndexOutOfRangeFailsToDecode) {
  auto schema = OneFieldSchema(R"({"enum":["a","b","c"]})");
  const std::vector<uint8_t> index3 = {0xC0};  // 2-bit index 3
  EXPECT_FALSE(Decode(*schema, index3).ok());
  const std::vector<uint8_t> index2 = {0x80};
  EXPECT_EQ(Must(Decode(*schema, index2)).Find("f")->label(), "c");
}

TEST(WireCodecTest, MalformedInputsAreRejected) {
  const std::vector<uint8_t> seed = testing::SeedBytes();
  const Schema& schema = *MiniSchema();
  EXPECT_FALSE(Decode(schema, std::vector<uint8_t>{}).ok());
  std::vector<uint8_t> truncated(seed.begin(), seed.end() - 2);
  EXPECT_FALSE(Decode(schema, truncated).ok());
  std::vector<uint8_t> trailing = seed;
  trailing.push_back(0);
  EXPECT_FALSE(Decode(schema, trailing).ok());
  auto one_bit = OneFieldSchema(R"({"bool":{}})");
  EXPECT_TRUE(Decode(*one_bit, std::vector<uint8_t>{0x80}).ok());
  EXPECT_FALSE(Decode(*one_bit, std::vector<uint8_t>{0x81}).ok());
}

TEST(WireCodecTest, SeedRoundTripsAndMatchesGoldenBytes) {
  const Schema& schema = *MiniSchema();
  const Value seed = testing::SeedTree();
  const std::vector<uint8_t> bytes = testing::SeedBytes();
  EXPECT_TRUE(Must(Decode(schema, bytes)) == seed);
  const std::string golden =
      Must(ReadTextFile(AssetDir() / "seeds/seed_rrcsetup.bin"));
  EXPECT_EQ(std::vector<uint8_t>(golden.begin(), golden.end()), bytes);
}

TEST(WireCodecTest, EncoderMatchesBitStringOracle) {
  const Schema& schema = *MiniSchema();
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    const Value m = testing::RandomMessage(schema, rng);
    std::string bits;
    OracleEncode(schema, RootKind(schema), m, bits);
    while (bits.size() % 8 != 0) bits.push_back('0');
    const std::vector<uint8_t> bytes =
        Must(Encode(schema, m, EncodeMode::kChecked));
    ASSERT_EQ(BytesToBits(bytes), bits) << "message " << i;
  }
}

TEST(WireCodecTest, DecodeInvertsEncodeOnRandomMessages) {
  const Schema& schema = *MiniSchema();
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const Value m = testing::RandomMessage(schema, rng);
    const std::vector<uint8_t> bytes =
        Must(Encode(schema, m, EncodeMode::kChecked));
    ASSERT_TRUE(Must(Decode(schema, bytes)) == m) << "message " << i;
  }
}

TEST(WireCodecTest, IntBitWidthMatchesLogFormula) {
  for (int64_t lo : {-5, 0, 3}) {
    for (int64_t span = 0; span < 300; ++span) {
      EXPECT_EQ(IntBitWidth(lo, lo + span),
                OracleWidth(static_cast<uint64_t>(span) + 1));
    }
  }
}

TEST(WireCodecTest, BitWriterPacksMsbFirst) {
  BitWriter w;
  w.Write(0b1, 1);
  w.Write(0b0110, 4);
  w.Write(0b101, 3);
  w.Write(0b11, 2);
  EXPECT_EQ(w.bit_count(), 10u);
  const std::vector<uint8_t> bytes = std::move(w).Finish();
  EXPECT_EQ(bytes, (std::vector<uint8_t>{0xB5, 0xC0}));
  BitReader r(bytes);
  EXPECT_EQ(Must(r.Read(5)), 0b10110u);
  EXPECT_EQ(r.remaining(), 11u);
  EXPECT_FALSE(r.Read(12).ok());
}

}  // namespace
}  // namespace semprobe
