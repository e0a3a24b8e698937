// Copyright 2026 The rfidsim Authors
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

#include <doctest.h>

#include <cstring>
#include <string>
#include <vector>

#include "core/rng.hpp"
#include "core/telemetry.hpp"

using namespace rfidsim;

namespace {

// Bit-at-a-time CRC-16/CCITT-FALSE: poly 0x1021, init 0xFFFF, no reflection.
std::uint16_t crc_reference(const std::uint8_t* p, std::size_t n) {
  std::uint16_t crc = 0xFFFF;
  for (std::size_t i = 0; i < n; ++i) {
    crc ^= static_cast<std::uint16_t>(p[i] << 8);
    for (int b = 0; b < 8; ++b) {
      crc = (crc & 0x8000) ? static_cast<std::uint16_t>((crc << 1) ^ 0x1021)
                           : static_cast<std::uint16_t>(crc << 1);
    }
  }
  return crc;
}

Message random_message(Rng& rng) {
  auto i32 = [&] { return static_cast<std::int32_t>(rng.next_u64()); };
  auto u32 = [&] { return static_cast<std::uint32_t>(rng.next_u64()); };
  switch (rng.below(5)) {
    case 0:
      return Heartbeat{static_cast<std::uint8_t>(rng.below(256)),
                       static_cast<std::uint8_t>(rng.below(256))};
    case 1:
      return GpsPosition{i32(), i32(), i32(), u32()};
    case 2: {
      TagRead t;
      for (auto& b : t.epc) b = static_cast<std::uint8_t>(rng.below(256));
      t.rssi_dbm_x10 = static_cast<std::int16_t>(rng.next_u64());
      t.sensor_kind = static_cast<std::uint8_t>(rng.below(256));
      t.sensor_value_milli = i32();
      t.time_ms = u32();
      return t;
    }
    case 3:
      return Command{static_cast<CommandCode>(rng.below(kCommandCodeCount)), i32(), i32(), i32(),
                     static_cast<std::uint16_t>(rng.below(65536))};
    default:
      return Ack{u32(), static_cast<std::uint8_t>(rng.below(3))};
  }
}

}  // namespace

TEST_SUITE("telemetry") {

TEST_CASE("crc check value") {
  const char* s = "123456789";
  const auto* p = reinterpret_cast<const std::uint8_t*>(s);
  CHECK(crc_reference(p, 9) == 0x29B1);
  CHECK(crc16_ccitt_false({p, 9}) == 0x29B1);
  CHECK(crc16_ccitt_false({}) == 0xFFFF);
}

TEST_CASE("table crc equals the bitwise reference") {
  Rng rng(2);
  for (int i = 0; i < 2000; ++i) {
    std::vector<std::uint8_t> d(rng.below(300));
    for (auto& b : d) b = static_cast<std::uint8_t>(rng.below(256));
    CHECK(crc16_ccitt_false(d) == crc_reference(d.data(), d.size()));
  }
}

TEST_CASE("byte layout of a GPS frame") {
  const Bytes f = encode_frame(GpsPosition{400000000, -750000000, 1500, 1234}, 0x01020304);
  const std::vector<std::uint8_t> head{0xFD, 16, 0x01, 0x04, 0x03, 0x02, 0x01,
                                       0x00, 0x84, 0xD7, 0x17,   // 400000000 LE
                                       0x80, 0xE8, 0x4B, 0xD3,   // -750000000 LE
                                       0xDC, 0x05, 0x00, 0x00,   // 1500
                                       0xD2, 0x04, 0x00, 0x00};  // 1234
  REQUIRE(f.size() == 9 + 16);
  CHECK(std::vector<std::uint8_t>(f.begin(), f.begin() + 23) == head);
  const std::uint16_t crc = crc_reference(f.data() + 1, 6 + 16);
  CHECK(f[23] == (crc & 0xFF));
  CHECK(f[24] == (crc >> 8));
}

TEST_CASE("payload sizes") {
  CHECK(encode_frame(Heartbeat{}, 0).size() == 9 + 2);
  CHECK(encode_frame(TagRead{}, 0).size() == 9 + 23);
  CHECK(encode_frame(Command{}, 0).size() == 9 + 15);
  CHECK(encode_frame(Ack{}, 0).size() == 9 + 5);
}

TEST_CASE("round trip over random messages") {
  Rng rng(99);
  for (int i = 0; i < 20000; ++i) {
    const Message m = random_message(rng);
    const auto seq = static_cast<std::uint32_t>(rng.next_u64());
    const Bytes f = encode_frame(m, seq);
    const auto r = decode_frame(f);
    REQUIRE(r.ok());
    CHECK(r.frame().msg == m);
    CHECK(r.frame().seq == seq);
    CHECK(r.consumed == f.size());
  }
}

TEST_CASE("every single-bit flip is detected") {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const Bytes f = encode_frame(random_message(rng), static_cast<std::uint32_t>(i));
    for (std::size_t bit = 0; bit < f.size() * 8; ++bit) {
      Bytes g = f;
      g[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
      CHECK_FALSE(decode_frame(g).ok());
    }
  }
}

TEST_CASE("decode errors") {
  const Bytes good = encode_frame(Ack{7, 1}, 3);
  Bytes bad = good;
  bad[0] = 0x00;
  CHECK(decode_frame(bad).error() == DecodeError::kBadSync);
  CHECK(decode_frame(std::span(good).first(5)).error() == DecodeError::kTruncated);
  bad = good;
  bad[8] ^= 0x10;
  CHECK(decode_frame(bad).error() == DecodeError::kBadCrc);
  const std::vector<std::uint8_t> payload(5, 0);
  CHECK(decode_frame(encode_raw_frame(9, 0, payload)).error() == DecodeError::kUnknownMsgId);
  CHECK(decode_frame(encode_raw_frame(4, 0, std::vector<std::uint8_t>(6, 0))).error() ==
        DecodeError::kBadLength);
  CHECK(decode_frame({}).error() == DecodeError::kTruncated);
}

TEST_CASE("frames are self-delimiting") {
  Rng rng(8);
  std::vector<Frame> sent;
  Bytes stream;
  for (int i = 0; i < 500; ++i) {
    const Message m = random_message(rng);
    sent.push_back({m, static_cast<std::uint32_t>(i)});
    const Bytes f = encode_frame(m, static_cast<std::uint32_t>(i));
    stream.insert(stream.end(), f.begin(), f.end());
  }
  const auto out = decode_stream(stream);
  REQUIRE(out.size() == sent.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    REQUIRE(std::holds_alternative<Frame>(out[i]));
    CHECK(std::get<Frame>(out[i]) == sent[i]);
  }

  // Same stream fed in random chunks.
  StreamDecoder dec;
  std::vector<std::variant<Frame, DecodeError>> got;
  for (std::size_t pos = 0; pos < stream.size();) {
    const std::size_t n = std::min<std::size_t>(1 + rng.below(40), stream.size() - pos);
    dec.feed(std::span(stream).subspan(pos, n));
    for (auto& x : dec.drain()) got.push_back(x);
    pos += n;
  }
  for (auto& x : dec.finish()) got.push_back(x);
  REQUIRE(got.size() == sent.size());
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::get<Frame>(got[i]) == sent[i]);
}

TEST_CASE("decoder resynchronizes after garbage") {
  const Bytes a = encode_frame(Heartbeat{1, 2}, 1);
  const Bytes b = encode_frame(Ack{5, 0}, 2);
  Bytes s{0x01, 0x02, 0x03};
  s.insert(s.end(), a.begin(), a.end());
  s.push_back(0x55);
  s.insert(s.end(), b.begin(), b.end());
  const auto out = decode_stream(s);
  int frames = 0;
  for (auto& x : out) frames += std::holds_alternative<Frame>(x);
  CHECK(frames == 2);
  CHECK(std::holds_alternative<DecodeError>(out.front()));
}

TEST_CASE("decoder never throws on arbitrary bytes") {
  Rng rng(13);
  for (int i = 0; i < 3000; ++i) {
    Bytes s(rng.below(200));
    for (auto& x : s) x = static_cast<std::uint8_t>(rng.bernoulli(0.1) ? 0xFD : rng.below(256));
    CHECK_NOTHROW(decode_stream(s));
    CHECK_NOTHROW(decode_frame(s));
  }
}

TEST_CASE("lossy channel keeps order") {
  Rng rng(1);
  std::vector<Bytes> frames;
  for (std::uint32_t i = 0; i < 1000; ++i) frames.push_back(encode_frame(Heartbeat{}, i));
  const auto kept = lossy_channel(frames, 0.3, rng);
  CHECK(kept.size() > 600);
  CHECK(kept.size() < 800);
  std::uint32_t last = 0;
  bool first = true;
  for (auto& f : kept) {
    const auto seq = decode_frame(f).frame().seq;
    if (!first) CHECK(seq > last);
    last = seq;
    first = false;
  }
  CHECK(lossy_channel(frames, 0.0, rng).size() == frames.size());
}

TEST_CASE("command names") {
  for (std::uint8_t i = 0; i < kCommandCodeCount; ++i) {
    const auto c = static_cast<CommandCode>(i);
    CHECK(command_code_from_string(to_string(c)) == c);
  }
}

}  // TEST_SUITE
