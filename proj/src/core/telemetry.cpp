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

#include "core/telemetry.hpp"

#include <algorithm>
#include <string>

#include "core/error.hpp"

namespace rfidsim {

namespace {

constexpr std::array<std::uint16_t, 256> make_crc_table() {
  std::array<std::uint16_t, 256> t{};
  for (int i = 0; i < 256; ++i) {
    std::uint16_t c = static_cast<std::uint16_t>(i << 8);
    for (int b = 0; b < 8; ++b) {
      c = static_cast<std::uint16_t>((c & 0x8000) ? (c << 1) ^ 0x1021 : c << 1);
    }
    t[i] = c;
  }
  return t;
}

constexpr auto kCrcTable = make_crc_table();

class Writer {
 public:
  explicit Writer(Bytes& out) : out_(out) {}
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) {
    u8(static_cast<std::uint8_t>(v));
    u8(static_cast<std::uint8_t>(v >> 8));
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void i16(std::int16_t v) { u16(static_cast<std::uint16_t>(v)); }
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }

 private:
  Bytes& out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}
  std::uint8_t u8() { return in_[pos_++]; }
  std::uint16_t u16() {
    const auto lo = u8();
    return static_cast<std::uint16_t>(lo | u8() << 8);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
    return v;
  }
  std::int16_t i16() { return static_cast<std::int16_t>(u16()); }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Bytes encode_payload(const Message& msg) {
  Bytes p;
  Writer w(p);
  std::visit(Overloaded{
                 [&](const Heartbeat& m) {
                   w.u8(m.vehicle_type);
                   w.u8(m.fsm_state);
                 },
                 [&](const GpsPosition& m) {
                   w.i32(m.lat_1e7);
                   w.i32(m.lon_1e7);
                   w.i32(m.alt_mm);
                   w.u32(m.time_ms);
                 },
                 [&](const TagRead& m) {
                   for (auto b : m.epc) w.u8(b);
                   w.i16(m.rssi_dbm_x10);
                   w.u8(m.sensor_kind);
                   w.i32(m.sensor_value_milli);
                   w.u32(m.time_ms);
                 },
                 [&](const Command& m) {
                   w.u8(static_cast<std::uint8_t>(m.cmd));
                   w.i32(m.lat_1e7);
                   w.i32(m.lon_1e7);
                   w.i32(m.alt_mm);
                   w.u16(m.param_cm);
                 },
                 [&](const Ack& m) {
                   w.u32(m.seq_acked);
                   w.u8(m.result);
                 },
             },
             msg);
  return p;
}

// Caller has checked the payload size.
std::variant<Message, DecodeError> decode_payload(MsgId id, std::span<const std::uint8_t> p) {
  Reader r(p);
  switch (id) {
    case MsgId::kHeartbeat: {
      Heartbeat m;
      m.vehicle_type = r.u8();
      m.fsm_state = r.u8();
      return Message{m};
    }
    case MsgId::kGpsPosition: {
      GpsPosition m;
      m.lat_1e7 = r.i32();
      m.lon_1e7 = r.i32();
      m.alt_mm = r.i32();
      m.time_ms = r.u32();
      return Message{m};
    }
    case MsgId::kTagRead: {
      TagRead m;
      for (auto& b : m.epc) b = r.u8();
      m.rssi_dbm_x10 = r.i16();
      m.sensor_kind = r.u8();
      m.sensor_value_milli = r.i32();
      m.time_ms = r.u32();
      return Message{m};
    }
    case MsgId::kCommand: {
      Command m;
      const auto code = r.u8();
      // An out-of-range command code cannot be represented.
      if (code >= kCommandCodeCount) return DecodeError::kBadLength;
      m.cmd = static_cast<CommandCode>(code);
      m.lat_1e7 = r.i32();
      m.lon_1e7 = r.i32();
      m.alt_mm = r.i32();
      m.param_cm = r.u16();
      return Message{m};
    }
    case MsgId::kAck: {
      Ack m;
      m.seq_acked = r.u32();
      m.result = r.u8();
      return Message{m};
    }
  }
  return DecodeError::kUnknownMsgId;
}

}  // namespace

std::string_view to_string(CommandCode c) {
  switch (c) {
    case CommandCode::kNavTo: return "NAV_TO";
    case CommandCode::kCircle: return "CIRCLE";
    case CommandCode::kChangeAlt: return "CHANGE_ALT";
    case CommandCode::kTakeoff: return "TAKEOFF";
    case CommandCode::kLand: return "LAND";
    case CommandCode::kPlaceTag: return "PLACE_TAG";
    case CommandCode::kHoverAt: return "HOVER_AT";
  }
  return "UNKNOWN";
}

CommandCode command_code_from_string(std::string_view s) {
  for (std::uint8_t i = 0; i < kCommandCodeCount; ++i) {
    const auto c = static_cast<CommandCode>(i);
    if (to_string(c) == s) return c;
  }
  fail(ErrorKind::kParse, "unknown command: " + std::string(s));
}

std::string_view message_name(const Message& m) {
  static constexpr std::string_view kNames[] = {"HEARTBEAT", "GPS_POSITION", "TAG_READ",
                                                "COMMAND", "ACK"};
  return kNames[m.index()];
}

std::size_t payload_size(MsgId id) {
  switch (id) {
    case MsgId::kHeartbeat: return 2;
    case MsgId::kGpsPosition: return 16;
    case MsgId::kTagRead: return 23;
    case MsgId::kCommand: return 15;
    case MsgId::kAck: return 5;
  }
  return 0;
}

std::uint16_t crc16_ccitt_false(std::span<const std::uint8_t> data) {
  std::uint16_t crc = 0xFFFF;
  for (auto b : data) {
    crc = static_cast<std::uint16_t>((crc << 8) ^ kCrcTable[((crc >> 8) ^ b) & 0xFF]);
  }
  return crc;
}

Bytes encode_raw_frame(std::uint8_t msg_id, std::uint32_t seq, std::span<const std::uint8_t> payload) {
  if (payload.size() > 255) fail(ErrorKind::kDomain, "payload exceeds 255 bytes");
  Bytes out;
  out.reserve(kFrameOverhead + payload.size());
  Writer w(out);
  w.u8(kFrameSync);
  w.u8(static_cast<std::uint8_t>(payload.size()));
  w.u8(msg_id);
  w.u32(seq);
  out.insert(out.end(), payload.begin(), payload.end());
  const auto crc = crc16_ccitt_false(std::span(out).subspan(1));
  w.u16(crc);
  return out;
}

Bytes encode_frame(const Message& msg, std::uint32_t seq) {
  const Bytes payload = encode_payload(msg);
  return encode_raw_frame(static_cast<std::uint8_t>(msg.index()), seq, payload);
}

std::string_view to_string(DecodeError e) {
  switch (e) {
    case DecodeError::kBadSync: return "bad-sync";
    case DecodeError::kBadCrc: return "bad-crc";
    case DecodeError::kUnknownMsgId: return "unknown-msg-id";
    case DecodeError::kTruncated: return "truncated";
    case DecodeError::kBadLength: return "bad-length";
  }
  return "unknown";
}

DecodeResult decode_frame(std::span<const std::uint8_t> buf) {
  if (buf.empty()) return {DecodeError::kTruncated, 0};
  if (buf[0] != kFrameSync) {
    const auto next = std::find(buf.begin() + 1, buf.end(), kFrameSync);
    return {DecodeError::kBadSync, static_cast<std::size_t>(next - buf.begin())};
  }
  if (buf.size() < kFrameHeaderSize) return {DecodeError::kTruncated, buf.size()};
  const std::size_t len = buf[1];
  const std::size_t total = kFrameOverhead + len;
  if (buf.size() < total) return {DecodeError::kTruncated, buf.size()};

  const auto body = buf.subspan(1, kFrameHeaderSize - 1 + len);
  const std::uint16_t want = static_cast<std::uint16_t>(buf[total - 2] | buf[total - 1] << 8);
  if (crc16_ccitt_false(body) != want) return {DecodeError::kBadCrc, 1};

  const std::uint8_t id = buf[2];
  if (id > static_cast<std::uint8_t>(MsgId::kAck)) return {DecodeError::kUnknownMsgId, total};
  if (payload_size(static_cast<MsgId>(id)) != len) return {DecodeError::kBadLength, total};

  Reader hdr(buf.subspan(3, 4));
  const std::uint32_t seq = hdr.u32();
  auto msg = decode_payload(static_cast<MsgId>(id), buf.subspan(kFrameHeaderSize, len));
  if (auto* err = std::get_if<DecodeError>(&msg)) return {*err, total};
  return {Frame{std::get<Message>(std::move(msg)), seq}, total};
}

void StreamDecoder::feed(std::span<const std::uint8_t> bytes) {
  buf_.insert(buf_.end(), bytes.begin(), bytes.end());
}

std::vector<std::variant<Frame, DecodeError>> StreamDecoder::drain() { return run(false); }
std::vector<std::variant<Frame, DecodeError>> StreamDecoder::finish() { return run(true); }

std::vector<std::variant<Frame, DecodeError>> StreamDecoder::run(bool at_end) {
  std::vector<std::variant<Frame, DecodeError>> out;
  std::size_t pos = 0;
  while (pos < buf_.size()) {
    const auto r = decode_frame(std::span(buf_).subspan(pos));
    if (!r.ok() && r.error() == DecodeError::kTruncated) {
      if (!at_end) break;
      // The claimed length runs past the end; a later sync byte may still
      // start a complete frame.
      out.emplace_back(DecodeError::kTruncated);
      ++pos;
      continue;
    }
    out.push_back(r.value);
    pos += std::max<std::size_t>(r.consumed, 1);
  }
  buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(pos));
  return out;
}

std::vector<std::variant<Frame, DecodeError>> decode_stream(std::span<const std::uint8_t> bytes) {
  StreamDecoder d;
  d.feed(bytes);
  return d.finish();
}

std::vector<Bytes> lossy_channel(std::vector<Bytes> frames, double drop_prob, Rng& rng) {
  if (!(drop_prob >= 0.0 && drop_prob <= 1.0)) {
    fail(ErrorKind::kDomain, "drop probability must be in [0, 1]");
  }
  std::vector<Bytes> out;
  out.reserve(frames.size());
  for (auto& f : frames) {
    if (!rng.bernoulli(drop_prob)) out.push_back(std::move(f));
  }
  return out;
}

}  // namespace rfidsim
