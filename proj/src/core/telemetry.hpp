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

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "core/rng.hpp"

namespace rfidsim {

// Framed binary link between vehicle and ground control. Layout (all
// multi-byte fields little-endian):
//
//   0xFD | len u8 | msg_id u8 | seq u32 | payload[len] | crc u16
//
// crc is CRC-16/CCITT-FALSE over len..payload. See docs/protocol.md.
inline constexpr std::uint8_t kFrameSync = 0xFD;
inline constexpr std::size_t kFrameHeaderSize = 7;
inline constexpr std::size_t kFrameOverhead = kFrameHeaderSize + 2;

struct Heartbeat {
  std::uint8_t vehicle_type = 0;
  std::uint8_t fsm_state = 0;
  friend bool operator==(const Heartbeat&, const Heartbeat&) = default;
};

struct GpsPosition {
  std::int32_t lat_1e7 = 0;
  std::int32_t lon_1e7 = 0;
  std::int32_t alt_mm = 0;
  std::uint32_t time_ms = 0;
  friend bool operator==(const GpsPosition&, const GpsPosition&) = default;
};

struct TagRead {
  std::array<std::uint8_t, 12> epc{};
  std::int16_t rssi_dbm_x10 = 0;
  std::uint8_t sensor_kind = 0;
  std::int32_t sensor_value_milli = 0;
  std::uint32_t time_ms = 0;
  friend bool operator==(const TagRead&, const TagRead&) = default;
};

enum class CommandCode : std::uint8_t {
  kNavTo = 0,
  kCircle = 1,
  kChangeAlt = 2,
  kTakeoff = 3,
  kLand = 4,
  kPlaceTag = 5,
  kHoverAt = 6,
};

inline constexpr std::uint8_t kCommandCodeCount = 7;

std::string_view to_string(CommandCode c);
CommandCode command_code_from_string(std::string_view s);

struct Command {
  CommandCode cmd = CommandCode::kNavTo;
  std::int32_t lat_1e7 = 0;
  std::int32_t lon_1e7 = 0;
  std::int32_t alt_mm = 0;
  std::uint16_t param_cm = 0;
  friend bool operator==(const Command&, const Command&) = default;
};

enum class AckResult : std::uint8_t {
  kAccepted = 0,
  kCompleted = 1,
  kRejected = 2,
};

struct Ack {
  std::uint32_t seq_acked = 0;
  std::uint8_t result = 0;
  friend bool operator==(const Ack&, const Ack&) = default;
};

// Variant index is the wire msg_id.
using Message = std::variant<Heartbeat, GpsPosition, TagRead, Command, Ack>;

enum class MsgId : std::uint8_t {
  kHeartbeat = 0,
  kGpsPosition = 1,
  kTagRead = 2,
  kCommand = 3,
  kAck = 4,
};

std::string_view message_name(const Message& m);
std::size_t payload_size(MsgId id);

struct Frame {
  Message msg;
  std::uint32_t seq = 0;
  friend bool operator==(const Frame&, const Frame&) = default;
};

using Bytes = std::vector<std::uint8_t>;

std::uint16_t crc16_ccitt_false(std::span<const std::uint8_t> data);

Bytes encode_frame(const Message& msg, std::uint32_t seq);
// Raw framing with an arbitrary msg_id and payload; throws on oversize payload.
Bytes encode_raw_frame(std::uint8_t msg_id, std::uint32_t seq, std::span<const std::uint8_t> payload);

enum class DecodeError {
  kBadSync,
  kBadCrc,
  kUnknownMsgId,
  kTruncated,
  kBadLength,  // valid CRC but payload size wrong for the message type
};

std::string_view to_string(DecodeError e);

struct DecodeResult {
  std::variant<Frame, DecodeError> value;
  // Bytes to discard before the next decode attempt.
  std::size_t consumed = 0;

  bool ok() const { return std::holds_alternative<Frame>(value); }
  const Frame& frame() const { return std::get<Frame>(value); }
  DecodeError error() const { return std::get<DecodeError>(value); }
};

// Decodes one frame at the start of buf. Never throws on malformed input.
DecodeResult decode_frame(std::span<const std::uint8_t> buf);

// Incremental decoder over an arbitrary byte stream. Resynchronizes on the
// sync byte; each malformed region yields one error.
class StreamDecoder {
 public:
  void feed(std::span<const std::uint8_t> bytes);
  // Frames and errors decodable so far, in stream order.
  std::vector<std::variant<Frame, DecodeError>> drain();
  // Like drain, but any incomplete tail becomes kTruncated.
  std::vector<std::variant<Frame, DecodeError>> finish();

 private:
  std::vector<std::variant<Frame, DecodeError>> run(bool at_end);
  Bytes buf_;
};

std::vector<std::variant<Frame, DecodeError>> decode_stream(std::span<const std::uint8_t> bytes);

// Independent Bernoulli drops; order preserved.
std::vector<Bytes> lossy_channel(std::vector<Bytes> frames, double drop_prob, Rng& rng);

}  // namespace rfidsim
