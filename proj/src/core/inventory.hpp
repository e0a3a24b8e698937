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

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "core/rng.hpp"
#include "core/tag_model.hpp"

namespace rfidsim {

inline constexpr int kMaxQ = 15;

enum class SlotState { kIdle, kSingle, kCollision };

struct Slot {
  SlotState state = SlotState::kIdle;
  // Index into the tag list for kSingle slots.
  std::size_t tag_index = 0;
};

// One framed-slotted-ALOHA frame of 2^q slots.
struct InventoryRound {
  int q = 2;
  std::vector<Slot> slots;
  // Singulated tags that passed the whitelist, in slot order.
  std::vector<std::size_t> singulated;

  int idles() const;
  int singles() const;
  int collisions() const;
};

// Core frame: tag i participates with probability participation[i] and picks
// a uniform slot. Whitelist filtering is left to the caller.
InventoryRound run_aloha_frame(std::span<const double> participation, int q, Rng& rng);

// Reader-side round over a scene with precomputed forward-link power per tag.
InventoryRound run_inventory_round(std::span<const Tag> tags, std::span<const double> received_dbm,
                                   const LinkConfig& cfg, int q, Rng& rng);

// Convenience overload computing received power from geometry.
InventoryRound run_inventory_round(std::span<const Tag> tags, const AntennaPose& reader,
                                   const LinkConfig& cfg, int q, Rng& rng);

// Standard Q step: up on more collisions than idles, down on fewer, clamped.
int adjust_q(int q, int n_collisions, int n_idles);

struct TagReadRecord {
  Epc epc;
  double rssi_dbm = 0.0;
  std::optional<SensorValue> sensor;
  std::uint32_t timestamp_ms = 0;
};

enum class SensorReadError {
  kUnknownEpc,
  kNotWhitelisted,
  kOutOfRange,
  kNotReady,
  kTransactionFailed,
};

std::string_view to_string(SensorReadError e);

struct SensorReadContext {
  LinkConfig link;
  ChargeConfig charge;
  Environment env;
  SensorCalibration calibration;
};

using SensorReadResult = std::variant<TagReadRecord, SensorReadError>;

// Memory-mediated sensor transaction. ID-only tags yield an identity-only
// record. received_dbm is the forward-link power at the tag.
SensorReadResult read_sensor(const Epc& epc, std::span<const Tag> tags,
                             std::span<const double> received_dbm, const SensorReadContext& ctx,
                             Rng& rng, std::uint32_t timestamp_ms);

SensorReadResult read_sensor(const Epc& epc, std::span<const Tag> tags, const AntennaPose& reader,
                             const SensorReadContext& ctx, Rng& rng, std::uint32_t timestamp_ms);

}  // namespace rfidsim
