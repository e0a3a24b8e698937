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

#include "core/inventory.hpp"

#include <algorithm>

#include "core/error.hpp"

namespace rfidsim {

namespace {

int count(const InventoryRound& r, SlotState s) {
  return static_cast<int>(
      std::count_if(r.slots.begin(), r.slots.end(), [s](const Slot& x) { return x.state == s; }));
}

std::vector<double> powers_for(std::span<const Tag> tags, const AntennaPose& reader,
                               const LinkConfig& cfg) {
  std::vector<double> p;
  p.reserve(tags.size());
  for (const auto& t : tags) p.push_back(received_power_dbm(reader, t.pose, cfg));
  return p;
}

}  // namespace

int InventoryRound::idles() const { return count(*this, SlotState::kIdle); }
int InventoryRound::singles() const { return count(*this, SlotState::kSingle); }
int InventoryRound::collisions() const { return count(*this, SlotState::kCollision); }

InventoryRound run_aloha_frame(std::span<const double> participation, int q, Rng& rng) {
  if (q < 0 || q > kMaxQ) fail(ErrorKind::kDomain, "Q must be in [0, 15]");
  InventoryRound round;
  round.q = q;
  const std::size_t n_slots = std::size_t{1} << q;
  round.slots.assign(n_slots, Slot{});
  std::vector<int> occupancy(n_slots, 0);
  for (std::size_t i = 0; i < participation.size(); ++i) {
    if (!rng.bernoulli(participation[i])) continue;
    const auto slot = static_cast<std::size_t>(rng.below(n_slots));
    if (++occupancy[slot] == 1) round.slots[slot].tag_index = i;
  }
  for (std::size_t s = 0; s < n_slots; ++s) {
    round.slots[s].state = occupancy[s] == 0   ? SlotState::kIdle
                           : occupancy[s] == 1 ? SlotState::kSingle
                                               : SlotState::kCollision;
  }
  return round;
}

InventoryRound run_inventory_round(std::span<const Tag> tags, std::span<const double> received_dbm,
                                   const LinkConfig& cfg, int q, Rng& rng) {
  if (received_dbm.size() != tags.size()) {
    fail(ErrorKind::kDomain, "one received power per tag required");
  }
  std::vector<double> p;
  p.reserve(tags.size());
  for (std::size_t i = 0; i < tags.size(); ++i) {
    p.push_back(read_probability(received_dbm[i], participation_threshold_dbm(tags[i].kind, cfg),
                                 cfg.logistic_slope_db));
  }
  InventoryRound round = run_aloha_frame(p, q, rng);
  for (const auto& slot : round.slots) {
    // Unknown EPCs are dropped at the reader as a privacy precaution.
    if (slot.state == SlotState::kSingle && tags[slot.tag_index].whitelisted) {
      round.singulated.push_back(slot.tag_index);
    }
  }
  return round;
}

InventoryRound run_inventory_round(std::span<const Tag> tags, const AntennaPose& reader,
                                   const LinkConfig& cfg, int q, Rng& rng) {
  const auto p = powers_for(tags, reader, cfg);
  return run_inventory_round(tags, p, cfg, q, rng);
}

int adjust_q(int q, int n_collisions, int n_idles) {
  if (q < 0 || q > kMaxQ) fail(ErrorKind::kDomain, "Q must be in [0, 15]");
  const int step = n_collisions > n_idles ? 1 : n_collisions < n_idles ? -1 : 0;
  return std::clamp(q + step, 0, kMaxQ);
}

std::string_view to_string(SensorReadError e) {
  switch (e) {
    case SensorReadError::kUnknownEpc: return "unknown-epc";
    case SensorReadError::kNotWhitelisted: return "not-whitelisted";
    case SensorReadError::kOutOfRange: return "tag-out-of-range";
    case SensorReadError::kNotReady: return "tag-not-ready";
    case SensorReadError::kTransactionFailed: return "transaction-failed";
  }
  return "unknown";
}

SensorReadResult read_sensor(const Epc& epc, std::span<const Tag> tags,
                             std::span<const double> received_dbm, const SensorReadContext& ctx,
                             Rng& rng, std::uint32_t timestamp_ms) {
  const auto it = std::find_if(tags.begin(), tags.end(), [&](const Tag& t) { return t.epc == epc; });
  if (it == tags.end()) return SensorReadError::kUnknownEpc;
  const auto idx = static_cast<std::size_t>(it - tags.begin());
  const Tag& tag = *it;
  if (!tag.whitelisted) return SensorReadError::kNotWhitelisted;

  const double rx = received_dbm[idx];
  const double threshold = participation_threshold_dbm(tag.kind, ctx.link);
  TagReadRecord rec;
  rec.epc = epc;
  rec.rssi_dbm = rx;
  rec.timestamp_ms = timestamp_ms;
  if (tag.kind == TagKind::kIdOnly) return rec;

  if (rx < threshold) return SensorReadError::kOutOfRange;
  if (!sensor_ready(tag, ctx.charge)) return SensorReadError::kNotReady;
  if (!rng.bernoulli(read_probability(rx, threshold, ctx.link.logistic_slope_db))) {
    return SensorReadError::kTransactionFailed;
  }
  rec.sensor = sense(tag, ctx.env, ctx.calibration);
  return rec;
}

SensorReadResult read_sensor(const Epc& epc, std::span<const Tag> tags, const AntennaPose& reader,
                             const SensorReadContext& ctx, Rng& rng, std::uint32_t timestamp_ms) {
  const auto p = powers_for(tags, reader, ctx.link);
  return read_sensor(epc, tags, p, ctx, rng, timestamp_ms);
}

}  // namespace rfidsim
