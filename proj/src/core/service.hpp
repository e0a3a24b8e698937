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
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "core/scenario.hpp"

namespace rfidsim {

struct ServiceOptions {
  std::string host = "127.0.0.1";
  // 0 picks a free port.
  int port = 8080;
  std::optional<std::filesystem::path> data_dir;
  // Simulated seconds per wall-clock second; 0 runs as fast as possible.
  double speed = 1.0;
};

// HTTP front end of MissionControl. Missions started over the API fly in
// the scenario's world.
//
//   GET  /health
//   GET  /presets
//   GET  /missions                      list of records
//   POST /missions                      create from a mission request
//   GET  /missions/{id}                 {record, view}
//   POST /missions/{id}/start
//   POST /missions/{id}/abort
//   POST /missions/{id}/command         manual missions only
//   GET  /missions/{id}/events?from=N&follow=1   NDJSON log stream
class Service {
 public:
  Service(ScenarioConfig world, ServiceOptions opts);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Binds and starts serving on a background thread; returns the bound port.
  int start();
  int port() const;
  // Blocks until stop() is called.
  void wait();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace rfidsim
