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

#include "core/service.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <map>
#include <mutex>
#include <thread>
#include <utility>

#include <httplib.h>

#include "core/error.hpp"
#include "core/json_io.hpp"
#include "core/mission_control.hpp"
#include "core/simulation.hpp"

namespace rfidsim {
namespace {

int http_status(ErrorKind k) {
  switch (k) {
    case ErrorKind::kParse:
    case ErrorKind::kDomain:
      return 400;
    case ErrorKind::kNotFound:
      return 404;
    case ErrorKind::kState:
    case ErrorKind::kUnsupported:
      return 409;
    case ErrorKind::kConfig:
    case ErrorKind::kValidation:
      return 422;
    case ErrorKind::kIo:
      return 500;
  }
  return 500;
}

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& msg) {
  send_json(res, status, Json{{"error", msg}});
}

MissionId path_id(const httplib::Request& req) {
  const std::string& s = req.matches[1];
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    fail(ErrorKind::kNotFound, "no mission " + s);
  }
}

}  // namespace

struct Service::Impl {
  struct Run {
    std::thread thread;
    std::atomic<std::uint64_t> time_ms{0};
  };

  ScenarioConfig world;
  ServiceOptions opts;
  MissionControl mc;
  httplib::Server http;
  std::thread listener;
  int bound_port = 0;

  std::mutex mu;
  std::condition_variable stopped_cv;
  bool stopped = false;
  std::atomic<bool> stopping{false};
  std::map<MissionId, std::unique_ptr<Run>> runs;

  Impl(ScenarioConfig w, ServiceOptions o)
      : world(std::move(w)),
        opts(std::move(o)),
        mc(opts.data_dir ? MissionControl(*opts.data_dir) : MissionControl()) {}

  // Wraps a handler so library errors become JSON error responses.
  template <class F>
  httplib::Server::Handler guarded(F f) {
    return [f](const httplib::Request& req, httplib::Response& res) {
      try {
        f(req, res);
      } catch (const Error& e) {
        send_error(res, http_status(e.kind()), e.what());
      } catch (const std::exception& e) {
        send_error(res, 500, e.what());
      }
    };
  }

  void fly(MissionId id, Run* run) {
    const MissionRecord rec = mc.record(id);
    ScenarioConfig cfg = world;
    if (cfg.vehicle != rec.vehicle) cfg.script.clear();
    cfg.vehicle = rec.vehicle;
    cfg.mode = rec.mode;
    cfg.origin = rec.origin;
    try {
      Simulation sim(cfg, rec.seed, mc, id);
      const auto t0 = std::chrono::steady_clock::now();
      while (!stopping && sim.step()) {
        run->time_ms = sim.time_ms();
        if (opts.speed > 0.0) {
          const auto due = t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                    std::chrono::duration<double>(sim.time_ms() / 1000.0 /
                                                                  opts.speed));
          std::this_thread::sleep_until(due);
        }
      }
      if (stopping && mc.status(id) == MissionStatus::kRunning) {
        mc.abort_mission(id, "service stopped");
      }
    } catch (const std::exception& e) {
      if (mc.status(id) == MissionStatus::kRunning) mc.abort_mission(id, e.what());
    }
  }

  void routes() {
    http.Get("/health", guarded([](const httplib::Request&, httplib::Response& res) {
               send_json(res, 200, Json{{"ok", true}});
             }));

    http.Get("/presets", guarded([](const httplib::Request&, httplib::Response& res) {
               send_json(res, 200, Json(preset_names()));
             }));

    http.Get("/missions", guarded([this](const httplib::Request&, httplib::Response& res) {
               send_json(res, 200, Json(mc.list_missions()));
             }));

    http.Post("/missions", guarded([this](const httplib::Request& req, httplib::Response& res) {
                Json body = parse_json(req.body);
                if (!body.is_object()) fail(ErrorKind::kParse, "mission request must be an object");
                if (!body.contains("origin")) body["origin"] = world.origin;
                if (!body.contains("vehicle")) body["vehicle"] = world.vehicle;
                const MissionRequest request = body.get<MissionRequest>();
                send_json(res, 201, Json(mc.create_mission(request)));
              }));

    http.Get(R"(/missions/([^/]+))",
             guarded([this](const httplib::Request& req, httplib::Response& res) {
               const MissionId id = path_id(req);
               send_json(res, 200, Json{{"record", mc.record(id)}, {"view", mc.query_mission(id)}});
             }));

    http.Post(R"(/missions/([^/]+)/start)",
              guarded([this](const httplib::Request& req, httplib::Response& res) {
                const MissionId id = path_id(req);
                std::lock_guard lk(mu);
                if (stopping) fail(ErrorKind::kState, "service is stopping");
                mc.start_mission(id);
                auto run = std::make_unique<Run>();
                Run* r = run.get();
                run->thread = std::thread([this, id, r] { fly(id, r); });
                runs.emplace(id, std::move(run));
                send_json(res, 200, Json(mc.record(id)));
              }));

    http.Post(R"(/missions/([^/]+)/abort)",
              guarded([this](const httplib::Request& req, httplib::Response& res) {
                const MissionId id = path_id(req);
                mc.abort_mission(id, "aborted by operator");
                send_json(res, 200, Json(mc.record(id)));
              }));

    http.Post(R"(/missions/([^/]+)/command)",
              guarded([this](const httplib::Request& req, httplib::Response& res) {
                const MissionId id = path_id(req);
                const Json body = parse_json(req.body);
                check_keys(body, {"cmd", "lat", "lon", "alt_m", "param_cm"}, "command");
                Command cmd;
                std::string name;
                read_opt(body, "cmd", name);
                cmd.cmd = command_code_from_string(name);
                double lat = 0.0, lon = 0.0, alt = 0.0;
                int param = 0;
                read_opt(body, "lat", lat);
                read_opt(body, "lon", lon);
                read_opt(body, "alt_m", alt);
                read_opt(body, "param_cm", param);
                if (param < 0 || param > 0xFFFF) fail(ErrorKind::kValidation, "param_cm out of range");
                cmd.lat_1e7 = to_1e7(lat);
                cmd.lon_1e7 = to_1e7(lon);
                cmd.alt_mm = static_cast<std::int32_t>(std::lround(alt * 1000.0));
                cmd.param_cm = static_cast<std::uint16_t>(param);
                std::uint64_t now = 0;
                {
                  std::lock_guard lk(mu);
                  if (auto it = runs.find(id); it != runs.end()) now = it->second->time_ms;
                }
                const Bytes frame = mc.submit_manual_command(id, now, cmd);
                send_json(res, 202, Json{{"frame", frame_to_json(frame)}, {"recv_ms", now}});
              }));

    http.Get(R"(/missions/([^/]+)/events)",
             guarded([this](const httplib::Request& req, httplib::Response& res) {
               const MissionId id = path_id(req);
               mc.record(id);
               std::size_t from = 0;
               bool follow = true;
               if (req.has_param("from")) {
                 try {
                   from = std::stoull(req.get_param_value("from"));
                 } catch (const std::exception&) {
                   fail(ErrorKind::kParse, "bad 'from'");
                 }
               }
               if (req.has_param("follow")) {
                 const auto v = req.get_param_value("follow");
                 follow = !(v == "0" || v == "false");
               }
               auto cursor = std::make_shared<std::size_t>(from);
               res.set_chunked_content_provider(
                   "application/x-ndjson",
                   [this, id, cursor, follow](std::size_t, httplib::DataSink& sink) {
                     const auto recs = mc.wait_for_records(
                         id, *cursor, follow ? std::chrono::milliseconds(250)
                                             : std::chrono::milliseconds(0));
                     std::string chunk;
                     for (const auto& r : recs) {
                       chunk += log_record_to_json((*cursor)++, r).dump();
                       chunk += '\n';
                     }
                     if (!chunk.empty() && !sink.write(chunk.data(), chunk.size())) return false;
                     const auto st = mc.status(id);
                     const bool live = st == MissionStatus::kRunning || st == MissionStatus::kPlanned;
                     if (recs.empty() && (!follow || !live || stopping)) {
                       // Records appended between the wait and the status read.
                       if (mc.log(id).size() <= *cursor) {
                         sink.done();
                       }
                     }
                     return true;
                   });
             }));
  }
};

Service::Service(ScenarioConfig world, ServiceOptions opts)
    : impl_(std::make_unique<Impl>(std::move(world), std::move(opts))) {
  impl_->world.validate();
  impl_->routes();
}

Service::~Service() { stop(); }

int Service::start() {
  auto& im = *impl_;
  if (im.listener.joinable()) fail(ErrorKind::kState, "service already started");
  if (im.opts.port == 0) {
    im.bound_port = im.http.bind_to_any_port(im.opts.host);
  } else {
    im.bound_port = im.http.bind_to_port(im.opts.host, im.opts.port) ? im.opts.port : -1;
  }
  if (im.bound_port <= 0) {
    fail(ErrorKind::kIo, "cannot bind " + im.opts.host + ":" + std::to_string(im.opts.port));
  }
  im.listener = std::thread([&im] { im.http.listen_after_bind(); });
  im.http.wait_until_ready();
  return im.bound_port;
}

int Service::port() const { return impl_->bound_port; }

void Service::wait() {
  std::unique_lock lk(impl_->mu);
  impl_->stopped_cv.wait(lk, [this] { return impl_->stopped; });
}

void Service::stop() {
  auto& im = *impl_;
  std::map<MissionId, std::unique_ptr<Impl::Run>> runs;
  {
    std::lock_guard lk(im.mu);
    if (im.stopped) return;
    im.stopping = true;
    runs.swap(im.runs);
  }
  for (auto& [id, r] : runs) {
    if (r->thread.joinable()) r->thread.join();
  }
  im.http.stop();
  if (im.listener.joinable()) im.listener.join();
  {
    std::lock_guard lk(im.mu);
    im.stopped = true;
  }
  im.stopped_cv.notify_all();
}

}  // namespace rfidsim
