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

/* C interface of the rfidsim library. All handles are opaque. Functions
 * that can fail return an rfidsim_status; on failure a message describing the
 * last error of the calling thread is available from rfidsim_last_error().
 * Strings returned through char** out-parameters are owned by the caller and
 * must be released with rfidsim_string_free(). */

#ifndef RFIDSIM_RFIDSIM_H_
#define RFIDSIM_RFIDSIM_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(RFIDSIM_BUILDING)
#define RFIDSIM_API __declspec(dllexport)
#else
#define RFIDSIM_API __declspec(dllimport)
#endif
#else
#define RFIDSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rfidsim_status {
  RFIDSIM_OK = 0,
  RFIDSIM_E_INVALID_ARGUMENT = 1, /* null pointer, index out of range */
  RFIDSIM_E_PARSE = 2,            /* malformed JSON, log or wire data */
  RFIDSIM_E_CONFIG = 3,           /* inconsistent configuration */
  RFIDSIM_E_VALIDATION = 4,       /* malformed mission request */
  RFIDSIM_E_NOT_FOUND = 5,
  RFIDSIM_E_IO = 6,
  RFIDSIM_E_STATE = 7,
  RFIDSIM_E_DOMAIN = 8,
  RFIDSIM_E_UNSUPPORTED = 9,
  RFIDSIM_E_INTERNAL = 10
} rfidsim_status;

typedef struct rfidsim_scenario rfidsim_scenario;
typedef struct rfidsim_report rfidsim_report;
typedef struct rfidsim_server rfidsim_server;

RFIDSIM_API const char* rfidsim_version(void);
RFIDSIM_API const char* rfidsim_status_name(rfidsim_status status);
/* Message of the last failure on this thread; "" if none. */
RFIDSIM_API const char* rfidsim_last_error(void);
RFIDSIM_API void rfidsim_string_free(char* s);

/* Scenarios */

RFIDSIM_API size_t rfidsim_preset_count(void);
/* NULL when index is out of range. */
RFIDSIM_API const char* rfidsim_preset_name(size_t index);

RFIDSIM_API rfidsim_status rfidsim_scenario_from_preset(const char* name,
                                                        rfidsim_scenario** out);
RFIDSIM_API rfidsim_status rfidsim_scenario_from_json(const char* json, rfidsim_scenario** out);
RFIDSIM_API rfidsim_status rfidsim_scenario_from_file(const char* path, rfidsim_scenario** out);
/* mode: "autonomous" or "manual" ("manual-script"). */
RFIDSIM_API rfidsim_status rfidsim_scenario_set_mode(rfidsim_scenario* scenario, const char* mode);
/* The scenario's default seed. */
RFIDSIM_API uint64_t rfidsim_scenario_seed(const rfidsim_scenario* scenario);
RFIDSIM_API rfidsim_status rfidsim_scenario_to_json(const rfidsim_scenario* scenario, char** out);
RFIDSIM_API void rfidsim_scenario_free(rfidsim_scenario* scenario);

/* Boresight link budget of the scenario's reader/tag pair. */
RFIDSIM_API rfidsim_status rfidsim_link_received_dbm(const rfidsim_scenario* scenario,
                                                     double distance_m, double* out_dbm);
/* Largest boresight distances meeting the sensor and identity thresholds. */
RFIDSIM_API rfidsim_status rfidsim_link_ranges(const rfidsim_scenario* scenario,
                                               double* sensor_range_m, double* id_range_m);

/* Single runs */

typedef struct rfidsim_tag_outcome {
  char epc[25]; /* 24 hex digits */
  const char* kind;
  int detected;
  double time_to_read_s; /* NaN when not detected */
  double sensor_value;   /* NaN without a sensor reading */
} rfidsim_tag_outcome;

/* log_path may be NULL; otherwise the mission log is written there. */
RFIDSIM_API rfidsim_status rfidsim_run(const rfidsim_scenario* scenario, uint64_t seed,
                                       const char* log_path, rfidsim_report** out);
RFIDSIM_API size_t rfidsim_report_tag_count(const rfidsim_report* report);
RFIDSIM_API size_t rfidsim_report_detected_count(const rfidsim_report* report);
RFIDSIM_API double rfidsim_report_mission_time_s(const rfidsim_report* report);
/* "done" or "aborted". */
RFIDSIM_API const char* rfidsim_report_status(const rfidsim_report* report);
RFIDSIM_API rfidsim_status rfidsim_report_tag(const rfidsim_report* report, size_t index,
                                              rfidsim_tag_outcome* out);
RFIDSIM_API rfidsim_status rfidsim_report_to_json(const rfidsim_report* report, char** out);
/* Mission log as serialized bytes (caller frees with rfidsim_string_free). */
RFIDSIM_API rfidsim_status rfidsim_report_log(const rfidsim_report* report, char** bytes,
                                              size_t* len);
RFIDSIM_API void rfidsim_report_free(rfidsim_report* report);

/* Monte Carlo over seeds base_seed .. base_seed + runs - 1. threads 0 uses all
 * cores. csv_path and summary_json may each be NULL. */
RFIDSIM_API rfidsim_status rfidsim_montecarlo(const rfidsim_scenario* scenario, uint64_t runs,
                                              uint64_t base_seed, unsigned threads,
                                              const char* csv_path, char** summary_json);

/* Decodes a persisted mission log into newline-delimited JSON. */
RFIDSIM_API rfidsim_status rfidsim_log_dump(const char* log_path, char** ndjson);

/* HTTP service */

/* port 0 picks a free port; data_dir may be NULL; speed 0 runs unthrottled.
 * The server runs on background threads until stopped. */
RFIDSIM_API rfidsim_status rfidsim_server_start(const rfidsim_scenario* world, const char* host,
                                                int port, const char* data_dir, double speed,
                                                rfidsim_server** out);
RFIDSIM_API int rfidsim_server_port(const rfidsim_server* server);
/* Blocks until rfidsim_server_stop is called from another thread. */
RFIDSIM_API void rfidsim_server_wait(rfidsim_server* server);
RFIDSIM_API void rfidsim_server_stop(rfidsim_server* server);
/* Stops the server if needed. */
RFIDSIM_API void rfidsim_server_free(rfidsim_server* server);

#ifdef __cplusplus
}
#endif

#endif /* RFIDSIM_RFIDSIM_H_ */
