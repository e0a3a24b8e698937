/*
 * Copyright 2026 The rfidsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* Exercises the shared library from plain C. */

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include <rfidsim/rfidsim.h>

static int failures = 0;

#define EXPECT(cond)                                               \
  do {                                                             \
    if (!(cond)) {                                                 \
      fprintf(stderr, "%s:%d: EXPECT(%s) failed; last error: %s\n", \
              __FILE__, __LINE__, #cond, rfidsim_last_error());     \
      ++failures;                                                  \
    }                                                              \
  } while (0)

static char* slurp(const char* path, size_t* len) {
  FILE* f = fopen(path, "rb");
  if (!f) return NULL;
  fseek(f, 0, SEEK_END);
  long n = ftell(f);
  fseek(f, 0, SEEK_SET);
  char* buf = malloc((size_t)n + 1);
  *len = fread(buf, 1, (size_t)n, f);
  buf[*len] = '\0';
  fclose(f);
  return buf;
}

static void test_basics(void) {
  EXPECT(strcmp(rfidsim_version(), "") != 0);
  EXPECT(strcmp(rfidsim_status_name(RFIDSIM_OK), "ok") == 0);
  EXPECT(strcmp(rfidsim_status_name(RFIDSIM_E_NOT_FOUND), "not_found") == 0);
  EXPECT(rfidsim_preset_count() == 8);
  EXPECT(rfidsim_preset_name(rfidsim_preset_count()) == NULL);
  int found = 0;
  for (size_t i = 0; i < rfidsim_preset_count(); ++i) {
    if (strcmp(rfidsim_preset_name(i), "uav_id_field") == 0) found = 1;
  }
  EXPECT(found);
}

static void test_errors(void) {
  rfidsim_scenario* s = NULL;
  EXPECT(rfidsim_scenario_from_preset(NULL, &s) == RFIDSIM_E_INVALID_ARGUMENT);
  EXPECT(rfidsim_scenario_from_preset("uav_id_field", NULL) == RFIDSIM_E_INVALID_ARGUMENT);
  EXPECT(rfidsim_scenario_from_preset("no_such", &s) == RFIDSIM_E_NOT_FOUND);
  EXPECT(s == NULL);
  EXPECT(strstr(rfidsim_last_error(), "no_such") != NULL);
  EXPECT(rfidsim_scenario_from_json("{", &s) == RFIDSIM_E_PARSE);
  EXPECT(rfidsim_scenario_from_json("{\"bogus\": 1}", &s) == RFIDSIM_E_PARSE);
  EXPECT(rfidsim_scenario_from_json("{\"preset\": \"uav_id_field\", \"uav\": {\"cruise_speed\": 0}}",
                                    &s) == RFIDSIM_E_CONFIG);
  EXPECT(rfidsim_scenario_from_json("{\"preset\": \"uav_id_field\", \"home\": [900, 0]}", &s) ==
         RFIDSIM_E_VALIDATION);
  EXPECT(rfidsim_scenario_from_file("/nonexistent/x.json", &s) == RFIDSIM_E_IO);
  EXPECT(rfidsim_log_dump("/nonexistent/x.log", NULL) == RFIDSIM_E_INVALID_ARGUMENT);

  EXPECT(rfidsim_scenario_from_preset("uav_id_field", &s) == RFIDSIM_OK);
  EXPECT(rfidsim_scenario_set_mode(s, "sideways") == RFIDSIM_E_PARSE);
  /* Manual mode without a script is rejected at run time. */
  EXPECT(rfidsim_scenario_set_mode(s, "manual") == RFIDSIM_OK);
  rfidsim_report* r = NULL;
  EXPECT(rfidsim_run(s, 1, NULL, &r) == RFIDSIM_E_VALIDATION);
  EXPECT(r == NULL);
  rfidsim_scenario_free(s);
  rfidsim_scenario_free(NULL);
  rfidsim_report_free(NULL);
  rfidsim_string_free(NULL);
}

static void test_link(void) {
  rfidsim_scenario* s = NULL;
  EXPECT(rfidsim_scenario_from_preset("uav_id_field", &s) == RFIDSIM_OK);
  double sensor = 0, id = 0, near = 0, far = 0;
  EXPECT(rfidsim_link_ranges(s, &sensor, &id) == RFIDSIM_OK);
  EXPECT(fabs(sensor - 1.5) < 0.01);
  EXPECT(id > 3.0);
  EXPECT(rfidsim_link_received_dbm(s, sensor, &near) == RFIDSIM_OK);
  EXPECT(fabs(near - -5.0) < 0.05);
  EXPECT(rfidsim_link_received_dbm(s, 3.0, &far) == RFIDSIM_OK);
  EXPECT(far < near);
  EXPECT(rfidsim_link_received_dbm(s, -1.0, &far) == RFIDSIM_E_DOMAIN);
  rfidsim_scenario_free(s);
}

static void test_run(void) {
  rfidsim_scenario* s = NULL;
  EXPECT(rfidsim_scenario_from_preset("uav_sensor_field", &s) == RFIDSIM_OK);
  EXPECT(rfidsim_scenario_seed(s) == 1);
  const char* log_path = "capi_run.log";
  rfidsim_report* r = NULL;
  EXPECT(rfidsim_run(s, 1, log_path, &r) == RFIDSIM_OK);
  if (r == NULL) {
    rfidsim_scenario_free(s);
    return;
  }
  size_t n = rfidsim_report_tag_count(r);
  EXPECT(n == 3);
  EXPECT(strcmp(rfidsim_report_status(r), "done") == 0);
  EXPECT(rfidsim_report_mission_time_s(r) > 0.0);
  size_t detected = 0;
  for (size_t i = 0; i < n; ++i) {
    rfidsim_tag_outcome t;
    EXPECT(rfidsim_report_tag(r, i, &t) == RFIDSIM_OK);
    EXPECT(strlen(t.epc) == 24);
    EXPECT(t.kind != NULL);
    EXPECT(t.detected == !isnan(t.time_to_read_s));
    detected += t.detected ? 1u : 0u;
  }
  EXPECT(detected == rfidsim_report_detected_count(r));
  rfidsim_tag_outcome t;
  EXPECT(rfidsim_report_tag(r, n, &t) == RFIDSIM_E_INVALID_ARGUMENT);

  char* json = NULL;
  EXPECT(rfidsim_report_to_json(r, &json) == RFIDSIM_OK);
  EXPECT(json && strstr(json, "\"tags\"") != NULL);
  rfidsim_string_free(json);

  char* bytes = NULL;
  size_t len = 0;
  EXPECT(rfidsim_report_log(r, &bytes, &len) == RFIDSIM_OK);
  size_t file_len = 0;
  char* file = slurp(log_path, &file_len);
  EXPECT(file != NULL);
  EXPECT(file_len == len);
  EXPECT(file && bytes && memcmp(file, bytes, len) == 0);
  free(file);
  rfidsim_string_free(bytes);

  char* ndjson = NULL;
  EXPECT(rfidsim_log_dump(log_path, &ndjson) == RFIDSIM_OK);
  EXPECT(ndjson && strstr(ndjson, "TAG_READ") != NULL);
  rfidsim_string_free(ndjson);
  remove(log_path);

  /* Same seed, same bytes. */
  rfidsim_report* again = NULL;
  EXPECT(rfidsim_run(s, 1, NULL, &again) == RFIDSIM_OK);
  char* bytes2 = NULL;
  size_t len2 = 0;
  EXPECT(rfidsim_report_log(r, &bytes, &len) == RFIDSIM_OK);
  EXPECT(rfidsim_report_log(again, &bytes2, &len2) == RFIDSIM_OK);
  EXPECT(len == len2 && memcmp(bytes, bytes2, len) == 0);
  rfidsim_string_free(bytes);
  rfidsim_string_free(bytes2);
  rfidsim_report_free(again);
  rfidsim_report_free(r);
  rfidsim_scenario_free(s);
}

static void test_montecarlo(void) {
  rfidsim_scenario* s = NULL;
  EXPECT(rfidsim_scenario_from_preset("uav_id_field", &s) == RFIDSIM_OK);
  const char* csv_path = "capi_mc.csv";
  char* summary = NULL;
  EXPECT(rfidsim_montecarlo(s, 4, 1, 2, csv_path, &summary) == RFIDSIM_OK);
  EXPECT(summary && strstr(summary, "\"per_tag\"") != NULL);
  rfidsim_string_free(summary);
  EXPECT(rfidsim_montecarlo(s, 0, 1, 2, NULL, NULL) == RFIDSIM_E_VALIDATION);

  size_t len = 0;
  char* csv = slurp(csv_path, &len);
  EXPECT(csv != NULL);
  if (csv) {
    const char* header = "run_id,tag_epc,detected,time_to_read_s,sensor_value\n";
    EXPECT(strncmp(csv, header, strlen(header)) == 0);
    size_t lines = 0;
    for (size_t i = 0; i < len; ++i) lines += csv[i] == '\n';
    EXPECT(lines == 1 + 4 * 5);
  }
  free(csv);
  remove(csv_path);
  rfidsim_scenario_free(s);
}

static void test_server(void) {
  rfidsim_scenario* s = NULL;
  EXPECT(rfidsim_scenario_from_preset("uav_id_field", &s) == RFIDSIM_OK);
  rfidsim_server* srv = NULL;
  EXPECT(rfidsim_server_start(s, "127.0.0.1", 0, NULL, 0.0, &srv) == RFIDSIM_OK);
  EXPECT(srv != NULL);
  if (srv) {
    EXPECT(rfidsim_server_port(srv) > 0);
    rfidsim_server_stop(srv);
    rfidsim_server_free(srv);
  }
  rfidsim_scenario_free(s);
}

int main(void) {
  test_basics();
  test_errors();
  test_link();
  test_run();
  test_montecarlo();
  test_server();
  if (failures) {
    fprintf(stderr, "%d expectation(s) failed\n", failures);
    return 1;
  }
  puts("capi: all expectations met");
  return 0;
}
