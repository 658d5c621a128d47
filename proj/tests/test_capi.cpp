#include <doctest.h>

#include <cstring>
#include <string>

#include "growthlab/growthlab.h"

TEST_CASE("c interface runs a suite and serializes the report") {
  glab_report* report = nullptr;
  REQUIRE(glab_verify_suite("diagonal", "{\"seed\": 5}", &report) == GLAB_OK);
  REQUIRE(report != nullptr);
  CHECK(glab_report_status(report) == 0);

  char* json = nullptr;
  REQUIRE(glab_report_json(report, &json) == GLAB_OK);
  std::string text = json;
  CHECK(text.find("\"seed\": 5") != std::string::npos);
  CHECK(text.find("escape-avoids-levels") != std::string::npos);
  glab_string_free(json);

  char* table = nullptr;
  REQUIRE(glab_report_table(report, &table) == GLAB_OK);
  CHECK(std::string(table).find("PASS") != std::string::npos);
  glab_string_free(table);
  glab_report_free(report);
}

TEST_CASE("c interface error codes") {
  glab_report* report = nullptr;
  CHECK(glab_verify_suite("nope", nullptr, &report) == GLAB_E_USAGE);
  CHECK(report == nullptr);
  CHECK(std::strlen(glab_last_error()) > 0);

  CHECK(glab_run_scenario_json("{oops", nullptr, &report) == GLAB_E_PARSE);
  CHECK(glab_run_scenario_json("{\"kind\": \"wat\", \"payload\": {}}", nullptr,
                               &report) == GLAB_E_SCHEMA);
  CHECK(glab_run_scenario_file("/no/such/file.json", nullptr, &report) ==
        GLAB_E_PARSE);
  CHECK(glab_verify_suite(nullptr, nullptr, &report) == GLAB_E_USAGE);
}

TEST_CASE("c interface scenario round trip") {
  const char* doc = R"({
    "kind": "kelley",
    "payload": {
      "families": {"f": {"atoms": ["x", "y"], "sets": [["x"], ["y"]]}},
      "checks": [
        {"check": "kappa_lp", "family": "f", "expect": "1/2"},
        {"check": "lp_vs_bounds", "family": "f", "L": 6}
      ]
    }
  })";
  glab_report* report = nullptr;
  REQUIRE(glab_run_scenario_json(doc, "{\"timing\": true}", &report) ==
          GLAB_OK);
  CHECK(glab_report_status(report) == 0);
  char* json = nullptr;
  REQUIRE(glab_report_json(report, &json) == GLAB_OK);
  CHECK(std::string(json).find("timing_ms") != std::string::npos);
  glab_string_free(json);
  glab_report_free(report);
}

TEST_CASE("describe is available through the c interface") {
  char* text = nullptr;
  REQUIRE(glab_describe(&text) == GLAB_OK);
  CHECK(std::string(text).find("suites") != std::string::npos);
  glab_string_free(text);
  CHECK(std::string(glab_version()).find("growthlab") != std::string::npos);
}
