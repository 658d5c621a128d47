#include "growthlab/growthlab.h"

#include <chrono>
#include <cstring>
#include <new>
#include <string>

#include "growthlab/error.hpp"
#include "growthlab/json_io.hpp"
#include "growthlab/report.hpp"
#include "growthlab/scenario.hpp"

struct glab_report {
  growthlab::Report report;
};

namespace {

thread_local std::string g_last_error;

int code_of(growthlab::Errc c) {
  using growthlab::Errc;
  switch (c) {
    case Errc::ParseError:
      return GLAB_E_PARSE;
    case Errc::SchemaError:
      return GLAB_E_SCHEMA;
    case Errc::UnknownSuite:
      return GLAB_E_USAGE;
    case Errc::Internal:
      return GLAB_E_INTERNAL;
    default:
      return GLAB_E_GUARD;
  }
}

growthlab::RunOptions parse_options(const char* options_json) {
  growthlab::RunOptions options;
  if (!options_json || !*options_json) return options;
  growthlab::Json doc;
  try {
    doc = growthlab::Json::parse(options_json);
  } catch (const nlohmann::json::exception& e) {
    growthlab::raise(growthlab::Errc::ParseError,
                     std::string("options: ") + e.what());
  }
  if (!doc.is_object())
    growthlab::raise(growthlab::Errc::SchemaError, "options must be an object");
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned())
      growthlab::raise(growthlab::Errc::SchemaError, "options.seed: natural");
    options.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("budget")) {
    if (!doc["budget"].is_number_unsigned())
      growthlab::raise(growthlab::Errc::SchemaError, "options.budget: natural");
    options.budget = doc["budget"].get<std::uint64_t>();
  }
  if (doc.contains("timing")) {
    if (!doc["timing"].is_boolean())
      growthlab::raise(growthlab::Errc::SchemaError, "options.timing: bool");
    options.timing = doc["timing"].get<bool>();
  }
  return options;
}

char* dup_string(const std::string& s) {
  char* out = new (std::nothrow) char[s.size() + 1];
  if (!out) return nullptr;
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return GLAB_OK;
  } catch (const growthlab::Error& e) {
    g_last_error = e.what();
    return code_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return GLAB_E_INTERNAL;
  }
}

template <typename Fn>
int run_to_report(glab_report** out, const char* options_json, Fn&& produce) {
  if (!out) {
    g_last_error = "null output handle";
    return GLAB_E_USAGE;
  }
  *out = nullptr;
  return guarded([&] {
    growthlab::RunOptions options = parse_options(options_json);
    auto start = std::chrono::steady_clock::now();
    growthlab::Report report = produce(options);
    if (options.timing) {
      auto elapsed = std::chrono::steady_clock::now() - start;
      report.timing_ms = static_cast<std::uint64_t>(
          std::chrono::duration_cast<std::chrono::milliseconds>(elapsed)
              .count());
    }
    *out = new glab_report{std::move(report)};
  });
}

}  // namespace

extern "C" {

const char* glab_version(void) { return growthlab::version_string(); }

const char* glab_last_error(void) { return g_last_error.c_str(); }

int glab_run_scenario_json(const char* scenario_json, const char* options_json,
                           glab_report** out) {
  if (!scenario_json) {
    g_last_error = "null scenario";
    return GLAB_E_USAGE;
  }
  return run_to_report(out, options_json, [&](const growthlab::RunOptions& o) {
    return growthlab::run_scenario_text(scenario_json, o);
  });
}

int glab_run_scenario_file(const char* path, const char* options_json,
                           glab_report** out) {
  if (!path) {
    g_last_error = "null path";
    return GLAB_E_USAGE;
  }
  return run_to_report(out, options_json, [&](const growthlab::RunOptions& o) {
    return growthlab::run_scenario_file(path, o);
  });
}

int glab_verify_suite(const char* name, const char* options_json,
                      glab_report** out) {
  if (!name) {
    g_last_error = "null suite name";
    return GLAB_E_USAGE;
  }
  return run_to_report(out, options_json, [&](const growthlab::RunOptions& o) {
    return growthlab::run_named_suite(name, o);
  });
}

int glab_describe(char** out_json) {
  if (!out_json) {
    g_last_error = "null output";
    return GLAB_E_USAGE;
  }
  *out_json = nullptr;
  return guarded([&] {
    *out_json = dup_string(growthlab::describe_schemas());
    if (!*out_json)
      growthlab::raise(growthlab::Errc::Internal, "allocation failed");
  });
}

int glab_report_status(const glab_report* report) {
  if (!report) return GLAB_E_USAGE;
  return report->report.status();
}

int glab_report_json(const glab_report* report, char** out) {
  if (!report || !out) {
    g_last_error = "null argument";
    return GLAB_E_USAGE;
  }
  *out = nullptr;
  return guarded([&] {
    *out = dup_string(report->report.to_json_text());
    if (!*out) growthlab::raise(growthlab::Errc::Internal, "allocation failed");
  });
}

int glab_report_table(const glab_report* report, char** out) {
  if (!report || !out) {
    g_last_error = "null argument";
    return GLAB_E_USAGE;
  }
  *out = nullptr;
  return guarded([&] {
    *out = dup_string(report->report.to_table());
    if (!*out) growthlab::raise(growthlab::Errc::Internal, "allocation failed");
  });
}

void glab_report_free(glab_report* report) { delete report; }

void glab_string_free(char* text) { delete[] text; }

}  // extern "C"
