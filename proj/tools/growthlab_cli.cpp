// Batch verification front end. Talks to the library exclusively through the
// C interface in growthlab/growthlab.h.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "growthlab/growthlab.h"

namespace {

constexpr int kExitUsage = 3;

void print_usage(std::FILE* to) {
  std::fprintf(to, R"(growthlab - exact verification workbench

Usage:
  growthlab run <scenario.json> [options]     run the checks of a scenario file
  growthlab verify <suite> [options]          run a named verification suite
  growthlab describe                          print accepted inputs and formats
  growthlab version

Suites:
  transfer positive ll kappa cl2 bell-measure bell-iso bell-positivity diagonal

Options:
  --seed N          seed for the suite / scenario randomness (default 0)
  --budget N        override the search guards (also: GROWTHLAB_BUDGET)
  --out FILE        write the report to FILE instead of stdout
  --format FMT      json (default) or table
  --timing          embed wall time in the report (breaks byte determinism)

Exit codes: 0 all checks pass, 1 some check failed, 2 unknown verdicts,
3 usage or schema error.
)");
}

struct Args {
  std::string command;
  std::string target;
  std::optional<unsigned long long> seed;
  std::optional<unsigned long long> budget;
  std::optional<std::string> out;
  std::string format = "json";
  bool timing = false;
};

bool parse_number(const char* text, unsigned long long& out) {
  char* end = nullptr;
  out = std::strtoull(text, &end, 10);
  return end && *end == '\0' && end != text;
}

int parse_args(int argc, char** argv, Args& args) {
  if (argc < 2) {
    print_usage(stderr);
    return kExitUsage;
  }
  args.command = argv[1];
  int at = 2;
  if (args.command == "run" || args.command == "verify") {
    if (argc < 3) {
      std::fprintf(stderr, "error: %s needs an argument\n",
                   args.command.c_str());
      return kExitUsage;
    }
    args.target = argv[2];
    at = 3;
  }
  for (; at < argc; ++at) {
    std::string flag = argv[at];
    auto value = [&]() -> const char* {
      if (at + 1 >= argc) {
        std::fprintf(stderr, "error: %s needs a value\n", flag.c_str());
        return nullptr;
      }
      return argv[++at];
    };
    if (flag == "--seed") {
      const char* v = value();
      unsigned long long n;
      if (!v || !parse_number(v, n)) return kExitUsage;
      args.seed = n;
    } else if (flag == "--budget") {
      const char* v = value();
      unsigned long long n;
      if (!v || !parse_number(v, n)) return kExitUsage;
      args.budget = n;
    } else if (flag == "--out") {
      const char* v = value();
      if (!v) return kExitUsage;
      args.out = v;
    } else if (flag == "--format") {
      const char* v = value();
      if (!v || (std::strcmp(v, "json") != 0 && std::strcmp(v, "table") != 0)) {
        std::fprintf(stderr, "error: --format expects json or table\n");
        return kExitUsage;
      }
      args.format = v;
    } else if (flag == "--timing") {
      args.timing = true;
    } else if (flag == "--help" || flag == "-h") {
      print_usage(stdout);
      return -1;
    } else {
      std::fprintf(stderr, "error: unknown flag %s\n", flag.c_str());
      return kExitUsage;
    }
  }
  return 0;
}

std::string options_json(const Args& args) {
  std::string out = "{";
  bool first = true;
  auto add = [&](const std::string& item) {
    if (!first) out += ",";
    out += item;
    first = false;
  };
  if (args.seed) add("\"seed\":" + std::to_string(*args.seed));
  if (args.budget) add("\"budget\":" + std::to_string(*args.budget));
  if (args.timing) add("\"timing\":true");
  out += "}";
  return out;
}

int emit(const Args& args, glab_report* report) {
  char* text = nullptr;
  int rc = args.format == "table" ? glab_report_table(report, &text)
                                  : glab_report_json(report, &text);
  if (rc != GLAB_OK) {
    std::fprintf(stderr, "error: %s\n", glab_last_error());
    return kExitUsage;
  }
  if (args.out) {
    std::ofstream file(*args.out, std::ios::binary | std::ios::trunc);
    if (!file) {
      std::fprintf(stderr, "error: cannot write %s\n", args.out->c_str());
      glab_string_free(text);
      return kExitUsage;
    }
    file << text;
  } else {
    std::fputs(text, stdout);
  }
  glab_string_free(text);
  return glab_report_status(report);
}

}  // namespace

int main(int argc, char** argv) {
  Args args;
  int rc = parse_args(argc, argv, args);
  if (rc == -1) return 0;
  if (rc != 0) return rc;

  if (args.command == "version") {
    std::printf("%s\n", glab_version());
    return 0;
  }
  if (args.command == "describe") {
    char* text = nullptr;
    if (glab_describe(&text) != GLAB_OK) {
      std::fprintf(stderr, "error: %s\n", glab_last_error());
      return kExitUsage;
    }
    std::fputs(text, stdout);
    glab_string_free(text);
    return 0;
  }
  if (args.command != "run" && args.command != "verify") {
    std::fprintf(stderr, "error: unknown command %s\n", args.command.c_str());
    print_usage(stderr);
    return kExitUsage;
  }

  if (!args.budget) {
    if (const char* env = std::getenv("GROWTHLAB_BUDGET")) {
      unsigned long long n;
      if (!parse_number(env, n)) {
        std::fprintf(stderr, "error: bad GROWTHLAB_BUDGET\n");
        return kExitUsage;
      }
      args.budget = n;
    }
  }

  std::string options = options_json(args);
  glab_report* report = nullptr;
  auto start = std::chrono::steady_clock::now();
  rc = args.command == "run"
           ? glab_run_scenario_file(args.target.c_str(), options.c_str(),
                                    &report)
           : glab_verify_suite(args.target.c_str(), options.c_str(), &report);
  if (rc != GLAB_OK) {
    std::fprintf(stderr, "error: %s\n", glab_last_error());
    return kExitUsage;
  }
  double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  std::fprintf(stderr, "%s %s finished in %.2fs\n", args.command.c_str(),
               args.target.c_str(), elapsed);
  int status = emit(args, report);
  glab_report_free(report);
  return status;
}
