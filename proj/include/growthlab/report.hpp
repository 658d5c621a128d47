#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace growthlab {

inline const char* version_string() { return "growthlab 0.1.0"; }

// One named check with exact values; numeric payloads are rational strings
// or integers, never floats.
struct Verdict {
  std::string name;
  std::string status;  // "pass" | "fail" | "unknown"
  nlohmann::ordered_json values = nlohmann::ordered_json::object();
};

struct Report {
  std::string kind;  // "suite" | "scenario"
  std::string name;
  std::uint64_t seed = 0;
  std::vector<Verdict> verdicts;
  // Filled only on request; wall time is the one nondeterministic field, so
  // byte-stable reports omit it.
  std::optional<std::uint64_t> timing_ms;

  void add(Verdict v) { verdicts.push_back(std::move(v)); }
  void add_pass(const std::string& check_name,
                nlohmann::ordered_json values =
                    nlohmann::ordered_json::object()) {
    verdicts.push_back({check_name, "pass", std::move(values)});
  }
  void add_check(const std::string& check_name, bool ok,
                 nlohmann::ordered_json values =
                     nlohmann::ordered_json::object()) {
    verdicts.push_back({check_name, ok ? "pass" : "fail", std::move(values)});
  }

  // 0 all pass, 1 some failure, 2 no failure but some unknown.
  int status() const;
  nlohmann::ordered_json to_json() const;
  std::string to_json_text() const;  // stable bytes (two-space indent + \n)
  std::string to_table() const;
};

}  // namespace growthlab
