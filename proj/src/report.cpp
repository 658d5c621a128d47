#include "growthlab/report.hpp"

#include <sstream>

namespace growthlab {

int Report::status() const {
  bool unknown = false;
  for (const auto& v : verdicts) {
    if (v.status == "fail") return 1;
    if (v.status == "unknown") unknown = true;
  }
  return unknown ? 2 : 0;
}

nlohmann::ordered_json Report::to_json() const {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  out["tool"] = version_string();
  out["kind"] = kind;
  out["name"] = name;
  out["seed"] = seed;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  std::uint64_t pass = 0, fail = 0, unknown = 0;
  for (const auto& v : verdicts) {
    nlohmann::ordered_json row = nlohmann::ordered_json::object();
    row["check"] = v.name;
    row["status"] = v.status;
    if (!v.values.empty()) row["values"] = v.values;
    rows.push_back(std::move(row));
    if (v.status == "pass") ++pass;
    else if (v.status == "fail") ++fail;
    else ++unknown;
  }
  out["verdicts"] = std::move(rows);
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  summary["pass"] = pass;
  summary["fail"] = fail;
  summary["unknown"] = unknown;
  out["summary"] = std::move(summary);
  if (timing_ms) out["timing_ms"] = *timing_ms;
  return out;
}

std::string Report::to_json_text() const { return to_json().dump(2) + "\n"; }

std::string Report::to_table() const {
  std::ostringstream out;
  out << kind << " " << name << " (seed " << seed << ")\n";
  std::size_t width = 8;
  for (const auto& v : verdicts) width = std::max(width, v.name.size());
  for (const auto& v : verdicts) {
    out << "  " << v.name;
    for (std::size_t i = v.name.size(); i < width + 2; ++i) out << ' ';
    out << v.status;
    if (!v.values.empty()) out << "  " << v.values.dump();
    out << "\n";
  }
  int s = status();
  out << (s == 0 ? "PASS" : s == 1 ? "FAIL" : "UNKNOWN") << "\n";
  return out.str();
}

}  // namespace growthlab
