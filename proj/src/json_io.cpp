#include "growthlab/json_io.hpp"

#include <algorithm>

#include "growthlab/error.hpp"

namespace growthlab {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  raise(Errc::SchemaError, path + ": " + what);
}

std::uint64_t get_nat(const Json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0)
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  bad(path, "expected a natural number");
}

}  // namespace

Json rational_to_json(const Rational& r) { return r.str(); }

Rational rational_from_json(const Json& j, const std::string& path) {
  if (!j.is_string()) bad(path, "expected a rational string \"p/q\"");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const Error&) {
    bad(path, "bad rational literal");
  }
}

Json assignment_to_json(const PartialAssignment& a) {
  Json out = Json::object();
  for (const auto& [coord, bit] : a.entries())
    out[std::to_string(coord)] = bit ? 1 : 0;
  return out;
}

PartialAssignment assignment_from_json(const Json& j,
                                       const std::string& path) {
  if (!j.is_object()) bad(path, "expected an object of coordinate -> bit");
  PartialAssignment a;
  for (const auto& [key, value] : j.items()) {
    std::size_t pos = 0;
    unsigned long coord = 0;
    try {
      coord = std::stoul(key, &pos);
    } catch (...) {
      bad(path, "bad coordinate key '" + key + "'");
    }
    if (pos != key.size()) bad(path, "bad coordinate key '" + key + "'");
    std::uint64_t bit = get_nat(value, path + "." + key);
    if (bit > 1) bad(path + "." + key, "bit must be 0 or 1");
    a.set(static_cast<Coord>(coord), bit == 1);
  }
  return a;
}

Json clopen_to_json(const ClopenSet& s, const Limits& limits) {
  Json out = Json::array();
  for (const auto& phi : s.cylinders(limits))
    out.push_back(assignment_to_json(phi));
  return out;
}

ClopenSet clopen_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array of assignments");
  std::vector<PartialAssignment> phis;
  for (std::size_t i = 0; i < j.size(); ++i)
    phis.push_back(
        assignment_from_json(j[i], path + "[" + std::to_string(i) + "]"));
  return ClopenSet::from_cylinders(phis);
}

Json periodic_to_json(const PeriodicSet& p) {
  Json out = Json::object();
  out["mod"] = p.modulus();
  out["residues"] = p.residues();
  out["added"] = p.added();
  out["removed"] = p.removed();
  return out;
}

PeriodicSet periodic_from_json(const Json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("mod"))
    bad(path, "expected {mod, residues, added?, removed?}");
  auto list = [&](const char* key) {
    std::vector<std::uint64_t> out;
    if (!j.contains(key)) return out;
    if (!j[key].is_array()) bad(path + "." + key, "expected an array");
    for (const auto& v : j[key]) out.push_back(get_nat(v, path + "." + key));
    return out;
  };
  try {
    return PeriodicSet::from_residues(get_nat(j["mod"], path + ".mod"),
                                      list("residues"), list("added"),
                                      list("removed"));
  } catch (const Error& e) {
    if (e.code() == Errc::ModulusTooLarge) throw;
    bad(path, e.what());
  }
}

Json staged_to_json(const StagedSet& s) {
  Json out = Json::object();
  Json stages = Json::array();
  for (const auto& st : s.stages()) {
    Json item = Json::object();
    item["set"] = periodic_to_json(st.set);
    item["from"] = st.from;
    stages.push_back(std::move(item));
  }
  out["stages"] = std::move(stages);
  out["density"] = rational_to_json(s.declared_density());
  out["truncated"] = s.truncated();
  return out;
}

StagedSet staged_from_json(const Json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("stages") || !j.contains("density"))
    bad(path, "expected {stages, density, truncated?}");
  std::vector<StagedSet::Stage> stages;
  const Json& arr = j["stages"];
  if (!arr.is_array() || arr.empty())
    bad(path + ".stages", "expected a nonempty array");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = path + ".stages[" + std::to_string(i) + "]";
    if (!arr[i].is_object() || !arr[i].contains("set") ||
        !arr[i].contains("from"))
      bad(p, "expected {set, from}");
    stages.push_back({periodic_from_json(arr[i]["set"], p + ".set"),
                      get_nat(arr[i]["from"], p + ".from")});
  }
  bool truncated = false;
  if (j.contains("truncated")) {
    if (!j["truncated"].is_boolean()) bad(path + ".truncated", "expected bool");
    truncated = j["truncated"].get<bool>();
  }
  return StagedSet::from_stages(
      std::move(stages), rational_from_json(j["density"], path + ".density"),
      truncated);
}

Json scenario_to_json(const Scenario& s) {
  Json points = Json::object();
  Json family = Json::object();
  for (const auto& label : s.labels()) {
    Json bits = Json::array();
    for (const auto& p : s.points_of(label)) bits.push_back(p.bits);
    points[label] = std::move(bits);
    family[label] = s.family_of(label).elems;
  }
  Json out = Json::object();
  out["points"] = std::move(points);
  out["family"] = std::move(family);
  out["ad_bound"] = s.ad_bound();
  return out;
}

Scenario ad_scenario_from_json(const Json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("points") || !j.contains("family") ||
      !j.contains("ad_bound"))
    bad(path, "expected {points, family, ad_bound}");
  std::map<std::string, std::vector<PointPrefix>> points;
  if (!j["points"].is_object()) bad(path + ".points", "expected an object");
  for (const auto& [label, arr] : j["points"].items()) {
    if (!arr.is_array()) bad(path + ".points." + label, "expected an array");
    std::vector<PointPrefix> ps;
    for (const auto& bits : arr) {
      if (!bits.is_string())
        bad(path + ".points." + label, "expected bit strings");
      ps.push_back(PointPrefix{bits.get<std::string>()});
    }
    points[label] = std::move(ps);
  }
  std::map<std::string, ADPrefix> family;
  if (!j["family"].is_object()) bad(path + ".family", "expected an object");
  for (const auto& [label, arr] : j["family"].items()) {
    if (!arr.is_array()) bad(path + ".family." + label, "expected an array");
    ADPrefix prefix;
    for (const auto& v : arr)
      prefix.elems.push_back(
          static_cast<Coord>(get_nat(v, path + ".family." + label)));
    family[label] = std::move(prefix);
  }
  std::uint64_t bound = get_nat(j["ad_bound"], path + ".ad_bound");
  try {
    return Scenario(std::move(points), std::move(family),
                    static_cast<Coord>(bound));
  } catch (const Error& e) {
    bad(path, e.what());
  }
}

Json slalom_to_json(const Slalom& s) {
  Json levels = Json::object();
  for (const auto& [k, values] : s.levels())
    levels[std::to_string(k)] = values;
  Json out = Json::object();
  out["levels"] = std::move(levels);
  return out;
}

Slalom slalom_from_json(const Json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("levels"))
    bad(path, "expected {levels: {\"k\": [values]}}");
  if (!j["levels"].is_object()) bad(path + ".levels", "expected an object");
  std::vector<Slalom::Level> levels;
  for (const auto& [key, arr] : j["levels"].items()) {
    std::size_t pos = 0;
    unsigned long level = 0;
    try {
      level = std::stoul(key, &pos);
    } catch (...) {
      bad(path + ".levels", "bad level key '" + key + "'");
    }
    if (pos != key.size()) bad(path + ".levels", "bad level key '" + key + "'");
    if (!arr.is_array()) bad(path + ".levels." + key, "expected an array");
    std::vector<std::uint64_t> values;
    for (const auto& v : arr)
      values.push_back(get_nat(v, path + ".levels." + key));
    levels.push_back({static_cast<std::uint32_t>(level), std::move(values)});
  }
  try {
    return Slalom::from_levels(std::move(levels));
  } catch (const Error& e) {
    bad(path, e.what());
  }
}

Json genexpr_to_json(const GenExpr& e) {
  switch (e.kind()) {
    case GenExpr::Kind::True:
      return Json(true);
    case GenExpr::Kind::False:
      return Json(false);
    case GenExpr::Kind::PosT: {
      Json out = Json::object();
      out["posT"] = slalom_to_json(e.slalom());
      return out;
    }
    case GenExpr::Kind::Height: {
      Json h = Json::object();
      h["S"] = slalom_to_json(e.slalom());
      h["n"] = e.height_n();
      Json out = Json::object();
      out["height"] = std::move(h);
      return out;
    }
    case GenExpr::Kind::And:
    case GenExpr::Kind::Or: {
      Json arr = Json::array();
      for (const auto& k : e.children()) arr.push_back(genexpr_to_json(k));
      Json out = Json::object();
      out[e.kind() == GenExpr::Kind::And ? "and" : "or"] = std::move(arr);
      return out;
    }
    case GenExpr::Kind::Not: {
      Json out = Json::object();
      out["not"] = genexpr_to_json(e.children()[0]);
      return out;
    }
  }
  return Json();
}

GenExpr genexpr_from_json(const Json& j, const std::string& path) {
  if (j.is_boolean()) return GenExpr::constant(j.get<bool>());
  if (!j.is_object() || j.size() != 1)
    bad(path, "expected one of true/false/posT/height/and/or/not");
  const auto& [key, value] = *j.items().begin();
  if (key == "posT") return GenExpr::pos(slalom_from_json(value, path));
  if (key == "height") {
    if (!value.is_object() || !value.contains("S") || !value.contains("n"))
      bad(path + ".height", "expected {S, n}");
    return GenExpr::height(
        slalom_from_json(value["S"], path + ".height.S"),
        static_cast<std::uint32_t>(get_nat(value["n"], path + ".height.n")));
  }
  if (key == "not") return GenExpr::neg(genexpr_from_json(value, path));
  if (key == "and" || key == "or") {
    if (!value.is_array() || value.size() < 2)
      bad(path + "." + key, "expected at least two operands");
    GenExpr acc = genexpr_from_json(value[0], path + "[0]");
    for (std::size_t i = 1; i < value.size(); ++i) {
      GenExpr next =
          genexpr_from_json(value[i], path + "[" + std::to_string(i) + "]");
      acc = key == "and" ? GenExpr::conj(std::move(acc), std::move(next))
                         : GenExpr::disj(std::move(acc), std::move(next));
    }
    return acc;
  }
  bad(path, "unknown node '" + key + "'");
}

Json family_to_json(const FiniteFamily& f) {
  Json out = Json::object();
  out["atoms"] = f.atoms;
  Json sets = Json::array();
  for (const auto& set : f.sets) {
    Json one = Json::array();
    for (std::uint32_t a : set) one.push_back(f.atoms[a]);
    sets.push_back(std::move(one));
  }
  out["sets"] = std::move(sets);
  return out;
}

FiniteFamily family_from_json(const Json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("atoms") || !j.contains("sets"))
    bad(path, "expected {atoms, sets}");
  if (!j["atoms"].is_array()) bad(path + ".atoms", "expected an array");
  std::vector<std::string> atoms;
  for (const auto& a : j["atoms"]) {
    if (!a.is_string()) bad(path + ".atoms", "expected strings");
    atoms.push_back(a.get<std::string>());
  }
  if (!j["sets"].is_array()) bad(path + ".sets", "expected an array");
  std::vector<std::vector<std::uint32_t>> sets;
  for (std::size_t i = 0; i < j["sets"].size(); ++i) {
    const std::string p = path + ".sets[" + std::to_string(i) + "]";
    if (!j["sets"][i].is_array()) bad(p, "expected an array");
    std::vector<std::uint32_t> one;
    for (const auto& label : j["sets"][i]) {
      if (!label.is_string()) bad(p, "expected atom labels");
      auto it = std::find(atoms.begin(), atoms.end(), label.get<std::string>());
      if (it == atoms.end())
        bad(p, "unknown atom '" + label.get<std::string>() + "'");
      one.push_back(static_cast<std::uint32_t>(it - atoms.begin()));
    }
    sets.push_back(std::move(one));
  }
  try {
    return FiniteFamily::make(std::move(atoms), std::move(sets));
  } catch (const Error& e) {
    bad(path, e.what());
  }
}

Json bell_node_to_json(const BellNode& n) { return Json(n); }

BellNode bell_node_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array of naturals");
  BellNode n;
  for (const auto& v : j)
    n.push_back(static_cast<std::uint32_t>(get_nat(v, path)));
  try {
    validate_bell_node(n);
  } catch (const Error& e) {
    bad(path, e.what());
  }
  return n;
}

Json pi_prefix_to_json(const PiPrefix& p) {
  Json rows = Json::array();
  for (const auto& r : p.rows) rows.push_back(bell_node_to_json(r));
  Json out = Json::object();
  out["rows"] = std::move(rows);
  return out;
}

PiPrefix pi_prefix_from_json(const Json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("rows"))
    bad(path, "expected {rows: [[..], ..]}");
  if (!j["rows"].is_array()) bad(path + ".rows", "expected an array");
  std::vector<BellNode> rows;
  for (std::size_t i = 0; i < j["rows"].size(); ++i)
    rows.push_back(bell_node_from_json(
        j["rows"][i], path + ".rows[" + std::to_string(i) + "]"));
  try {
    return make_pi_prefix(std::move(rows));
  } catch (const Error& e) {
    bad(path, e.what());
  }
}

}  // namespace growthlab
