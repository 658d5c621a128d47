#include "growthlab/scenario.hpp"

#include <fstream>
#include <sstream>

#include "growthlab/error.hpp"
#include "growthlab/json_io.hpp"
#include "growthlab/suites.hpp"

namespace growthlab {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  raise(Errc::SchemaError, path + ": " + what);
}

const Json& field(const Json& j, const std::string& key,
                  const std::string& path) {
  if (!j.is_object() || !j.contains(key)) bad(path, "missing field '" + key + "'");
  return j[key];
}

std::string get_string(const Json& j, const std::string& path) {
  if (!j.is_string()) bad(path, "expected a string");
  return j.get<std::string>();
}

std::uint64_t get_nat(const Json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0)
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  bad(path, "expected a natural number");
}

std::vector<std::string> get_names(const Json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array of names");
  std::vector<std::string> out;
  for (const auto& v : j) out.push_back(get_string(v, path));
  return out;
}

// Named-object tables per payload.
template <typename T>
class Table {
public:
  Table(const Json& payload, const std::string& key, const std::string& path,
        T (*parse)(const Json&, const std::string&)) {
    if (!payload.contains(key)) return;
    const Json& obj = payload[key];
    if (!obj.is_object()) bad(path + "." + key, "expected an object");
    for (const auto& [name, value] : obj.items())
      items_.emplace(name, parse(value, path + "." + key + "." + name));
  }

  const T& at(const std::string& name, const std::string& path) const {
    auto it = items_.find(name);
    if (it == items_.end()) bad(path, "unknown name '" + name + "'");
    return it->second;
  }

private:
  std::map<std::string, T> items_;
};

struct CheckContext {
  Report& report;
  std::string name;

  void pass(Json values = Json::object()) {
    report.add({name, "pass", std::move(values)});
  }
  void fail(Json values = Json::object()) {
    report.add({name, "fail", std::move(values)});
  }
  void unknown(Json values = Json::object()) {
    report.add({name, "unknown", std::move(values)});
  }
  void check(bool ok, Json values = Json::object()) {
    report.add({name, ok ? "pass" : "fail", std::move(values)});
  }
};

void expect_rational(CheckContext& ctx, const Json& spec, const Rational& got,
                     const std::string& path) {
  Json values = Json::object();
  values["value"] = got.str();
  if (spec.contains("expect")) {
    Rational want = rational_from_json(spec["expect"], path + ".expect");
    values["expect"] = want.str();
    ctx.check(got == want, std::move(values));
  } else {
    ctx.pass(std::move(values));
  }
}

// ---------------------------------------------------------------------------

void run_cantor(const Json& payload, Report& report, const Limits& limits,
                const std::string& path) {
  Table<ClopenSet> sets(payload, "sets", path, clopen_from_json);
  const Json& checks = field(payload, "checks", path);
  if (!checks.is_array()) bad(path + ".checks", "expected an array");
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const Json& spec = checks[i];
    const std::string cpath = path + ".checks[" + std::to_string(i) + "]";
    std::string kind = get_string(field(spec, "check", cpath), cpath);
    CheckContext ctx{report, kind + "-" + std::to_string(i)};
    auto set_arg = [&](const char* key) -> const ClopenSet& {
      return sets.at(get_string(field(spec, key, cpath), cpath + "." + key),
                     cpath + "." + key);
    };
    try {
      if (kind == "measure") {
        expect_rational(ctx, spec, set_arg("set").measure(), cpath);
      } else if (kind == "support") {
        std::vector<Coord> got = set_arg("set").support(limits);
        Json values = Json::object();
        values["support"] = got;
        if (spec.contains("expect")) {
          std::vector<Coord> want;
          for (const auto& v : spec["expect"])
            want.push_back(
                static_cast<Coord>(get_nat(v, cpath + ".expect")));
          ctx.check(got == want, std::move(values));
        } else {
          ctx.pass(std::move(values));
        }
      } else if (kind == "product_measure") {
        Rational got = product_measure_check(set_arg("a"), set_arg("b"), limits);
        expect_rational(ctx, spec, got, cpath);
      } else if (kind == "modularity") {
        const ClopenSet& a = set_arg("a");
        const ClopenSet& b = set_arg("b");
        bool ok = a.measure() + b.measure() ==
                  set_union(a, b).measure() + set_intersect(a, b).measure();
        ctx.check(ok);
      } else if (kind == "equal") {
        bool want = spec.contains("expect") ? spec["expect"].get<bool>() : true;
        ctx.check((set_arg("a") == set_arg("b")) == want);
      } else if (kind == "complement_involution") {
        const ClopenSet& a = set_arg("set");
        ctx.check(set_complement(set_complement(a)) == a);
      } else {
        bad(cpath, "unknown check '" + kind + "'");
      }
    } catch (const Error& e) {
      if (e.code() == Errc::SchemaError) throw;
      Json values = Json::object();
      values["error"] = e.what();
      if (spec.contains("expect_error") &&
          std::string(e.what()).find(get_string(spec["expect_error"],
                                                cpath + ".expect_error")) !=
              std::string::npos)
        ctx.pass(std::move(values));
      else
        ctx.fail(std::move(values));
    }
  }
}

void run_density(const Json& payload, Report& report, const Limits& limits,
                 const std::string& path) {
  Table<PeriodicSet> periodic(payload, "periodic", path, periodic_from_json);
  Table<ClopenSet> clopen(payload, "clopen", path, clopen_from_json);
  Table<StagedSet> staged(payload, "staged", path, staged_from_json);
  const Json& checks = field(payload, "checks", path);
  if (!checks.is_array()) bad(path + ".checks", "expected an array");
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const Json& spec = checks[i];
    const std::string cpath = path + ".checks[" + std::to_string(i) + "]";
    std::string kind = get_string(field(spec, "check", cpath), cpath);
    CheckContext ctx{report, kind + "-" + std::to_string(i)};
    try {
      if (kind == "density") {
        const PeriodicSet& p = periodic.at(
            get_string(field(spec, "set", cpath), cpath), cpath + ".set");
        expect_rational(ctx, spec, p.density(), cpath);
      } else if (kind == "transfer") {
        const ClopenSet& a = clopen.at(
            get_string(field(spec, "set", cpath), cpath), cpath + ".set");
        TransferReport tr = transfer_check(a, limits);
        Json values = Json::object();
        values["measure"] = tr.measure.str();
        values["density"] = tr.density.str();
        Json laws = Json::array();
        for (const auto& law : tr.laws) {
          Json row = Json::object();
          row["law"] = law.name;
          row["holds"] = law.holds;
          laws.push_back(std::move(row));
        }
        values["laws"] = std::move(laws);
        ctx.check(tr.pass, std::move(values));
      } else if (kind == "psi0") {
        const ClopenSet& a = clopen.at(
            get_string(field(spec, "set", cpath), cpath), cpath + ".set");
        PeriodicSet image = psi0(a, limits);
        Json values = Json::object();
        values["image"] = periodic_to_json(image);
        if (spec.contains("expect")) {
          PeriodicSet want =
              periodic_from_json(spec["expect"], cpath + ".expect");
          ctx.check(image == want, std::move(values));
        } else {
          ctx.pass(std::move(values));
        }
      } else if (kind == "staged_count") {
        const StagedSet& s = staged.at(
            get_string(field(spec, "staged", cpath), cpath), cpath + ".staged");
        std::uint64_t N = get_nat(field(spec, "N", cpath), cpath + ".N");
        StagedCount sc = staged_count(s, N);
        Json values = Json::object();
        values["count"] = sc.count;
        values["estimate"] = sc.estimate.str();
        values["error_bound"] = sc.error_bound.str();
        values["truncated"] = sc.truncated;
        Rational dev = sc.estimate - s.declared_density();
        if (dev.sign() < 0) dev = -dev;
        bool sound = dev <= sc.error_bound;
        if (spec.contains("expect_count"))
          sound = sound && sc.count == get_nat(spec["expect_count"],
                                               cpath + ".expect_count");
        ctx.check(sound, std::move(values));
      } else if (kind == "periodic_modularity") {
        const PeriodicSet& a = periodic.at(
            get_string(field(spec, "a", cpath), cpath), cpath + ".a");
        const PeriodicSet& b = periodic.at(
            get_string(field(spec, "b", cpath), cpath), cpath + ".b");
        bool ok = a.density() + b.density() ==
                  p_union(a, b, limits).density() +
                      p_intersect(a, b, limits).density();
        ctx.check(ok);
      } else {
        bad(cpath, "unknown check '" + kind + "'");
      }
    } catch (const Error& e) {
      if (e.code() == Errc::SchemaError) throw;
      Json values = Json::object();
      values["error"] = e.what();
      if (spec.contains("expect_error") &&
          std::string(e.what()).find(get_string(spec["expect_error"],
                                                cpath + ".expect_error")) !=
              std::string::npos)
        ctx.pass(std::move(values));
      else
        ctx.fail(std::move(values));
    }
  }
}

void run_ad(const Json& payload, Report& report, const Limits& limits,
            const std::string& path) {
  (void)limits;  // the block operations are guarded by their own depths
  Scenario scenario =
      ad_scenario_from_json(field(payload, "scenario", path), path + ".scenario");
  const Json& checks = field(payload, "checks", path);
  if (!checks.is_array()) bad(path + ".checks", "expected an array");
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const Json& spec = checks[i];
    const std::string cpath = path + ".checks[" + std::to_string(i) + "]";
    std::string kind = get_string(field(spec, "check", cpath), cpath);
    CheckContext ctx{report, kind + "-" + std::to_string(i)};
    try {
      if (kind == "blocks") {
        std::string alpha = get_string(field(spec, "alpha", cpath), cpath);
        std::uint32_t upto = static_cast<std::uint32_t>(
            get_nat(field(spec, "upto", cpath), cpath + ".upto"));
        BlockFamily fam = build_blocks(scenario, alpha, upto);
        Json supports = Json::array();
        for (const auto& sup : fam.supports) supports.push_back(sup);
        Json values = Json::object();
        values["supports"] = std::move(supports);
        ctx.pass(std::move(values));
      } else if (kind == "u_trunc_measure") {
        std::string alpha = get_string(field(spec, "alpha", cpath), cpath);
        std::uint32_t n = static_cast<std::uint32_t>(
            get_nat(field(spec, "n", cpath), cpath + ".n"));
        expect_rational(ctx, spec, u_trunc(scenario, alpha, n).measure(),
                        cpath);
      } else if (kind == "contains") {
        std::string alpha = get_string(field(spec, "alpha", cpath), cpath);
        std::uint32_t n = static_cast<std::uint32_t>(
            get_nat(field(spec, "n", cpath), cpath + ".n"));
        ContainsReport cr = contains_check(scenario, alpha, n);
        Json values = Json::object();
        if (cr.offending) values["offending"] = *cr.offending;
        ctx.check(cr.pass, std::move(values));
      } else if (kind == "find_N") {
        std::vector<std::string> alphas =
            get_names(field(spec, "alphas", cpath), cpath + ".alphas");
        PartialAssignment tau;
        if (spec.contains("tau"))
          tau = assignment_from_json(spec["tau"], cpath + ".tau");
        std::uint32_t got = find_N(scenario, alphas, tau);
        Json values = Json::object();
        values["N"] = got;
        if (spec.contains("expect"))
          ctx.check(got == get_nat(spec["expect"], cpath + ".expect"),
                    std::move(values));
        else
          ctx.pass(std::move(values));
      } else if (kind == "positive_bound") {
        std::vector<std::string> alphas =
            get_names(field(spec, "alphas", cpath), cpath + ".alphas");
        PartialAssignment tau;
        if (spec.contains("tau"))
          tau = assignment_from_json(spec["tau"], cpath + ".tau");
        std::uint32_t levels = spec.contains("levels")
                                   ? static_cast<std::uint32_t>(get_nat(
                                         spec["levels"], cpath + ".levels"))
                                   : 3;
        PositiveBound pb = positive_lower_bound(scenario, alphas, tau);
        bool ok = true;
        for (std::uint32_t n = pb.N; n <= pb.N + levels; ++n) {
          ClopenSet residual = ClopenSet::cylinder(tau);
          for (const auto& label : alphas)
            residual = set_difference(residual, u_trunc(scenario, label, n));
          if (!(residual.measure() > pb.bound)) ok = false;
        }
        Json values = Json::object();
        values["N"] = pb.N;
        values["core_measure"] = pb.core_measure.str();
        values["bound"] = pb.bound.str();
        ctx.check(ok, std::move(values));
      } else if (kind == "emptiness") {
        ClopenSet C = clopen_from_json(field(spec, "C", cpath), cpath + ".C");
        std::vector<std::string> betas =
            get_names(field(spec, "betas", cpath), cpath + ".betas");
        std::vector<std::string> alphas =
            get_names(field(spec, "alphas", cpath), cpath + ".alphas");
        std::uint32_t depth = spec.contains("depth")
                                  ? static_cast<std::uint32_t>(get_nat(
                                        spec["depth"], cpath + ".depth"))
                                  : 8;
        EmptinessResult res = emptiness_decide(C, betas, alphas, scenario, depth);
        std::string verdict =
            res.verdict == EmptinessResult::Verdict::Empty
                ? "empty"
                : res.verdict == EmptinessResult::Verdict::Nonempty
                      ? "nonempty"
                      : "unknown";
        Json values = Json::object();
        values["verdict"] = verdict;
        if (res.witness) values["witness"] = assignment_to_json(*res.witness);
        if (spec.contains("expect")) {
          ctx.check(verdict == get_string(spec["expect"], cpath + ".expect"),
                    std::move(values));
        } else if (verdict == "unknown") {
          ctx.unknown(std::move(values));
        } else {
          ctx.pass(std::move(values));
        }
      } else {
        bad(cpath, "unknown check '" + kind + "'");
      }
    } catch (const Error& e) {
      if (e.code() == Errc::SchemaError) throw;
      Json values = Json::object();
      values["error"] = e.what();
      if (spec.contains("expect_error") &&
          std::string(e.what()).find(get_string(spec["expect_error"],
                                                cpath + ".expect_error")) !=
              std::string::npos)
        ctx.pass(std::move(values));
      else
        ctx.fail(std::move(values));
    }
  }
}

void run_slalom(const Json& payload, Report& report, const Limits& limits,
                const std::string& path) {
  Table<Slalom> slaloms(payload, "slaloms", path, slalom_from_json);
  const Json& checks = field(payload, "checks", path);
  if (!checks.is_array()) bad(path + ".checks", "expected an array");
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const Json& spec = checks[i];
    const std::string cpath = path + ".checks[" + std::to_string(i) + "]";
    std::string kind = get_string(field(spec, "check", cpath), cpath);
    CheckContext ctx{report, kind + "-" + std::to_string(i)};
    auto slalom_arg = [&](const char* key) -> const Slalom& {
      return slaloms.at(get_string(field(spec, key, cpath), cpath), cpath);
    };
    try {
      if (kind == "weight") {
        expect_rational(ctx, spec, slalom_arg("slalom").weight(), cpath);
      } else if (kind == "infinite") {
        GenExpr e = genexpr_from_json(field(spec, "expr", cpath),
                                      cpath + ".expr");
        bool got = decide_infinite(e, limits);
        Json values = Json::object();
        values["infinite"] = got;
        if (spec.contains("expect"))
          ctx.check(got == spec["expect"].get<bool>(), std::move(values));
        else
          ctx.pass(std::move(values));
      } else if (kind == "w_delta_class") {
        Rational delta = rational_from_json(field(spec, "delta", cpath),
                                            cpath + ".delta");
        OmegaPoint got = w_delta_class(slalom_arg("slalom"), delta);
        Json values = Json::object();
        values["n"] = got.n;
        values["S"] = slalom_to_json(got.S);
        if (spec.contains("expect_n"))
          ctx.check(got.n == get_nat(spec["expect_n"], cpath + ".expect_n"),
                    std::move(values));
        else
          ctx.pass(std::move(values));
      } else if (kind == "a_w_measure") {
        std::uint32_t n = static_cast<std::uint32_t>(
            get_nat(field(spec, "n", cpath), cpath + ".n"));
        AwMeasure aw = a_w_measure(slalom_arg("slalom"), n);
        Json values = Json::object();
        values["exact"] = aw.exact.str();
        values["union_bound"] = aw.union_bound.str();
        bool ok = aw.exact >= aw.union_bound;
        if (spec.contains("expect_exact"))
          ok = ok && aw.exact == rational_from_json(spec["expect_exact"],
                                                    cpath + ".expect_exact");
        ctx.check(ok, std::move(values));
      } else if (kind == "cl2") {
        std::vector<Slalom> list;
        for (const auto& name :
             get_names(field(spec, "slaloms", cpath), cpath + ".slaloms"))
          list.push_back(slaloms.at(name, cpath + ".slaloms"));
        Slalom S = slalom_from_json(field(spec, "S", cpath), cpath + ".S");
        std::uint32_t n = static_cast<std::uint32_t>(
            get_nat(field(spec, "n", cpath), cpath + ".n"));
        Rational delta = rational_from_json(field(spec, "delta", cpath),
                                            cpath + ".delta");
        Cl2Witness w = cl2_witness(list, S, n, delta, limits);
        Json values = Json::object();
        values["I"] = w.I;
        Json f = Json::object();
        for (const auto& [level, v] : w.f) f[std::to_string(level)] = v;
        values["f"] = std::move(f);
        bool ok = Rational(static_cast<long long>(w.I.size())) >=
                  delta * Rational(static_cast<long long>(list.size()));
        ctx.check(ok, std::move(values));
      } else if (kind == "diagonal") {
        std::vector<Slalom> list;
        for (const auto& name :
             get_names(field(spec, "slaloms", cpath), cpath + ".slaloms"))
          list.push_back(slaloms.at(name, cpath + ".slaloms"));
        std::uint32_t H = static_cast<std::uint32_t>(
            get_nat(field(spec, "H", cpath), cpath + ".H"));
        std::vector<std::uint64_t> f = diagonal_escape(list, H);
        bool ok = true;
        for (std::uint32_t nlevel = 1;
             nlevel <= H && nlevel - 1 < list.size(); ++nlevel) {
          const auto* values = list[nlevel - 1].level(nlevel);
          if (values && std::binary_search(values->begin(), values->end(),
                                           f[nlevel]))
            ok = false;
        }
        Json values = Json::object();
        values["f"] = f;
        ctx.check(ok, std::move(values));
      } else {
        bad(cpath, "unknown check '" + kind + "'");
      }
    } catch (const Error& e) {
      if (e.code() == Errc::SchemaError) throw;
      Json values = Json::object();
      values["error"] = e.what();
      if (spec.contains("expect_error") &&
          std::string(e.what()).find(get_string(spec["expect_error"],
                                                cpath + ".expect_error")) !=
              std::string::npos)
        ctx.pass(std::move(values));
      else
        ctx.fail(std::move(values));
    }
  }
}

void run_kelley(const Json& payload, Report& report, const Limits& limits,
                const std::string& path) {
  Table<FiniteFamily> families(payload, "families", path, family_from_json);
  const Json& checks = field(payload, "checks", path);
  if (!checks.is_array()) bad(path + ".checks", "expected an array");
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const Json& spec = checks[i];
    const std::string cpath = path + ".checks[" + std::to_string(i) + "]";
    std::string kind = get_string(field(spec, "check", cpath), cpath);
    CheckContext ctx{report, kind + "-" + std::to_string(i)};
    auto family_arg = [&]() -> const FiniteFamily& {
      return families.at(get_string(field(spec, "family", cpath), cpath),
                         cpath + ".family");
    };
    try {
      if (kind == "kappa_seq") {
        std::vector<std::uint32_t> seq;
        for (const auto& v : field(spec, "seq", cpath))
          seq.push_back(
              static_cast<std::uint32_t>(get_nat(v, cpath + ".seq")));
        expect_rational(ctx, spec, kappa_of_seq(family_arg(), seq, limits),
                        cpath);
      } else if (kind == "kappa_bounds") {
        std::uint32_t L = static_cast<std::uint32_t>(
            get_nat(field(spec, "L", cpath), cpath + ".L"));
        std::vector<Rational> bounds = kappa_upper_bounds(family_arg(), L, limits);
        Json list = Json::array();
        bool monotone = true;
        for (std::size_t t = 0; t < bounds.size(); ++t) {
          list.push_back(bounds[t].str());
          if (t > 0 && bounds[t] > bounds[t - 1]) monotone = false;
        }
        Json values = Json::object();
        values["bounds"] = std::move(list);
        ctx.check(monotone, std::move(values));
      } else if (kind == "kappa_lp") {
        KappaCertificate cert = kappa_lp(family_arg(), limits);
        Json values = Json::object();
        values["value"] = cert.value.str();
        Json weights = Json::array();
        for (const auto& w : cert.atom_weights) weights.push_back(w.str());
        values["atom_weights"] = std::move(weights);
        values["seq_multiplicities"] = cert.seq_multiplicities;
        if (spec.contains("expect"))
          ctx.check(cert.value == rational_from_json(spec["expect"],
                                                     cpath + ".expect"),
                    std::move(values));
        else
          ctx.pass(std::move(values));
      } else if (kind == "lp_vs_bounds") {
        std::uint32_t L = static_cast<std::uint32_t>(
            get_nat(field(spec, "L", cpath), cpath + ".L"));
        KappaCertificate cert = kappa_lp(family_arg(), limits);
        std::vector<Rational> bounds = kappa_upper_bounds(family_arg(), L, limits);
        bool ok = cert.value == bounds.back();
        for (const auto& b : bounds) ok = ok && cert.value <= b;
        Json values = Json::object();
        values["value"] = cert.value.str();
        values["stabilized"] = bounds.back().str();
        ctx.check(ok, std::move(values));
      } else if (kind == "fragmentation") {
        std::vector<FiniteFamily> fams;
        for (const auto& name :
             get_names(field(spec, "families", cpath), cpath + ".families"))
          fams.push_back(families.at(name, cpath + ".families"));
        Rational delta = rational_from_json(field(spec, "delta", cpath),
                                            cpath + ".delta");
        FragmentationReport fr = fragmentation_report(fams, delta, limits);
        Json rows = Json::array();
        for (const auto& row : fr.rows) {
          Json r = Json::object();
          r["value"] = row.value.str();
          r["pass"] = row.pass;
          rows.push_back(std::move(r));
        }
        Json values = Json::object();
        values["rows"] = std::move(rows);
        bool want = spec.contains("expect") ? spec["expect"].get<bool>() : true;
        ctx.check(fr.all_pass == want, std::move(values));
      } else {
        bad(cpath, "unknown check '" + kind + "'");
      }
    } catch (const Error& e) {
      if (e.code() == Errc::SchemaError) throw;
      Json values = Json::object();
      values["error"] = e.what();
      if (spec.contains("expect_error") &&
          std::string(e.what()).find(get_string(spec["expect_error"],
                                                cpath + ".expect_error")) !=
              std::string::npos)
        ctx.pass(std::move(values));
      else
        ctx.fail(std::move(values));
    }
  }
}

void run_bell(const Json& payload, Report& report, const Limits& limits,
              const std::string& path) {
  Table<PiPrefix> pis(payload, "pis", path, pi_prefix_from_json);
  const Json& checks = field(payload, "checks", path);
  if (!checks.is_array()) bad(path + ".checks", "expected an array");
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const Json& spec = checks[i];
    const std::string cpath = path + ".checks[" + std::to_string(i) + "]";
    std::string kind = get_string(field(spec, "check", cpath), cpath);
    CheckContext ctx{report, kind + "-" + std::to_string(i)};
    auto pi_list = [&](const char* key) {
      std::vector<PiPrefix> out;
      for (const auto& name :
           get_names(field(spec, key, cpath), cpath + "." + key))
        out.push_back(pis.at(name, cpath + "." + key));
      return out;
    };
    try {
      if (kind == "node_measure") {
        BellNode node = bell_node_from_json(field(spec, "node", cpath),
                                            cpath + ".node");
        expect_rational(ctx, spec, node_measure(node), cpath);
      } else if (kind == "v_trunc_measure") {
        const PiPrefix& pi = pis.at(
            get_string(field(spec, "pi", cpath), cpath), cpath + ".pi");
        expect_rational(ctx, spec, v_trunc(pi).measure(), cpath);
      } else if (kind == "tail_bound") {
        std::uint32_t H = static_cast<std::uint32_t>(
            get_nat(field(spec, "H", cpath), cpath + ".H"));
        std::uint32_t m = static_cast<std::uint32_t>(
            get_nat(field(spec, "m", cpath), cpath + ".m"));
        expect_rational(ctx, spec, v_tail_bound(H, m), cpath);
      } else if (kind == "taylor") {
        std::uint32_t m = static_cast<std::uint32_t>(
            get_nat(field(spec, "m", cpath), cpath + ".m"));
        std::uint32_t n = static_cast<std::uint32_t>(
            get_nat(field(spec, "n", cpath), cpath + ".n"));
        TaylorVerdict tv = taylor_check(m, n);
        Json values = Json::object();
        values["holds"] = tv.holds;
        values["lhs_upper"] = tv.lhs_upper.str();
        values["rhs"] = tv.rhs.str();
        bool ok = tv.holds || n <= 3 * m;  // guaranteed range must hold
        if (spec.contains("expect"))
          ok = tv.holds == spec["expect"].get<bool>();
        ctx.check(ok, std::move(values));
      } else if (kind == "nonempty_V") {
        BellNode s;
        if (spec.contains("s"))
          s = bell_node_from_json(spec["s"], cpath + ".s");
        NonemptyVerdict nv =
            decide_nonempty_V(s, pi_list("pos"), pi_list("neg"), limits);
        Json values = Json::object();
        values["verdict"] = nv.empty ? "empty" : "nonempty";
        if (nv.witness) values["witness"] = *nv.witness;
        if (spec.contains("expect"))
          ctx.check((nv.empty ? "empty" : "nonempty") ==
                        get_string(spec["expect"], cpath + ".expect"),
                    std::move(values));
        else
          ctx.pass(std::move(values));
      } else if (kind == "infinite_C") {
        BellNode s;
        if (spec.contains("s"))
          s = bell_node_from_json(spec["s"], cpath + ".s");
        InfiniteVerdict iv =
            decide_infinite_C(s, pi_list("pos"), pi_list("neg"), limits);
        Json values = Json::object();
        values["verdict"] = iv.finite ? "finite" : "infinite";
        if (iv.witness) values["witness"] = *iv.witness;
        if (spec.contains("expect"))
          ctx.check((iv.finite ? "finite" : "infinite") ==
                        get_string(spec["expect"], cpath + ".expect"),
                    std::move(values));
        else
          ctx.pass(std::move(values));
      } else if (kind == "iso") {
        IsoReport ir = iso_condition_check(pi_list("pos"), pi_list("neg"), limits);
        Json values = Json::object();
        values["c_finite"] = ir.c_finite;
        values["v_empty"] = ir.v_empty;
        ctx.check(ir.consistent, std::move(values));
      } else if (kind == "strict_positivity") {
        BellNode s;
        if (spec.contains("s"))
          s = bell_node_from_json(spec["s"], cpath + ".s");
        std::uint32_t n = static_cast<std::uint32_t>(
            get_nat(field(spec, "n", cpath), cpath + ".n"));
        PositivityReport pr =
            strict_positivity_check(s, pi_list("pis"), n, limits);
        Json values = Json::object();
        values["gap"] = pr.gap.str();
        values["covered"] = pr.covered.str();
        values["tail"] = pr.tail.str();
        values["residual_at_n"] = pr.residual_at_n.str();
        ctx.check(pr.pass, std::move(values));
      } else if (kind == "linked") {
        std::uint32_t n = static_cast<std::uint32_t>(
            get_nat(field(spec, "n", cpath), cpath + ".n"));
        std::vector<BellClopen> sets;
        for (const auto& pi : pi_list("pis")) sets.push_back(v_trunc(pi));
        LinkedReport lr = measure_threshold_report(sets, n);
        Json values = Json::object();
        Json ms = Json::array();
        for (const auto& v : lr.measures) ms.push_back(v.str());
        values["measures"] = std::move(ms);
        bool want = spec.contains("expect") ? spec["expect"].get<bool>() : true;
        ctx.check(lr.all_pass == want, std::move(values));
      } else {
        bad(cpath, "unknown check '" + kind + "'");
      }
    } catch (const Error& e) {
      if (e.code() == Errc::SchemaError) throw;
      Json values = Json::object();
      values["error"] = e.what();
      if (spec.contains("expect_error") &&
          std::string(e.what()).find(get_string(spec["expect_error"],
                                                cpath + ".expect_error")) !=
              std::string::npos)
        ctx.pass(std::move(values));
      else
        ctx.fail(std::move(values));
    }
  }
}

}  // namespace

Report run_scenario_text(const std::string& text, const RunOptions& options) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::ParseError, e.what());
  }
  if (!doc.is_object()) bad("$", "scenario must be an object");
  std::string kind = get_string(field(doc, "kind", "$"), "$.kind");
  Report report;
  report.kind = "scenario";
  report.name = kind;
  report.seed = doc.contains("seed") ? get_nat(doc["seed"], "$.seed")
                                     : options.seed;
  const Json& payload = field(doc, "payload", "$");
  Limits limits = options.limits();
  if (kind == "cantor")
    run_cantor(payload, report, limits, "$.payload");
  else if (kind == "density")
    run_density(payload, report, limits, "$.payload");
  else if (kind == "ad")
    run_ad(payload, report, limits, "$.payload");
  else if (kind == "slalom")
    run_slalom(payload, report, limits, "$.payload");
  else if (kind == "kelley")
    run_kelley(payload, report, limits, "$.payload");
  else if (kind == "bell")
    run_bell(payload, report, limits, "$.payload");
  else
    bad("$.kind", "unknown kind '" + kind + "'");
  return report;
}

Report run_scenario_file(const std::string& path, const RunOptions& options) {
  std::ifstream in(path);
  if (!in) raise(Errc::ParseError, "cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return run_scenario_text(buffer.str(), options);
}

Report run_named_suite(const std::string& name, const RunOptions& options) {
  return run_suite(name, options.seed, options.limits());
}

std::string describe_schemas() {
  Json doc = Json::object();
  doc["tool"] = version_string();
  doc["scenario"] = Json::object();
  doc["scenario"]["shape"] =
      "{\"kind\": <kind>, \"seed\"?: n, \"payload\": {...}}";
  Json kinds = Json::object();
  kinds["cantor"] =
      "payload: {sets: {name: [{\"coord\": bit, ...}, ...]}, checks: "
      "[measure|support|product_measure|modularity|equal|"
      "complement_involution]}";
  kinds["density"] =
      "payload: {periodic: {name: {mod, residues, added?, removed?}}, "
      "clopen: {...}, staged: {name: {stages: [{set, from}], density, "
      "truncated}}, checks: "
      "[density|transfer|psi0|staged_count|periodic_modularity]}";
  kinds["ad"] =
      "payload: {scenario: {points: {label: [\"0110...\"]}, family: {label: "
      "[naturals]}, ad_bound}, checks: "
      "[blocks|u_trunc_measure|contains|find_N|positive_bound|emptiness]}";
  kinds["slalom"] =
      "payload: {slaloms: {name: {levels: {\"k\": [values]}}}, checks: "
      "[weight|infinite|w_delta_class|a_w_measure|cl2|diagonal]}; "
      "expressions: true/false | {posT} | {height:{S,n}} | {and:[..]} | "
      "{or:[..]} | {not: e}";
  kinds["kelley"] =
      "payload: {families: {name: {atoms: [labels], sets: [[labels]]}}, "
      "checks: [kappa_seq|kappa_bounds|kappa_lp|lp_vs_bounds|fragmentation]}";
  kinds["bell"] =
      "payload: {pis: {name: {rows: [[0],[1,0],...]}}, checks: "
      "[node_measure|v_trunc_measure|tail_bound|taylor|nonempty_V|"
      "infinite_C|iso|strict_positivity|linked]}";
  doc["kinds"] = std::move(kinds);
  doc["suites"] = suite_names();
  doc["rational"] = "exact \"p/q\" strings everywhere; no floats";
  doc["exit_codes"] =
      "0 all pass, 1 some check failed, 2 unknown verdicts, 3 usage/schema";
  return doc.dump(2) + "\n";
}

}  // namespace growthlab
