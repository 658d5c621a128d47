#include <doctest.h>

#include "growthlab/error.hpp"
#include "growthlab/json_io.hpp"
#include "growthlab/rng.hpp"
#include "growthlab/scenario.hpp"
#include "growthlab/suites.hpp"

using namespace growthlab;

TEST_CASE("wire format round trips") {
  Rng rng(53);
  for (int i = 0; i < 50; ++i) {
    // Clopen sets through the cylinder array format.
    std::vector<PartialAssignment> cyls;
    for (std::uint32_t t = 0; t < rng.below(4); ++t) {
      PartialAssignment phi;
      for (Coord c = 0; c < 5; ++c)
        if (rng.coin()) phi.set(c, rng.coin());
      cyls.push_back(std::move(phi));
    }
    ClopenSet s = ClopenSet::from_cylinders(cyls);
    CHECK(clopen_from_json(clopen_to_json(s), "$") == s);

    // Periodic sets.
    std::vector<std::uint64_t> rs;
    std::uint64_t mod = 1 + rng.below(10);
    for (std::uint64_t r = 0; r < mod; ++r)
      if (rng.coin()) rs.push_back(r);
    PeriodicSet p = PeriodicSet::from_residues(mod, rs, {rng.below(30)});
    CHECK(periodic_from_json(periodic_to_json(p), "$") == p);

    // Slaloms.
    std::vector<Slalom::Level> levels;
    for (std::uint32_t k = 1; k <= 4; ++k)
      if (rng.coin())
        levels.push_back({k, {rng.below(1ull << k)}});
    Slalom sl = Slalom::from_levels(std::move(levels));
    CHECK(slalom_from_json(slalom_to_json(sl), "$") == sl);
  }

  Rational r = Rational::parse("22/7");
  CHECK(rational_from_json(rational_to_json(r), "$") == r);

  StagedSet staged = StagedSet::from_stages(
      {{PeriodicSet::from_residues(2, {0}), 0},
       {PeriodicSet::from_residues(4, {0, 1, 2}), 32}},
      Rational(3, 4), true);
  StagedSet staged2 = staged_from_json(staged_to_json(staged), "$");
  CHECK(staged_to_json(staged2) == staged_to_json(staged));
  CHECK(staged2.declared_density() == Rational(3, 4));
  CHECK(staged2.truncated());

  std::map<std::string, std::vector<PointPrefix>> pts;
  pts["a"] = {PointPrefix{"0110"}};
  std::map<std::string, ADPrefix> fams;
  fams["a"] = ADPrefix{{1, 3}, "a"};
  Scenario sc(std::move(pts), std::move(fams), 2);
  Json sj = scenario_to_json(sc);
  CHECK(scenario_to_json(ad_scenario_from_json(sj, "$")) == sj);

  FiniteFamily fam = FiniteFamily::make({"x", "y"}, {{0}, {0, 1}});
  FiniteFamily fam2 = family_from_json(family_to_json(fam), "$");
  CHECK(fam2.atoms == fam.atoms);
  CHECK(fam2.sets == fam.sets);

  PiPrefix pi = make_pi_prefix({{0}, {1, 0}});
  CHECK(pi_prefix_from_json(pi_prefix_to_json(pi), "$").rows == pi.rows);

  GenExpr e = GenExpr::conj(
      GenExpr::pos(Slalom::from_levels({{1, {0}}})),
      GenExpr::neg(GenExpr::height(Slalom::from_levels({{1, {1}}}), 2)));
  Json j = genexpr_to_json(e);
  GenExpr back = genexpr_from_json(j, "$");
  CHECK(genexpr_to_json(back) == j);
}

TEST_CASE("schema errors carry the offending path") {
  try {
    periodic_from_json(Json::parse(R"({"residues": []})"), "$.p");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SchemaError);
    CHECK(std::string(e.what()).find("$.p") != std::string::npos);
  }
  CHECK_THROWS_AS(slalom_from_json(Json::parse(R"({"levels":{"1":[0,1]}})"),
                                   "$"),
                  Error);
}

TEST_CASE("scenario runner on a cantor document") {
  const char* doc = R"({
    "kind": "cantor",
    "payload": {
      "sets": {
        "a": [{"0": 0}],
        "b": [{"0": 1, "1": 0}],
        "u": [{"0": 0}, {"0": 1, "1": 0}]
      },
      "checks": [
        {"check": "measure", "set": "u", "expect": "3/4"},
        {"check": "modularity", "a": "a", "b": "b"},
        {"check": "support", "set": "a", "expect": [0]},
        {"check": "equal", "a": "a", "b": "b", "expect": false},
        {"check": "complement_involution", "set": "u"}
      ]
    }
  })";
  Report r = run_scenario_text(doc, {});
  CHECK(r.status() == 0);
  CHECK(r.verdicts.size() == 5);
}

TEST_CASE("scenario runner maps operational errors to failing verdicts") {
  const char* doc = R"({
    "kind": "cantor",
    "payload": {
      "sets": {"a": [{"0": 0}]},
      "checks": [{"check": "product_measure", "a": "a", "b": "a"}]
    }
  })";
  Report r = run_scenario_text(doc, {});
  CHECK(r.status() == 1);
  CHECK(r.verdicts[0].status == "fail");
}

TEST_CASE("scenario runner rejects bad schemas loudly") {
  CHECK_THROWS_AS(run_scenario_text("{", {}), Error);
  CHECK_THROWS_AS(run_scenario_text(R"({"kind": "nope", "payload": {}})", {}),
                  Error);
  CHECK_THROWS_AS(
      run_scenario_text(R"({"kind": "cantor", "payload": {"checks": 3}})", {}),
      Error);
  try {
    run_scenario_text(
        R"({"kind":"cantor","payload":{"checks":[{"check":"measure","set":"missing"}]}})",
        {});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SchemaError);
  }
}

TEST_CASE("unknown verdicts surface as status 2") {
  const char* doc = R"({
    "kind": "ad",
    "payload": {
      "scenario": {
        "points": {"a": ["11"]},
        "family": {"a": [1]},
        "ad_bound": 2
      },
      "checks": [
        {"check": "emptiness", "C": [{"1": 1}], "betas": ["a"], "alphas": [],
         "depth": 4}
      ]
    }
  })";
  Report r = run_scenario_text(doc, {});
  CHECK(r.status() == 2);
  CHECK(r.verdicts[0].status == "unknown");
}

TEST_CASE("suite reports are byte deterministic") {
  RunOptions opts;
  opts.seed = 12345;
  Report a = run_named_suite("diagonal", opts);
  Report b = run_named_suite("diagonal", opts);
  CHECK(a.to_json_text() == b.to_json_text());
  CHECK(a.status() == 0);
  CHECK_THROWS_AS(run_named_suite("no-such-suite", opts), Error);
}

TEST_CASE("describe covers every kind and suite") {
  std::string text = describe_schemas();
  for (const char* kind :
       {"cantor", "density", "ad", "slalom", "kelley", "bell"})
    CHECK(text.find(kind) != std::string::npos);
  for (const auto& name : suite_names())
    CHECK(text.find(name) != std::string::npos);
}
