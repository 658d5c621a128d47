#include <doctest.h>

#include "growthlab/error.hpp"
#include "growthlab/rng.hpp"
#include "growthlab/slalom.hpp"

using namespace growthlab;

namespace {

Slalom s_of(std::vector<Slalom::Level> levels) {
  return Slalom::from_levels(std::move(levels));
}

}  // namespace

TEST_CASE("slalom validation") {
  CHECK_THROWS_AS(s_of({{1, {0, 1}}}), Error);  // level 1 full
  CHECK_THROWS_AS(s_of({{2, {4}}}), Error);     // value out of range
  CHECK_THROWS_AS(s_of({{0, {0}}}), Error);     // level 0 unusable
  CHECK(s_of({{1, {}}}).empty());               // empty set means absent
}

TEST_CASE("weights") {
  CHECK(s_of({{1, {0}}}).weight() == Rational(1, 2));
  CHECK(s_of({{1, {0}}, {2, {1, 2}}}).weight() == Rational(1));
  CHECK(Slalom().weight() == Rational(0));
  CHECK(s_of({{1, {0}}, {2, {1, 2}}}).tail_weight(1) == Rational(1, 2));
}

TEST_CASE("enumeration counts") {
  CHECK(enum_omega(0).size() == 1);
  CHECK(enum_omega(1).size() == 2);
  CHECK(enum_omega(2).size() == 5);
  CHECK(enum_omega(3).size() == 50);
  CHECK(enum_omega(4).size() == 11525);
  CHECK_THROWS_AS(enum_omega(5), Error);
}

TEST_CASE("membership semantics") {
  OmegaPoint p1{Slalom(), 1};
  CHECK(member(GenExpr::pos(Slalom()), p1));
  // The prefix below the height is empty, so the atom holds.
  CHECK(member(GenExpr::pos(s_of({{1, {0}}})), p1));
  CHECK(!member(GenExpr::height(Slalom(), 2), p1));
  OmegaPoint p3{s_of({{1, {0}}, {2, {3}}}), 3};
  CHECK(member(GenExpr::pos(s_of({{1, {0}}})), p3));
  CHECK(!member(GenExpr::pos(s_of({{1, {1}}})), p3));
  CHECK(member(GenExpr::height(s_of({{1, {0}}}), 2), p3));
  CHECK(!member(GenExpr::height(Slalom(), 2), p3));
}

TEST_CASE("normal form merges and marks") {
  Slalom A = s_of({{1, {0}}});
  Slalom B = s_of({{2, {3}}});
  auto nf = normal_form(GenExpr::conj(GenExpr::pos(A), GenExpr::pos(B)));
  REQUIRE(nf.size() == 1);
  CHECK(!nf[0].marked_finite);
  CHECK(nf[0].positive == s_of({{1, {0}}, {2, {3}}}));

  // Union covering a level is finite.
  auto nf2 = normal_form(
      GenExpr::conj(GenExpr::pos(A), GenExpr::pos(s_of({{1, {1}}}))));
  REQUIRE(nf2.size() == 1);
  CHECK(nf2[0].marked_finite);
  CHECK(!decide_infinite(nf2[0]));

  // Incompatible height prefixes are finite.
  auto nf3 = normal_form(
      GenExpr::conj(GenExpr::height(s_of({{1, {0}}}), 2),
                    GenExpr::height(s_of({{1, {1}}, {2, {0}}}), 3)));
  REQUIRE(nf3.size() == 1);
  CHECK(nf3[0].marked_finite);

  // Compatible heights merge to the larger one.
  auto nf4 = normal_form(
      GenExpr::conj(GenExpr::height(s_of({{1, {0}}}), 2),
                    GenExpr::height(s_of({{1, {0}}, {2, {0}}}), 3)));
  REQUIRE(nf4.size() == 1);
  CHECK(!nf4[0].marked_finite);
  CHECK(nf4[0].height_n == 3);
}

TEST_CASE("decision procedure criterion") {
  Conjunct only_positive;
  only_positive.positive = s_of({{1, {0}}});
  CHECK(decide_infinite(only_positive));

  Conjunct empty_negative;
  empty_negative.negatives.push_back(Slalom());
  CHECK(!decide_infinite(empty_negative));

  Conjunct escaping;
  escaping.positive = s_of({{2, {0}}});
  escaping.negatives.push_back(s_of({{2, {1}}}));
  CHECK(decide_infinite(escaping));

  // Positive prefix incompatible with the height constraint.
  Conjunct clash;
  clash.height_S = s_of({{1, {0}}});
  clash.height_n = 2;
  clash.positive = s_of({{1, {1}}});
  CHECK(!decide_infinite(clash));
}

TEST_CASE("decision procedure against enumeration below height 4") {
  Rng rng(5);
  auto points = enum_omega(4);
  auto random_slalom = [&] {
    std::vector<Slalom::Level> levels;
    for (std::uint32_t k = 1; k <= 3; ++k) {
      std::uint64_t full = (1ull << (1ull << k)) - 1;
      std::uint64_t mask = rng.below(full + 1);
      if (mask == full || mask == 0) continue;
      std::vector<std::uint64_t> values;
      for (std::uint64_t v = 0; v < (1ull << k); ++v)
        if ((mask >> v) & 1ull) values.push_back(v);
      levels.push_back({k, std::move(values)});
    }
    return s_of(std::move(levels));
  };
  for (int i = 0; i < 60; ++i) {
    // Random conjunction of a couple of atoms and negations.
    GenExpr e = GenExpr::pos(random_slalom());
    if (rng.coin()) e = GenExpr::conj(e, GenExpr::pos(random_slalom()));
    if (rng.coin()) e = GenExpr::conj(e, GenExpr::neg(GenExpr::pos(random_slalom())));
    if (rng.coin()) {
      Slalom h = random_slalom().restricted_below(2);
      e = GenExpr::conj(e, GenExpr::height(h, 2));
    }
    bool infinite = decide_infinite(e);
    // The enumeration sees a member at the top height exactly when the
    // denotation is infinite (everything lives below level 4).
    bool top_member = false;
    for (const auto& p : points)
      if (p.n == 4 && member(e, p)) {
        top_member = true;
        break;
      }
    CHECK(infinite == top_member);
  }
}

TEST_CASE("negated height atoms resolve by refinement") {
  // T_(empty,1) minus T_(S,2) for every S below 2 is finite, and the
  // refinement discovers which branches survive.
  GenExpr e = GenExpr::conj(GenExpr::height(Slalom(), 1),
                            GenExpr::neg(GenExpr::height(s_of({{1, {0}}}), 2)));
  auto nf = normal_form(e);
  // Branches: prefixes at height 2 other than {1 -> {0}}: empty and {1->{1}}.
  CHECK(nf.size() == 2);
  CHECK(decide_infinite(e));
  // Subtracting every height-2 class kills the expression.
  GenExpr all = GenExpr::height(Slalom(), 1);
  all = GenExpr::conj(all, GenExpr::neg(GenExpr::height(Slalom(), 2)));
  all = GenExpr::conj(all, GenExpr::neg(GenExpr::height(s_of({{1, {0}}}), 2)));
  all = GenExpr::conj(all, GenExpr::neg(GenExpr::height(s_of({{1, {1}}}), 2)));
  CHECK(!decide_infinite(all));
  CHECK_THROWS_AS(
      normal_form(GenExpr::neg(GenExpr::height(Slalom(), 12))), Error);
}

TEST_CASE("expression verdicts expose finite and empty") {
  ExprVerdict v1 = expr_verdict(GenExpr::pos(s_of({{1, {0}}})));
  CHECK(v1.infinite);
  CHECK(v1.empty == false);
  ExprVerdict v2 = expr_verdict(GenExpr::constant(false));
  CHECK(!v2.infinite);
  CHECK(v2.empty == true);
  // Finite but nonempty: a covered union keeps its low members.
  ExprVerdict v3 = expr_verdict(
      GenExpr::conj(GenExpr::pos(s_of({{1, {0}}})),
                    GenExpr::pos(s_of({{1, {1}}}))));
  CHECK(!v3.infinite);
  CHECK(v3.empty == false);
}

TEST_CASE("tail classes") {
  Slalom w = s_of({{1, {0}}});
  OmegaPoint c1 = w_delta_class(w, Rational(1, 4));
  CHECK(c1.n == 0);
  CHECK(c1.S == Slalom());
  CHECK(w_delta_class(Slalom(), Rational(1, 2)).n == 0);
  OmegaPoint c3 = w_delta_class(s_of({{1, {0}}, {2, {1, 2}}}), Rational(3, 4));
  CHECK(c3.n == 2);
  CHECK(c3.S == s_of({{1, {0}}}));
  CHECK_THROWS_AS(w_delta_class(w, Rational(1)), Error);
}

TEST_CASE("escape-set measures") {
  AwMeasure aw = a_w_measure(s_of({{1, {0}}, {2, {0}}}), 0);
  CHECK(aw.exact == Rational(3, 8));
  CHECK(aw.union_bound == Rational(1, 4));
  CHECK(a_w_measure(s_of({{1, {0}}}), 5).exact == Rational(1));
  CHECK(a_w_measure(s_of({{3, {5}}}), 0).exact == Rational(7, 8));
  // exact >= union bound across random slaloms.
  Rng rng(9);
  for (int i = 0; i < 100; ++i) {
    std::vector<Slalom::Level> levels;
    for (std::uint32_t k = 1; k <= 5; ++k) {
      if (rng.coin()) continue;
      std::uint64_t width = 1ull << k;
      std::uint64_t size = 1 + rng.below(width - 1);
      std::vector<std::uint64_t> values;
      for (std::uint64_t v = 0; v < width && values.size() < size; ++v)
        if (rng.coin()) values.push_back(v);
      levels.push_back({k, std::move(values)});
    }
    Slalom w = s_of(std::move(levels));
    AwMeasure m = a_w_measure(w, 1);
    CHECK(m.exact >= m.union_bound);
  }
}

TEST_CASE("compatible subfamily witnesses") {
  Slalom v = s_of({{2, {1}}});
  Cl2Witness w = cl2_witness({v, v}, Slalom(), 1, Rational(1, 2));
  CHECK(w.I.size() == 2);

  std::vector<Slalom> pairwise{
      s_of({{2, {0, 1}}}), s_of({{2, {2, 3}}}), s_of({{2, {0, 2}}}),
      s_of({{2, {1, 3}}})};
  Cl2Witness w2 = cl2_witness(pairwise, Slalom(), 1, Rational(1, 4));
  CHECK(w2.I.size() >= 1);
  // The escape function avoids the union on every level it names.
  for (const auto& [level, value] : w2.f)
    for (std::uint32_t idx : w2.I) {
      const auto* values = pairwise[idx].level(level);
      if (values)
        CHECK(!std::binary_search(values->begin(), values->end(), value));
    }

  // Values at the class height itself are legitimate members but count
  // against compatibility.
  Cl2Witness at_height =
      cl2_witness({s_of({{1, {0}}})}, Slalom(), 1, Rational(1, 2));
  CHECK(at_height.I.size() == 1);

  // Class mismatch paths: wrong prefix, then a tail too heavy for delta.
  CHECK_THROWS_AS(cl2_witness({s_of({{1, {0}}, {2, {0}}})},
                              s_of({{1, {1}}}), 2, Rational(1, 2)),
                  Error);
  Slalom heavy = s_of({{2, {0, 1, 2}}});
  CHECK_THROWS_AS(cl2_witness({heavy}, Slalom(), 1, Rational(1, 2)), Error);
}

TEST_CASE("diagonal escape") {
  CHECK(diagonal_escape({s_of({{1, {0}}})}, 3)[1] == 1);
  CHECK(diagonal_escape({}, 2) == std::vector<std::uint64_t>{0, 0, 0});
  std::vector<Slalom> forced;
  for (std::uint32_t level = 1; level <= 4; ++level) {
    std::vector<std::uint64_t> values;
    for (std::uint64_t v = 1; v < (1ull << level); ++v) values.push_back(v);
    forced.push_back(s_of({{level, values}}));
  }
  auto f = diagonal_escape(forced, 4);
  for (std::uint32_t i = 1; i <= 4; ++i) CHECK(f[i] == 0);
  CHECK_THROWS_AS(diagonal_escape(forced, 2), Error);
}

TEST_CASE("centered families have slalom unions") {
  // Finite echo of the centered-family law: a finite family of generators
  // has an infinite intersection exactly when the levelwise union stays a
  // slalom, checked against the enumeration.
  Rng rng(31);
  auto points = enum_omega(4);
  for (int i = 0; i < 60; ++i) {
    std::vector<Slalom> family;
    std::uint32_t size = 2 + static_cast<std::uint32_t>(rng.below(3));
    for (std::uint32_t t = 0; t < size; ++t) {
      std::vector<Slalom::Level> levels;
      for (std::uint32_t k = 1; k <= 3; ++k) {
        if (rng.coin()) continue;
        std::uint64_t width = 1ull << k;
        std::uint64_t count = 1 + rng.below(width - 1);
        std::vector<std::uint64_t> values;
        for (std::uint64_t v = 0; v < width && values.size() < count; ++v)
          if (rng.coin()) values.push_back(v);
        if (!values.empty()) levels.push_back({k, std::move(values)});
      }
      family.push_back(s_of(std::move(levels)));
    }
    bool union_valid = true;
    Slalom acc;
    for (const auto& w : family) {
      SlalomUnion un = slalom_union(acc, w);
      if (!un.slalom) {
        union_valid = false;
        break;
      }
      acc = *un.slalom;
    }
    GenExpr conj = GenExpr::pos(family[0]);
    for (std::uint32_t t = 1; t < size; ++t)
      conj = GenExpr::conj(std::move(conj), GenExpr::pos(family[t]));
    CHECK(decide_infinite(conj) == union_valid);
    bool top_member = false;
    for (const auto& p : points)
      if (p.n == 4 && member(conj, p)) {
        top_member = true;
        break;
      }
    CHECK(top_member == union_valid);
  }
}
