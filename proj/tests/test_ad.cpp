#include <doctest.h>

#include "growthlab/ad.hpp"
#include "growthlab/error.hpp"
#include "growthlab/rng.hpp"

using namespace growthlab;

namespace {

Scenario single_label() {
  std::map<std::string, std::vector<PointPrefix>> pts;
  pts["a"] = {PointPrefix{"11111111111111111111"},
              PointPrefix{"00000000000000000000"},
              PointPrefix{"10101010101010101010"}};
  std::map<std::string, ADPrefix> fam;
  fam["a"] = ADPrefix{{3, 5, 9, 10, 14, 17}, "a"};
  return Scenario(std::move(pts), std::move(fam), 4);
}

// Two labels sharing only the value 4 (below the bound 5).
Scenario two_labels() {
  std::map<std::string, std::vector<PointPrefix>> pts;
  std::string ones(40, '1');
  std::string zeros(40, '0');
  pts["a"] = {PointPrefix{ones}, PointPrefix{zeros}, PointPrefix{ones},
              PointPrefix{zeros}};
  pts["b"] = {PointPrefix{zeros}, PointPrefix{ones}, PointPrefix{zeros},
              PointPrefix{ones}};
  std::map<std::string, ADPrefix> fam;
  fam["a"] = ADPrefix{{1, 4, 6, 8, 10, 12, 14, 16, 18, 20}, "a"};
  fam["b"] = ADPrefix{{4, 7, 9, 11, 13, 15, 17, 19, 21, 23}, "b"};
  return Scenario(std::move(pts), std::move(fam), 5);
}

}  // namespace

TEST_CASE("scenario validation") {
  std::map<std::string, std::vector<PointPrefix>> pts;
  pts["a"] = {PointPrefix{"111"}};
  pts["b"] = {PointPrefix{"000"}};
  std::map<std::string, ADPrefix> fam;
  fam["a"] = ADPrefix{{1, 7}, "a"};
  fam["b"] = ADPrefix{{2, 7}, "b"};
  // Shared value 7 above the bound 5 breaks the certificate.
  CHECK_THROWS_AS(Scenario(pts, fam, 5), Error);
}

TEST_CASE("triangular block schedule") {
  Scenario s = single_label();
  BlockFamily bf = build_blocks(s, "a", 2);
  CHECK(bf.supports[0] == std::vector<Coord>{3});
  CHECK(bf.supports[1] == std::vector<Coord>{5, 9});
  CHECK(bf.supports[2] == std::vector<Coord>{10, 14, 17});
  for (std::size_t i = 0; i < bf.blocks.size(); ++i)
    CHECK(bf.blocks[i].size() == i + 1);
  // Bits come from the matching point.
  CHECK(bf.blocks[0].at(3) == true);
  CHECK(bf.blocks[1].at(5) == false);
  CHECK(bf.blocks[2].at(10) == true);
  CHECK(bf.blocks[2].at(14) == true);
  // Supports sit inside the family past the block index.
  for (std::size_t i = 0; i < bf.supports.size(); ++i)
    for (Coord c : bf.supports[i]) CHECK(c >= i);
}

TEST_CASE("insufficient prefixes fail loudly") {
  Scenario s = single_label();
  CHECK_THROWS_AS(build_blocks(s, "a", 3), Error);  // family too short
  CHECK_THROWS_AS(build_blocks(s, "a", 9), Error);  // past the block bound
  std::map<std::string, std::vector<PointPrefix>> pts;
  pts["a"] = {PointPrefix{"11"}};  // cannot read coordinate 3
  std::map<std::string, ADPrefix> fam;
  fam["a"] = ADPrefix{{3}, "a"};
  Scenario shallow(std::move(pts), std::move(fam), 4);
  CHECK_THROWS_AS(build_blocks(shallow, "a", 0), Error);
}

TEST_CASE("block union measures") {
  Scenario s = single_label();
  CHECK(u_trunc(s, "a", 0).measure() == Rational(1, 2));
  CHECK(u_trunc(s, "a", 1).measure() == Rational(5, 8));
  CHECK(u_trunc(s, "a", 2).measure() == Rational(43, 64));
  // Monotone and below the geometric bound.
  Rational bound(0);
  for (std::uint32_t n = 0; n <= 2; ++n) {
    bound += Rational::pow2(-static_cast<long>(n) - 1);
    CHECK(u_trunc(s, "a", n).measure() <= bound);
    if (n > 0)
      CHECK(u_trunc(s, "a", n - 1).subset_of(u_trunc(s, "a", n)));
  }
}

TEST_CASE("containment check and fault injection") {
  Scenario s = single_label();
  CHECK(contains_check(s, "a", 2).pass);
  BlockFamily bad = build_blocks(s, "a", 2);
  PartialAssignment corrupt;
  corrupt.set(5, true);
  corrupt.set(9, true);
  bad.blocks[1] = corrupt;
  ContainsReport r = contains_check(s, "a", 1, bad);
  CHECK(!r.pass);
  CHECK(r.offending == Coord{5});
  CHECK_THROWS_AS(contains_check(s, "a", 9), Error);
}

TEST_CASE("find_N on one and two labels") {
  Scenario one = single_label();
  CHECK(find_N(one, {"a"}, PartialAssignment{}) == 0);

  Scenario two = two_labels();
  // The shared value 4 sits in block 1 of a (indices 1,2) and block 0 of b,
  // so N = 1 puts every conflict inside I_N.
  CHECK(find_N(two, {"a", "b"}, PartialAssignment{}) == 1);
  // tau on a fresh small coordinate keeps N at 1.
  PartialAssignment tau;
  tau.set(0, true);
  CHECK(find_N(two, {"a", "b"}, tau) == 1);
}

TEST_CASE("find_N needs certifiable prefixes") {
  // tau reaching past the family prefix cannot be certified against the
  // unseen blocks.
  Scenario s = single_label();
  PartialAssignment tau;
  tau.set(100, true);
  CHECK_THROWS_AS(find_N(s, {"a"}, tau), Error);
}

TEST_CASE("positivity bound on one label") {
  Scenario s = single_label();
  PositiveBound pb = positive_lower_bound(s, {"a"}, PartialAssignment{});
  CHECK(pb.N == 0);
  CHECK(pb.core_measure == Rational(1, 2));
  CHECK(pb.bound == Rational(1, 4));
  for (std::uint32_t n = 0; n <= 2; ++n) {
    ClopenSet residual =
        set_difference(ClopenSet::full_space(), u_trunc(s, "a", n));
    CHECK(residual.measure() > pb.bound);
  }
}

TEST_CASE("positivity bound on two labels matches the closed form") {
  Scenario s = two_labels();
  PositiveBound pb = positive_lower_bound(s, {"a", "b"}, PartialAssignment{});
  CHECK(pb.N == 1);
  ClopenSet core = ClopenSet::full_space();
  for (const auto& label : {"a", "b"})
    core = set_difference(core, u_trunc(s, label, pb.N));
  CHECK(pb.core_measure == core.measure());
  CHECK(pb.bound ==
        pb.core_measure * (Rational(1) - Rational(1, 4)).pow(2));
  for (std::uint32_t n = pb.N; n <= pb.N + 2; ++n) {
    ClopenSet residual = ClopenSet::full_space();
    for (const auto& label : {"a", "b"})
      residual = set_difference(residual, u_trunc(s, label, n));
    CHECK(residual.measure() > pb.bound);
  }
}

TEST_CASE("empty core error path") {
  // tau equal to block 0 of a single-block truncation is swallowed whole.
  std::map<std::string, std::vector<PointPrefix>> pts;
  pts["a"] = {PointPrefix{"1"}};
  std::map<std::string, ADPrefix> fam;
  fam["a"] = ADPrefix{{0}, "a"};
  Scenario s(std::move(pts), std::move(fam), 1);
  PartialAssignment tau;
  tau.set(0, true);
  CHECK_THROWS_AS(positive_lower_bound(s, {"a"}, tau), Error);
}

TEST_CASE("emptiness reduction matches brute force") {
  Scenario s = two_labels();
  BlockFamily ba = build_blocks(s, "a", 2);

  // A single positive block: nonempty with a checkable witness.
  EmptinessResult r1 =
      emptiness_decide(ClopenSet::cylinder(ba.blocks[0]), {"a"}, {}, s, 4);
  CHECK(r1.verdict == EmptinessResult::Verdict::Nonempty);
  ClopenSet full_expr = set_intersect(ClopenSet::cylinder(ba.blocks[0]),
                                      u_trunc(s, "a", 2));
  CHECK(ClopenSet::cylinder(*r1.witness).subset_of(full_expr));

  // C covered by the negative side: empty.
  ClopenSet c2 = ClopenSet::from_cylinders({ba.blocks[0], ba.blocks[1]});
  EmptinessResult r2 = emptiness_decide(c2, {}, {"a"}, s, 4);
  CHECK(r2.verdict == EmptinessResult::Verdict::Empty);

  // Cross-checked against direct evaluation for mixed instances.
  Rng rng(23);
  for (int i = 0; i < 30; ++i) {
    PartialAssignment phi;
    if (rng.coin()) phi.set(static_cast<Coord>(rng.below(3)), rng.coin());
    ClopenSet C = ClopenSet::cylinder(phi);
    std::vector<std::string> betas, alphas;
    if (rng.coin()) betas.push_back("a");
    alphas.push_back("b");
    EmptinessResult got = emptiness_decide(C, betas, alphas, s, 6);
    ClopenSet direct = C;
    for (const auto& bname : betas)
      direct = set_intersect(direct, u_trunc(s, bname, 3));
    for (const auto& aname : alphas)
      direct = set_difference(direct, u_trunc(s, aname, 3));
    if (got.verdict == EmptinessResult::Verdict::Empty)
      CHECK(direct.is_empty());
    if (got.verdict == EmptinessResult::Verdict::Nonempty) {
      CHECK(!direct.is_empty());
      CHECK(ClopenSet::cylinder(*got.witness).subset_of(direct));
    }
  }
}

TEST_CASE("emptiness runs out of certified blocks") {
  // One shared block each: stripping needs a block with fresh coordinates,
  // and there is none.
  std::map<std::string, std::vector<PointPrefix>> pts;
  pts["a"] = {PointPrefix{"11"}};
  std::map<std::string, ADPrefix> fam;
  fam["a"] = ADPrefix{{1}, "a"};
  Scenario s(std::move(pts), std::move(fam), 2);
  ClopenSet C = ClopenSet::cylinder(PartialAssignment{{1, true}});
  EmptinessResult r = emptiness_decide(C, {"a"}, {}, s, 4);
  CHECK(r.verdict == EmptinessResult::Verdict::Unknown);
  // Depth zero also yields Unknown.
  Scenario t = two_labels();
  EmptinessResult r2 =
      emptiness_decide(ClopenSet::full_space(), {"a"}, {"b"}, t, 0);
  CHECK(r2.verdict == EmptinessResult::Verdict::Unknown);
}
