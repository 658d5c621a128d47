#include <doctest.h>

#include "growthlab/density.hpp"
#include "growthlab/error.hpp"
#include "growthlab/rng.hpp"

using namespace growthlab;

namespace {

PeriodicSet evens() { return PeriodicSet::from_residues(2, {0}); }

std::uint64_t brute_count(const PeriodicSet& p, std::uint64_t N) {
  std::uint64_t c = 0;
  for (std::uint64_t k = 0; k < N; ++k)
    if (p.member(k)) ++c;
  return c;
}

ChainGenerator dyadic_chain() {
  return {[](std::uint32_t k) -> std::optional<PeriodicSet> {
            std::uint64_t M = 1ull << (k + 1);
            std::vector<std::uint64_t> rs;
            for (std::uint64_t r = 0; r + 1 < M; ++r) rs.push_back(r);
            return PeriodicSet::from_residues(M, rs);
          },
          Rational(1)};
}

}  // namespace

TEST_CASE("density of periodic sets") {
  CHECK(evens().density() == Rational(1, 2));
  CHECK(PeriodicSet::from_residues(4, {1, 2}, {0}).density() ==
        Rational(1, 2));
  CHECK(PeriodicSet::omega().density() == Rational(1));
  CHECK(PeriodicSet::empty_set().density() == Rational(0));
}

TEST_CASE("periodic canonical form") {
  // A redundant modulus reduces to the minimal period.
  CHECK(PeriodicSet::from_residues(4, {0, 2}) == evens());
  // Redundant deltas vanish.
  CHECK(PeriodicSet::from_residues(2, {0}, {4}) == evens());      // added even
  CHECK(PeriodicSet::from_residues(2, {0}, {}, {3}) == evens());  // removed odd
  // Real deltas stay.
  PeriodicSet p = PeriodicSet::from_residues(2, {0}, {3}, {0});
  CHECK(p.member(3));
  CHECK(!p.member(0));
  CHECK(p.member(2));
  CHECK(p.density() == Rational(1, 2));
}

TEST_CASE("periodic boolean algebra is exact") {
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    auto draw = [&] {
      std::uint64_t mod = 1 + rng.below(12);
      std::vector<std::uint64_t> rs;
      for (std::uint64_t r = 0; r < mod; ++r)
        if (rng.coin()) rs.push_back(r);
      std::vector<std::uint64_t> add, rem;
      if (rng.coin()) add.push_back(rng.below(40));
      if (rng.coin()) rem.push_back(rng.below(40));
      return PeriodicSet::from_residues(mod, rs, add, rem);
    };
    PeriodicSet a = draw(), b = draw();
    PeriodicSet u = p_union(a, b), n = p_intersect(a, b);
    for (std::uint64_t k = 0; k < 200; ++k) {
      CHECK(u.member(k) == (a.member(k) || b.member(k)));
      CHECK(n.member(k) == (a.member(k) && b.member(k)));
      CHECK(p_complement(a).member(k) == !a.member(k));
    }
    CHECK(a.density() + b.density() == u.density() + n.density());
    CHECK(brute_count(a, 173) == a.count_below(173));
  }
}

TEST_CASE("residue image of cylinders") {
  // [0] maps to the even numbers.
  CHECK(psi0(ClopenSet::cylinder(PartialAssignment{{0, false}})) == evens());
  CHECK(psi0(ClopenSet::full_space()) == PeriodicSet::omega());
  // Forced by the union law: the image of [01] under the least-significant-
  // bit-first value is the class of 2 mod 4; checked by membership below 64.
  PeriodicSet s01 =
      psi0(ClopenSet::cylinder(PartialAssignment{{0, false}, {1, true}}));
  for (std::uint64_t k = 0; k < 64; ++k) CHECK(s01.member(k) == (k % 4 == 2));
}

TEST_CASE("residue image is an exact homomorphism with matching density") {
  Rng rng(17);
  for (int i = 0; i < 100; ++i) {
    std::vector<PartialAssignment> cyls;
    std::uint32_t count = static_cast<std::uint32_t>(rng.below(4));
    for (std::uint32_t t = 0; t < count; ++t) {
      PartialAssignment phi;
      for (Coord c = 0; c < 6; ++c)
        if (rng.coin()) phi.set(c, rng.coin());
      cyls.push_back(std::move(phi));
    }
    ClopenSet a = ClopenSet::from_cylinders(cyls);
    ClopenSet b = ClopenSet::cylinder(PartialAssignment{
        {static_cast<Coord>(rng.below(6)), rng.coin()}});
    CHECK(psi0(a).density() == a.measure());
    CHECK(psi0(set_union(a, b)) == p_union(psi0(a), psi0(b)));
    CHECK(psi0(set_intersect(a, b)) == p_intersect(psi0(a), psi0(b)));
    CHECK(psi0(set_complement(a)) == p_complement(psi0(a)));
  }
}

TEST_CASE("residue image modulus guard") {
  PartialAssignment far;
  far.set(40, true);
  CHECK_THROWS_AS(psi0(ClopenSet::cylinder(far)), Error);
}

TEST_CASE("transfer report") {
  TransferReport r =
      transfer_check(ClopenSet::cylinder(PartialAssignment{{0, false}}));
  CHECK(r.pass);
  CHECK(r.measure == Rational(1, 2));
  CHECK(r.density == Rational(1, 2));
  TransferReport empty_report = transfer_check(ClopenSet::empty_set());
  CHECK(empty_report.pass);
  CHECK(empty_report.density == Rational(0));
}

TEST_CASE("staged wrap and counting") {
  StagedSet w = StagedSet::wrap(evens());
  StagedCount sc = staged_count(w, 10);
  CHECK(sc.count == 5);
  CHECK(sc.estimate == Rational(1, 2));
  CHECK(sc.error_bound >= Rational(0));

  StagedSet q = StagedSet::wrap(PeriodicSet::from_residues(4, {1}));
  StagedCount sq = staged_count(q, 6);
  CHECK(sq.count == 2);  // {1, 5}
  CHECK(sq.estimate == Rational(1, 3));
}

TEST_CASE("staged union of a constant chain") {
  ChainGenerator constant{[](std::uint32_t) { return evens(); }, Rational(1, 2)};
  StagedSet s = buck_union(constant, 5);
  CHECK(!s.truncated());
  CHECK(s.declared_density() == Rational(1, 2));
  std::uint64_t start = s.stages().front().from;
  for (std::uint64_t k = start; k < start + 100; ++k)
    CHECK(s.member(k) == (k % 2 == 0));
}

TEST_CASE("staged union of the dyadic chain") {
  StagedSet s = buck_union(dyadic_chain(), 6);
  CHECK(s.truncated());
  CHECK(s.declared_density() == Rational(1));
  // Counting density at the last switch point clears 1 - 2^-4.
  std::uint64_t sw5 = s.stages().at(5).from;
  StagedCount sc = staged_count(s, sw5);
  CHECK(sc.estimate > Rational(1) - Rational(1, 16));
  CHECK(sc.truncated);  // flag propagates into the count report
  // The certified bound is sound wherever we test it.
  for (std::uint64_t N : std::vector<std::uint64_t>{1, 7, 64, 1000, sw5 - 1,
                                                    sw5, sw5 + 123}) {
    StagedCount c = staged_count(s, N);
    Rational dev = c.estimate - s.declared_density();
    if (dev.sign() < 0) dev = -dev;
    CHECK(dev <= c.error_bound);
  }
  // Every pulled stage sits inside the union once its window starts.
  for (const auto& stage : s.stages()) {
    for (std::uint64_t k = stage.from; k < stage.from + 300; ++k)
      if (stage.set.member(k)) CHECK(s.member(k));
  }
}

TEST_CASE("staged union rejects a broken chain") {
  ChainGenerator broken{
      [](std::uint32_t k) -> std::optional<PeriodicSet> {
        if (k == 0) return evens();
        return PeriodicSet::from_residues(2, {1});  // not a superset
      },
      Rational(1, 2)};
  CHECK_THROWS_AS(buck_union(broken, 4), Error);
}

TEST_CASE("staged union declared density caps at the scenario truncation") {
  // Images of increasing block truncations form an exactly increasing chain.
  std::vector<PartialAssignment> blocks{
      PartialAssignment{{0, true}},
      PartialAssignment{{1, false}, {2, true}},
      PartialAssignment{{3, true}, {4, false}, {5, true}}};
  Rational sup(0);
  std::vector<ClopenSet> truncs;
  ClopenSet acc = ClopenSet::empty_set();
  for (const auto& phi : blocks) {
    acc = set_union(acc, ClopenSet::cylinder(phi));
    truncs.push_back(acc);
  }
  sup = truncs.back().measure();
  ChainGenerator chain{
      [truncs](std::uint32_t k) -> std::optional<PeriodicSet> {
        if (k >= truncs.size()) return std::nullopt;
        return psi0(truncs[k]);
      },
      sup};
  StagedSet s = buck_union(chain, 10);
  CHECK(!s.truncated());
  CHECK(s.declared_density() == sup);
  // Direct counting over one full period of the last stage.
  const PeriodicSet& last = s.stages().back().set;
  std::uint64_t start = s.stages().back().from;
  std::uint64_t M = last.modulus();
  std::uint64_t count =
      s.count_below(start + 64 * M) - s.count_below(start);
  CHECK(Rational(static_cast<long long>(count)) /
            Rational(static_cast<long long>(64 * M)) ==
        sup);
}
