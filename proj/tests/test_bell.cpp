#include <doctest.h>

#include "growthlab/bell.hpp"
#include "growthlab/error.hpp"
#include "growthlab/rng.hpp"

using namespace growthlab;

namespace {

PiPrefix random_pi(Rng& rng, std::uint32_t H) {
  std::vector<BellNode> rows;
  for (std::uint32_t n = 0; n <= H; ++n) {
    BellNode row;
    for (std::uint32_t i = 0; i <= n; ++i)
      row.push_back(static_cast<std::uint32_t>(rng.below(i + 2)));
    rows.push_back(std::move(row));
  }
  return make_pi_prefix(std::move(rows));
}

// Uniform-depth expansion measure, as an independent route for small depths.
Rational sweep_measure(const BellClopen& s, std::uint32_t depth) {
  Rational total(0);
  for (const auto& node : bell_nodes_at_depth(depth))
    if (s.contains_node(node)) total += node_measure(node);
  return total;
}

}  // namespace

TEST_CASE("node validation and measures") {
  CHECK(node_measure({}) == Rational(1));
  CHECK(node_measure({0, 1}) == Rational(1, 6));
  CHECK(node_measure({0, 1, 2}) == Rational(1, 24));
  CHECK_THROWS_AS(node_measure({3}), Error);  // s(0) <= 1
  // A depth-3 node splits into 5 children of measure 1/120 each.
  CHECK(bell_children(3) == 5);
  CHECK(Rational(5) * Rational::inv_factorial(5) == node_measure({0, 1, 2}));
}

TEST_CASE("depth masses") {
  for (std::uint32_t d = 0; d <= 6; ++d) {
    Rational total(0);
    for (const auto& node : bell_nodes_at_depth(d))
      total += node_measure(node);
    CHECK(total == Rational(1));
  }
}

TEST_CASE("reduced antichain form") {
  // Nested nodes prune.
  CHECK(BellClopen::from_nodes({{0}, {0, 0}}) ==
        BellClopen::from_nodes({{0}}));
  // Complete sibling families merge upward.
  CHECK(BellClopen::from_nodes({{0}, {1}}).is_whole());
  CHECK(BellClopen::from_nodes({{0, 0}, {0, 1}, {0, 2}}) ==
        BellClopen::from_nodes({{0}}));
  // Mixed-depth equality via the normal form.
  CHECK(b_union(BellClopen::from_nodes({{0, 0}}),
                BellClopen::from_nodes({{0, 1}, {0, 2}})) ==
        BellClopen::from_nodes({{0}}));
}

TEST_CASE("antichain measure agrees with uniform-depth expansion") {
  Rng rng(41);
  for (int i = 0; i < 50; ++i) {
    std::vector<BellNode> nodes;
    std::uint32_t count = 1 + static_cast<std::uint32_t>(rng.below(6));
    for (std::uint32_t t = 0; t < count; ++t) {
      BellNode node;
      std::uint32_t len = 1 + static_cast<std::uint32_t>(rng.below(4));
      for (std::uint32_t j = 0; j < len; ++j)
        node.push_back(static_cast<std::uint32_t>(rng.below(j + 2)));
      nodes.push_back(std::move(node));
    }
    BellClopen s = BellClopen::from_nodes(nodes);
    CHECK(s.measure() == sweep_measure(s, 5));
  }
}

TEST_CASE("row unions") {
  PiPrefix p1 = make_pi_prefix({{0}});
  CHECK(v_trunc(p1).measure() == Rational(1, 2));
  PiPrefix p2 = make_pi_prefix({{0}, {0, 0}});
  CHECK(v_trunc(p2).measure() == Rational(1, 2));  // nested row absorbed
  PiPrefix p3 = make_pi_prefix({{0}, {1, 0}});
  CHECK(v_trunc(p3).measure() == Rational(2, 3));
  CHECK_THROWS_AS(make_pi_prefix({{0, 0}}), Error);  // row 0 length 1

  // Measure stays below the row-count bound.
  Rng rng(43);
  for (int i = 0; i < 40; ++i) {
    std::uint32_t H = static_cast<std::uint32_t>(rng.below(5));
    PiPrefix pi = random_pi(rng, H);
    Rational bound(0);
    for (std::uint32_t n = 0; n <= H; ++n)
      bound += Rational::inv_factorial(n + 2);
    CHECK(v_trunc(pi).measure() <= bound);
  }
}

TEST_CASE("factorial tail majorant") {
  Rational tb = v_tail_bound(0, 1);
  CHECK(tb == Rational(2, 9));
  Rational partial(0);
  for (int l = 1; l <= 30; ++l) partial += Rational::inv_factorial(l + 2);
  CHECK(tb >= partial);
  CHECK(v_tail_bound(0, 3) == Rational(3) * tb);
  // Far tails collapse fast.
  CHECK(v_tail_bound(20, 1) < Rational(1, 1000000000000000000ll));
}

TEST_CASE("certified factorial comparison") {
  CHECK(taylor_check(1, 4).holds);
  CHECK(taylor_check(5, 16).holds);
  CHECK(!taylor_check(10, 2).holds);
  for (std::uint32_t m = 1; m <= 5; ++m)
    for (std::uint32_t n = 3 * m + 1; n <= 40; ++n)
      CHECK(taylor_check(m, n).holds);
}

TEST_CASE("product-side emptiness decisions") {
  NonemptyVerdict free = decide_nonempty_V({}, {}, {});
  CHECK(!free.empty);
  PiPrefix pi = make_pi_prefix({{0}, {1, 0}});
  CHECK(decide_nonempty_V({}, {pi}, {pi}).empty);
  PiPrefix deep = make_pi_prefix({{0}, {1, 0}, {0, 2, 1}});
  NonemptyVerdict nv = decide_nonempty_V({}, {}, {deep});
  CHECK(!nv.empty);
  REQUIRE(nv.witness.has_value());
  // The witness cell really avoids the truncation.
  CHECK(!v_trunc(deep).meets_node(*nv.witness));
}

TEST_CASE("tree-side finiteness decisions") {
  InfiniteVerdict all = decide_infinite_C({}, {}, {});
  CHECK(!all.finite);
  PiPrefix pi = make_pi_prefix({{0}, {1, 0}});
  InfiniteVerdict pos = decide_infinite_C({}, {pi}, {});
  CHECK(!pos.finite);
  REQUIRE(pos.witness.has_value());
  // Covering every child of the root leaves nothing.
  PiPrefix c0 = make_pi_prefix({{0}});
  PiPrefix c1 = make_pi_prefix({{1}});
  InfiniteVerdict covered = decide_infinite_C({}, {}, {c0, c1});
  CHECK(covered.finite);
}

TEST_CASE("the two sides agree") {
  Rng rng(47);
  for (int i = 0; i < 150; ++i) {
    std::vector<PiPrefix> pos, neg;
    std::uint32_t np = static_cast<std::uint32_t>(rng.below(3));
    std::uint32_t nn = static_cast<std::uint32_t>(rng.below(3));
    for (std::uint32_t t = 0; t < np; ++t)
      pos.push_back(random_pi(rng, static_cast<std::uint32_t>(rng.below(4))));
    for (std::uint32_t t = 0; t < nn; ++t)
      neg.push_back(random_pi(rng, static_cast<std::uint32_t>(rng.below(4))));
    IsoReport r = iso_condition_check(pos, neg);
    CHECK(r.consistent);
  }
}

TEST_CASE("strict positivity certificate") {
  PiPrefix sparse = make_pi_prefix({{1}, {1, 2}, {1, 2, 3}, {1, 2, 3, 4},
                                    {1, 2, 3, 4, 5}, {1, 2, 3, 4, 5, 6},
                                    {1, 2, 3, 4, 5, 6, 0}});
  PositivityReport r = strict_positivity_check({}, {sparse}, 4);
  CHECK(r.pass);
  CHECK(r.gap.sign() > 0);
  CHECK(r.residual_floor_holds);
  CHECK(r.ladder_holds);
  CHECK(r.s_measure == Rational(1));
  CHECK(r.gap == r.s_measure - r.covered - r.tail);

  // Hypothesis failure: the prefixes swallow the whole space already at
  // depth 1 (rows (0) and (1) cover both children of the root).
  std::vector<BellNode> rows0, rows1;
  for (std::uint32_t n = 0; n <= 7; ++n) {
    BellNode r0(n + 1, 0);
    BellNode r1(n + 1, 0);
    r1[0] = 1;
    rows0.push_back(std::move(r0));
    rows1.push_back(std::move(r1));
  }
  PiPrefix c0 = make_pi_prefix(std::move(rows0));
  PiPrefix c1 = make_pi_prefix(std::move(rows1));
  CHECK_THROWS_AS(strict_positivity_check({}, {c0, c1}, 7), Error);

  // Precondition violations.
  CHECK_THROWS_AS(strict_positivity_check({}, {sparse}, 3), Error);
  CHECK_THROWS_AS(strict_positivity_check({}, {sparse}, 7), Error);
}

TEST_CASE("node budget guard") {
  Limits tiny;
  tiny.node_budget = 3;
  PiPrefix pi = make_pi_prefix({{0}, {1, 0}, {0, 2, 1}, {0, 1, 2, 3}});
  CHECK_THROWS_AS(decide_nonempty_V({}, {pi}, {}, tiny), Error);
  CHECK_THROWS_AS(bell_nodes_at_depth(12, tiny), Error);
}

TEST_CASE("measure threshold fragmentation") {
  PiPrefix p1 = make_pi_prefix({{0}});
  LinkedReport r = measure_threshold_report({v_trunc(p1)}, 3);
  CHECK(!r.all_pass);  // 1/2 fails the 2/3 threshold
  BellClopen big = BellClopen::from_nodes({{0}, {1, 0}, {1, 1}});
  LinkedReport r2 = measure_threshold_report({big}, 2);
  CHECK(r2.all_pass);  // 1/2 + 2/6 = 5/6 > 1/2
}
