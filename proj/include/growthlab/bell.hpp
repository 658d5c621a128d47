#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "growthlab/limits.hpp"
#include "growthlab/rational.hpp"

namespace growthlab {

// Node of the branching tree: a finite sequence with s(i) <= i+1.
using BellNode = std::vector<std::uint32_t>;

void validate_bell_node(const BellNode& s);

// 1 / (|s|+1)! under the product measure that splits mass evenly among the
// i+2 children at depth i.
Rational node_measure(const BellNode& s);

// Number of children of a depth-d node (d+2) and total nodes at depth d
// ((d+1)!), plus a guarded enumeration.
std::uint64_t bell_children(std::uint32_t depth);
Rational bell_depth_count(std::uint32_t depth);  // (depth+1)! as an integer
std::vector<BellNode> bell_nodes_at_depth(std::uint32_t depth,
                                          const Limits& limits =
                                              default_limits());

// Finite union of basic sets [t] in canonical reduced form: a minimal
// antichain where no listed node extends another and no complete family of
// siblings is listed in place of its parent. The reduced form is a unique
// normal form (it materializes no uniform-depth expansion, which would grow
// factorially with the depth).
class BellClopen {
public:
  BellClopen() = default;  // empty set

  static BellClopen empty_set() { return BellClopen(); }
  static BellClopen whole_space();
  static BellClopen from_nodes(std::vector<BellNode> nodes);

  const std::vector<BellNode>& nodes() const { return nodes_; }
  bool is_empty() const { return nodes_.empty(); }
  bool is_whole() const {
    return nodes_.size() == 1 && nodes_.front().empty();
  }

  Rational measure() const;

  // [t] subset of this set (t extends a listed node).
  bool contains_node(const BellNode& t) const;
  // [t] meets this set (t extends a listed node or a listed node extends t).
  bool meets_node(const BellNode& t) const;

  bool operator==(const BellClopen&) const = default;

  friend BellClopen b_union(const BellClopen& a, const BellClopen& b);
  // Intersection with the basic set [s].
  BellClopen relativize(const BellNode& s) const;

private:
  std::vector<BellNode> nodes_;  // sorted by (length, lex)
};

// Rows pi(0), ..., pi(H) with |pi(n)| = n+1.
struct PiPrefix {
  std::vector<BellNode> rows;

  std::uint32_t height() const {
    return static_cast<std::uint32_t>(rows.size()) - 1;
  }
};

PiPrefix make_pi_prefix(std::vector<BellNode> rows);

// Union of the basic sets of the rows, canonical.
BellClopen v_trunc(const PiPrefix& pi);

// Certified upper bound m * sum_{l > H} 1/(l+2)! via the geometric majorant
// sum_{l>H} 1/(l+2)! <= (1/(H+3)!) * (H+4)/(H+3).
Rational v_tail_bound(std::uint32_t H, std::uint32_t m);

struct TaylorVerdict {
  bool holds;
  Rational lhs_upper;  // certified upper estimate of m * sum_{l>=n} 1/(l+1)!
  Rational rhs;        // 1/n!
};

// Certified comparison m * sum_{l>=n} 1/(l+1)! < 1/n!, exact partial sums
// plus the geometric tail majorant; guaranteed to hold whenever n > 3m.
TaylorVerdict taylor_check(std::uint32_t m, std::uint32_t n);

struct NonemptyVerdict {
  bool empty;
  std::optional<BellNode> witness;  // a deep node whose basic set fits inside
};

// Emptiness of [s] ∩ ⋂ v_trunc(pos) ∩ ⋂ v_trunc(neg)^c, decided exactly by
// constraint-propagating search down to one level past the deepest row.
NonemptyVerdict decide_nonempty_V(const BellNode& s,
                                  const std::vector<PiPrefix>& pos,
                                  const std::vector<PiPrefix>& neg,
                                  const Limits& limits = default_limits());

struct InfiniteVerdict {
  bool finite;
  std::optional<BellNode> witness;  // start of a branch staying inside
};

// Finiteness of the tree-side set {t : t extends s, extends a row of every
// positive prefix, extends no row of any negative prefix}, decided on the
// row combinatorics directly.
InfiniteVerdict decide_infinite_C(const BellNode& s,
                                  const std::vector<PiPrefix>& pos,
                                  const std::vector<PiPrefix>& neg,
                                  const Limits& limits = default_limits());

struct IsoReport {
  bool c_finite;
  bool v_empty;
  bool consistent;  // c_finite == v_empty
  std::optional<BellNode> c_witness;
  std::optional<BellNode> v_witness;
};

// The two deciders must agree: the tree-side set is finite exactly when the
// product-side set is empty.
IsoReport iso_condition_check(const std::vector<PiPrefix>& pos,
                              const std::vector<PiPrefix>& neg,
                              const Limits& limits = default_limits());

struct PositivityReport {
  bool pass;
  Rational s_measure;         // lambda([s])
  Rational covered;           // lambda([s] ∩ union of v_trunc)
  Rational tail;              // v_tail_bound at the common height
  Rational gap;               // s_measure - covered - tail, strictly positive
  Rational residual_at_n;     // lambda([s] ∩ A_n^c)
  bool residual_floor_holds;            // residual_at_n >= 1/(n+1)! when nonempty
  bool ladder_holds;          // lambda(A_{l+1} \ A_l) <= m/(l+2)! for all l
};

// Strict positivity of the truncated residual [s] ∩ ⋂ v_trunc(pi_j)^c:
// requires n > max(|s|, 3m) and rows up to n on every prefix. Errors with
// HypothesisFailed when the truncated residual is empty.
PositivityReport strict_positivity_check(const BellNode& s,
                                         const std::vector<PiPrefix>& pis,
                                         std::uint32_t n,
                                         const Limits& limits =
                                             default_limits());

struct LinkedReport {
  std::vector<Rational> measures;
  bool all_pass;  // every measure exceeds 1 - 1/n
};

// Measure-threshold fragmentation: sets of measure above 1 - 1/n are
// n-linked (any n of them intersect).
LinkedReport measure_threshold_report(const std::vector<BellClopen>& sets,
                                      std::uint32_t n);

}  // namespace growthlab
