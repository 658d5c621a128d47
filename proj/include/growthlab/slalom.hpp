#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "growthlab/limits.hpp"
#include "growthlab/rational.hpp"

namespace growthlab {

// Finite-support slalom: level k carries a nonempty subset of {0..2^k-1}
// with fewer than 2^k elements. Level 0 can never be present (a nonempty
// proper subset of a singleton does not exist). Absent levels mean the empty
// set.
class Slalom {
public:
  using Level = std::pair<std::uint32_t, std::vector<std::uint64_t>>;

  Slalom() = default;
  static Slalom from_levels(std::vector<Level> levels);

  const std::vector<Level>& levels() const { return levels_; }
  const std::vector<std::uint64_t>* level(std::uint32_t k) const;
  bool empty() const { return levels_.empty(); }
  // One past the highest present level; 0 when empty.
  std::uint32_t support_end() const {
    return levels_.empty() ? 0 : levels_.back().first + 1;
  }

  Slalom restricted_below(std::uint32_t n) const;  // S|n
  bool subset_of(const Slalom& other) const;

  // Sum of |S(k)| / 2^k over the support.
  Rational weight() const;
  // Tail sum over levels strictly above n.
  Rational tail_weight(std::uint32_t n) const;

  bool operator==(const Slalom&) const = default;
  bool operator<(const Slalom& o) const { return levels_ < o.levels_; }

private:
  std::vector<Level> levels_;  // sorted by level, values sorted
};

// Levelwise union. When some level of the union reaches all 2^k values the
// result is not a slalom; `covered_level` reports the first such level.
struct SlalomUnion {
  std::optional<Slalom> slalom;
  std::optional<std::uint32_t> covered_level;
};
SlalomUnion slalom_union(const Slalom& a, const Slalom& b);

// Allocation-free variant of the coverage test above, for bulk scans.
std::optional<std::uint32_t> slalom_union_covered(const Slalom& a,
                                                  const Slalom& b);

// Point of the enumeration universe: a slalom supported strictly below an
// explicit height.
struct OmegaPoint {
  Slalom S;
  std::uint32_t n = 0;

  bool operator==(const OmegaPoint&) const = default;
};

OmegaPoint make_omega_point(Slalom S, std::uint32_t n);

// All points with height at most H, ordered by height then slalom; guarded
// (the count grows doubly exponentially).
std::vector<OmegaPoint> enum_omega(std::uint32_t H,
                                   const Limits& limits = default_limits());

// Boolean expression over the generators.
class GenExpr {
public:
  enum class Kind { True, False, PosT, Height, And, Or, Not };

  static GenExpr constant(bool value);
  static GenExpr pos(Slalom V);
  static GenExpr height(Slalom S, std::uint32_t n);
  static GenExpr conj(GenExpr a, GenExpr b);
  static GenExpr disj(GenExpr a, GenExpr b);
  static GenExpr neg(GenExpr a);

  Kind kind() const { return kind_; }
  const Slalom& slalom() const { return slalom_; }
  std::uint32_t height_n() const { return n_; }
  const std::vector<GenExpr>& children() const { return children_; }

private:
  Kind kind_ = Kind::False;
  Slalom slalom_;
  std::uint32_t n_ = 0;
  std::vector<GenExpr> children_;
};

// Atom semantics: PosT(V) holds at (T,n) iff V|n is contained in T;
// Height(S,m) holds iff n >= m and T|m equals S.
bool member(const GenExpr& e, const OmegaPoint& p);

// Normal-form conjunct: intersection of negated generators with one merged
// positive generator and one height constraint ((empty,0) when absent).
// `marked_finite` records that the conjunct denotes a finite set already by
// its positive part (covered level, or incompatible height constraints).
struct Conjunct {
  Slalom height_S;
  std::uint32_t height_n = 0;
  std::optional<Slalom> positive;
  std::vector<Slalom> negatives;
  bool marked_finite = false;
};

// Disjunctive normal form, equivalent modulo finite subsets of the
// enumeration universe. Positive atoms merge by levelwise union; height
// atoms merge to the maximum height; negated height atoms are eliminated by
// refining the height constraint (guarded by `raise_height`).
std::vector<Conjunct> normal_form(const GenExpr& e,
                                  const Limits& limits = default_limits());

// Exact infiniteness of the conjunct's denotation. Criterion: with V' equal
// to the height prefix below n and the positive part from n on, the conjunct
// is infinite iff the positive prefix is compatible with the height prefix
// and no negated generator is contained in V'.
bool decide_infinite(const Conjunct& c);

// Infiniteness of a whole expression (some conjunct infinite).
bool decide_infinite(const GenExpr& e, const Limits& limits = default_limits());

struct ExprVerdict {
  bool infinite;
  std::optional<bool> empty;  // exact when the supports are enumerable
};
ExprVerdict expr_verdict(const GenExpr& e,
                         const Limits& limits = default_limits());

// Least n whose tail weight drops below 1 - delta, with the prefix at that
// height.
OmegaPoint w_delta_class(const Slalom& W, const Rational& delta);

struct AwMeasure {
  Rational exact;        // product over levels above n of (1 - |W(k)|/2^k)
  Rational union_bound;  // 1 - tail weight
};
AwMeasure a_w_measure(const Slalom& W, std::uint32_t n);

struct Cl2Witness {
  std::vector<std::uint32_t> I;
  std::vector<std::pair<std::uint32_t, std::uint64_t>> f;  // level -> value
};

// Compatible subfamily of size at least delta*k together with a levelwise
// escape function, certified infinite by decide_infinite.
Cl2Witness cl2_witness(const std::vector<Slalom>& Vs, const Slalom& S,
                       std::uint32_t n, const Rational& delta,
                       const Limits& limits = default_limits());

// f(i) < 2^i with f(i) avoiding the i-th listed slalom's level i (list
// indexed from level 1; level 0 has no room to constrain anything).
std::vector<std::uint64_t> diagonal_escape(const std::vector<Slalom>& Wns,
                                           std::uint32_t H);

}  // namespace growthlab
