#pragma once

#include <cstdint>
#include <initializer_list>
#include <utility>
#include <vector>

#include "growthlab/limits.hpp"
#include "growthlab/rational.hpp"

namespace growthlab {

using Coord = std::uint32_t;

// Finite partial map coordinate -> bit. Coordinates are arbitrary naturals,
// kept sorted; no duplicates.
class PartialAssignment {
public:
  PartialAssignment() = default;
  PartialAssignment(std::initializer_list<std::pair<Coord, bool>> entries);

  // Errors on a conflicting rebind of the same coordinate.
  void set(Coord coord, bool bit);
  bool defines(Coord coord) const;
  bool at(Coord coord) const;

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<std::pair<Coord, bool>>& entries() const {
    return entries_;
  }
  std::vector<Coord> domain() const;

  // True when the two assignments disagree on some shared coordinate.
  bool conflicts(const PartialAssignment& other) const;
  // Union of compatible assignments.
  PartialAssignment merged(const PartialAssignment& other) const;

  bool operator==(const PartialAssignment&) const = default;
  bool operator<(const PartialAssignment& other) const {
    return entries_ < other.entries_;
  }

private:
  std::vector<std::pair<Coord, bool>> entries_;  // sorted by coordinate
};

// Clopen subset of the Cantor space in canonical form: a reduced ordered
// binary decision tree over the sorted coordinate support. Reduction makes
// the representation a unique normal form, so equality is structural. The
// disjoint-cylinder view is materialized on demand (it can be exponentially
// larger than the tree).
class ClopenSet {
public:
  ClopenSet() = default;  // empty set

  static ClopenSet empty_set() { return ClopenSet(); }
  static ClopenSet full_space();
  static ClopenSet cylinder(const PartialAssignment& phi);
  static ClopenSet from_cylinders(const std::vector<PartialAssignment>& phis);

  bool is_empty() const { return root_ == 0; }
  bool is_full() const { return root_ == 1; }

  // Exact dyadic Lebesgue measure in [0,1].
  Rational measure() const;

  // Coordinates the canonical tree branches on; equals the minimal semantic
  // support because the tree is reduced.
  std::vector<Coord> syntactic_support() const;
  std::vector<Coord> support(const Limits& limits = default_limits()) const;

  // Canonical pairwise-disjoint cylinder list (paths of the reduced tree).
  std::vector<PartialAssignment> cylinders(
      const Limits& limits = default_limits()) const;

  // Point evaluation; `point` must define every support coordinate.
  bool contains_point(const PartialAssignment& point) const;

  // Point evaluation for supports below 64: coordinate i reads bit i of
  // `bits` (least significant bit first).
  bool contains_word(std::uint64_t bits) const;

  bool subset_of(const ClopenSet& other) const;

  // Deterministic witness: the first 1-path of the canonical tree, as a
  // partial assignment on its decision coordinates. Errors on the empty set.
  PartialAssignment any_point() const;

  bool operator==(const ClopenSet&) const = default;

  friend ClopenSet set_union(const ClopenSet& a, const ClopenSet& b);
  friend ClopenSet set_intersect(const ClopenSet& a, const ClopenSet& b);
  friend ClopenSet set_difference(const ClopenSet& a, const ClopenSet& b);
  friend ClopenSet set_complement(const ClopenSet& a);

private:
  friend class ClopenBuilder;

  struct Node {
    Coord var;
    std::uint32_t lo;
    std::uint32_t hi;
    bool operator==(const Node&) const = default;
  };

  // Index 0 / 1 are the implicit false / true terminals; stored nodes start
  // at index 2, numbered in first-visit DFS order from the root.
  std::vector<Node> nodes_;
  std::uint32_t root_ = 0;
};

// Returns lambda(a ∩ b) after checking the supports are disjoint and the
// product rule lambda(a ∩ b) = lambda(a)·lambda(b) holds exactly.
Rational product_measure_check(const ClopenSet& a, const ClopenSet& b,
                               const Limits& limits = default_limits());

}  // namespace growthlab
