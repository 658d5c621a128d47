#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "growthlab/limits.hpp"
#include "growthlab/rational.hpp"

namespace growthlab {

// Finite family of nonempty sets over an explicit atom universe.
struct FiniteFamily {
  std::vector<std::string> atoms;
  std::vector<std::vector<std::uint32_t>> sets;  // sorted atom indices

  static FiniteFamily make(std::vector<std::string> atoms,
                           std::vector<std::vector<std::uint32_t>> sets);
};

// max{ sum of multiplicities over an intersecting subfamily } / length,
// by exhaustive subset search over the distinct sets.
Rational kappa_of_multiset(const FiniteFamily& fam,
                           const std::vector<std::uint64_t>& multiplicities,
                           const Limits& limits = default_limits());

Rational kappa_of_seq(const FiniteFamily& fam,
                      const std::vector<std::uint32_t>& seq,
                      const Limits& limits = default_limits());

// Anytime upper bounds: entry l-1 is the best (smallest) kappa over all
// multisets of size at most l. Non-increasing, converges to the intersection
// number from above.
std::vector<Rational> kappa_upper_bounds(const FiniteFamily& fam,
                                         std::uint32_t L,
                                         const Limits& limits =
                                             default_limits());

struct KappaCertificate {
  Rational value;
  // Probability weights on atoms with min over sets of the set mass equal to
  // value: no finite sequence can do better.
  std::vector<Rational> atom_weights;
  // Multiset of set indices with kappa exactly equal to value: no weighting
  // can do better.
  std::vector<std::uint64_t> seq_multiplicities;
};

// Exact rational linear program max t s.t. mu >= 0, sum mu = 1,
// mu(A_i) >= t, solved by simplex with Bland's rule; the dual run yields the
// optimal sequence witness. Both witnesses are verified exactly before the
// certificate is returned.
KappaCertificate kappa_lp(const FiniteFamily& fam,
                          const Limits& limits = default_limits());

struct FragmentationRow {
  Rational value;
  bool pass;
};

struct FragmentationReport {
  std::vector<FragmentationRow> rows;
  bool all_pass;
};

// kappa_lp per family against the threshold delta.
FragmentationReport fragmentation_report(const std::vector<FiniteFamily>& fams,
                                         const Rational& delta,
                                         const Limits& limits =
                                             default_limits());

}  // namespace growthlab
