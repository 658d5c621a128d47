#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "growthlab/cantor.hpp"
#include "growthlab/limits.hpp"
#include "growthlab/rational.hpp"

namespace growthlab {

// Finite prefix of a point of the Cantor space.
struct PointPrefix {
  std::string bits;  // '0'/'1' characters, length >= 1

  bool bit(Coord i) const { return bits.at(i) == '1'; }
  std::size_t length() const { return bits.size(); }
};

// Finite prefix of one member of the almost disjoint family.
struct ADPrefix {
  std::vector<Coord> elems;  // strictly increasing
  std::string label;
};

// A desk-scale fragment of the input data: per label, finitely many point
// prefixes and a family prefix, plus the bound below which members of the
// family may share elements. Construction validates the certificate on the
// available prefixes; anything an operation cannot read fails with
// InsufficientPrefix rather than being invented.
class Scenario {
public:
  Scenario(std::map<std::string, std::vector<PointPrefix>> points,
           std::map<std::string, ADPrefix> family, Coord ad_bound);

  const std::vector<PointPrefix>& points_of(const std::string& alpha) const;
  const ADPrefix& family_of(const std::string& alpha) const;
  Coord ad_bound() const { return ad_bound_; }
  std::vector<std::string> labels() const;

  // Largest block index i within the desk-scale bound such that blocks 0..i
  // are fully determined by the prefixes (family elements and point bits),
  // or nothing.
  std::optional<std::uint32_t> max_block(
      const std::string& alpha, const Limits& limits = default_limits()) const;

private:
  std::map<std::string, std::vector<PointPrefix>> points_;
  std::map<std::string, ADPrefix> family_;
  Coord ad_bound_;
};

// Blocks of one label: block i restricts point i to the i-th triangular
// slice of the family prefix, so |dom(phi_i)| = i + 1.
struct BlockFamily {
  std::string alpha;
  std::vector<PartialAssignment> blocks;
  std::vector<std::vector<Coord>> supports;  // dom(phi_i)
};

// Blocks carry measure 2^-(i+1), so the index cap keeps every truncation at
// desk scale; the tail beyond it is bounded by the geometric sum.
BlockFamily build_blocks(const Scenario& s, const std::string& alpha,
                         std::uint32_t upto,
                         const Limits& limits = default_limits());

// Union of the first n+1 blocks, canonical.
ClopenSet u_trunc(const Scenario& s, const std::string& alpha,
                  std::uint32_t n);

struct ContainsReport {
  bool pass;
  std::uint32_t block;
  std::optional<Coord> offending;  // first coordinate of disagreement
};

// Verifies block n agrees with point n on its domain (true by construction
// for blocks built from the scenario; the overload taking an explicit family
// exists for fault injection).
ContainsReport contains_check(const Scenario& s, const std::string& alpha,
                              std::uint32_t n);
ContainsReport contains_check(const Scenario& s, const std::string& alpha,
                              std::uint32_t n, const BlockFamily& blocks);

// Least N such that {I_N} together with the later block supports is pairwise
// disjoint, where I_N collects dom(tau) and the supports of blocks up to N.
// Disjointness of blocks beyond the available prefixes is certified from the
// ad-bound and the monotone enumeration of each family prefix.
std::uint32_t find_N(const Scenario& s, const std::vector<std::string>& alphas,
                     const PartialAssignment& tau);

struct PositiveBound {
  std::uint32_t N;
  Rational core_measure;  // lambda(X_N)
  Rational bound;         // lambda(X_N) * (1 - 2^-(N+1))^m
};

// Lower bound for the measure of [tau] minus all blocks of the named labels:
// for every n >= N within the prefix data the exact residual measure is at
// least `bound`, which is strictly positive.
PositiveBound positive_lower_bound(const Scenario& s,
                                   const std::vector<std::string>& alphas,
                                   const PartialAssignment& tau);

struct EmptinessResult {
  enum class Verdict { Empty, Nonempty, Unknown } verdict;
  std::optional<PartialAssignment> witness;  // cylinder inside the set
};

// Decides whether C ∩ ⋂ U_beta ∩ ⋂ (U_alpha)^c is empty for the truncated
// objects by the inductive reduction: a positively occurring U is stripped
// once some block inside its truncation has support disjoint from the rest
// of the expression; the base case is an exact covering check. Unknown when
// the prefixes cannot certify a reduction within `depth` steps.
EmptinessResult emptiness_decide(const ClopenSet& C,
                                 const std::vector<std::string>& betas,
                                 const std::vector<std::string>& alphas,
                                 const Scenario& s, std::uint32_t depth);

}  // namespace growthlab
