#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "growthlab/cantor.hpp"
#include "growthlab/limits.hpp"
#include "growthlab/rational.hpp"

namespace growthlab {

// Eventually periodic subset of the naturals: a union of residue classes
// modulo M, adjusted by finitely many added/removed points. Canonical form
// reduces the modulus to the minimal period and normalizes the deltas, so
// equality is structural and exact (not mod finite).
class PeriodicSet {
public:
  PeriodicSet();  // empty set

  static PeriodicSet from_residues(std::uint64_t modulus,
                                   std::vector<std::uint64_t> residues,
                                   std::vector<std::uint64_t> added = {},
                                   std::vector<std::uint64_t> removed = {});
  static PeriodicSet omega();
  static PeriodicSet empty_set() { return PeriodicSet(); }

  std::uint64_t modulus() const { return modulus_; }
  std::vector<std::uint64_t> residues() const;
  const std::vector<std::uint64_t>& added() const { return added_; }
  const std::vector<std::uint64_t>& removed() const { return removed_; }

  bool member(std::uint64_t k) const;
  std::uint64_t residue_count() const;
  Rational density() const;

  // |S ∩ [0, N)| in O(M/64 + log deltas).
  std::uint64_t count_below(std::uint64_t N) const;

  // modulus + number of delta points; certified bound on
  // |count_below(N) - density()*N| for every N.
  std::uint64_t deviation_bound() const {
    return modulus_ + added_.size() + removed_.size();
  }

  bool operator==(const PeriodicSet&) const = default;

  friend PeriodicSet p_union(const PeriodicSet& a, const PeriodicSet& b,
                             const Limits& limits);
  friend PeriodicSet p_intersect(const PeriodicSet& a, const PeriodicSet& b,
                                 const Limits& limits);
  friend PeriodicSet p_complement(const PeriodicSet& a);

private:
  void canonicalize();
  bool periodic_bit(std::uint64_t k) const;

  std::uint64_t modulus_ = 1;
  std::vector<std::uint64_t> words_;    // residue bitset, modulus_ bits
  std::vector<std::uint64_t> added_;    // sorted, outside the residue part
  std::vector<std::uint64_t> removed_;  // sorted, inside the residue part
};

PeriodicSet p_union(const PeriodicSet& a, const PeriodicSet& b,
                    const Limits& limits = default_limits());
PeriodicSet p_intersect(const PeriodicSet& a, const PeriodicSet& b,
                        const Limits& limits = default_limits());
PeriodicSet p_complement(const PeriodicSet& a);

// Residue-class image of a clopen set: a full prefix sigma of length n maps
// to {k : k = sigma-value mod 2^n} with the value read least significant bit
// first, the unique convention under which the image of [sigma] equals the
// image of [sigma0] union [sigma1] exactly. Partial assignments are refined
// to full prefixes over [0, max coordinate]. Boolean homomorphism into the
// residue-class algebra, exact on canonical representatives, and
// density(psi0(a)) = measure(a).
PeriodicSet psi0(const ClopenSet& a, const Limits& limits = default_limits());

struct TransferLaw {
  std::string name;
  bool holds;
  std::string lhs;
  std::string rhs;
};

struct TransferReport {
  bool pass;
  Rational measure;
  Rational density;
  std::vector<TransferLaw> laws;
};

// Checks density(psi0(a)) = measure(a) and the homomorphism laws on a's
// canonical cylinder decomposition.
TransferReport transfer_check(const ClopenSet& a,
                              const Limits& limits = default_limits());

// Staged union of an increasing chain of periodic sets: stage k owns the
// window [switch_k, switch_{k+1}), the last stage extends to infinity.
class StagedSet {
public:
  struct Stage {
    PeriodicSet set;
    std::uint64_t from;
  };

  static StagedSet wrap(const PeriodicSet& p);
  static StagedSet from_stages(std::vector<Stage> stages, Rational density,
                               bool truncated);

  const std::vector<Stage>& stages() const { return stages_; }
  const Rational& declared_density() const { return density_; }
  bool truncated() const { return truncated_; }

  bool member(std::uint64_t k) const;
  std::uint64_t count_below(std::uint64_t N) const;

private:
  std::vector<Stage> stages_;
  Rational density_;
  bool truncated_ = false;
};

// Pull-based producer of an exactly increasing chain with a declared density
// supremum. Single consumer; `pull(k)` returns the k-th stage or nothing when
// the chain is exhausted.
struct ChainGenerator {
  std::function<std::optional<PeriodicSet>(std::uint32_t)> pull;
  Rational declared_sup;
};

// Realizes the staged union: switch points are chosen so that for every
// N >= switch_k the counting density of the result is within
// 2^-k + (sup - d(A_{k-1})) of the declared supremum (certified; see the
// schedule in the implementation). Monotonicity of the chain is verified per
// pulled pair. Exhausting the stage budget yields a result flagged truncated.
StagedSet buck_union(const ChainGenerator& chain, std::uint32_t stage_budget,
                     const Limits& limits = default_limits());

struct StagedCount {
  std::uint64_t count;
  Rational estimate;
  Rational error_bound;
  bool truncated;
};

// Exact |A ∩ [0,N)| with a certified bound on |count/N - declared density|,
// computed from the switch points and stage densities alone.
StagedCount staged_count(const StagedSet& s, std::uint64_t N);

}  // namespace growthlab
