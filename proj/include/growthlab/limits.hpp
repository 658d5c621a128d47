#pragma once

#include <cstdint>

namespace growthlab {

// Search guards. The defaults keep every operation at desk scale; the CLI
// --budget flag and the GROWTHLAB_BUDGET environment variable scale the two
// enumeration budgets.
struct Limits {
  std::uint32_t support_bound = 24;        // semantic-support minimization
  std::uint32_t max_psi0_coord = 21;       // residue image modulus <= 2^22
  std::uint64_t subset_evals = 1u << 20;   // kappa subset searches
  std::uint64_t node_budget = 10'000'000;  // tree sweeps / witness searches
  std::uint32_t omega_height = 4;          // exhaustive slalom enumeration
  std::uint32_t raise_height = 5;          // normal-form height refinement
  std::uint64_t cylinder_budget = 1u << 20;  // clopen cylinder materialization
  std::uint32_t block_bound = 8;           // highest buildable block index
};

namespace detail {
inline Limits& limits_slot() {
  static Limits limits;
  return limits;
}
}  // namespace detail

inline const Limits& default_limits() { return detail::limits_slot(); }

// Process-wide override, set once at startup (CLI / C API) before any
// concurrent use.
inline void set_default_limits(const Limits& limits) {
  detail::limits_slot() = limits;
}

// Applies a raw budget figure to the enumeration guards.
inline Limits limits_with_budget(std::uint64_t budget) {
  Limits l = default_limits();
  if (budget > 0) {
    l.subset_evals = budget;
    l.node_budget = budget;
    l.cylinder_budget = budget;
  }
  return l;
}

}  // namespace growthlab
