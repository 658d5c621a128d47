#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "growthlab/limits.hpp"
#include "growthlab/report.hpp"

namespace growthlab {

// Named verification suites: transfer, positive, ll, kappa, cl2, bell-iso,
// bell-positivity, diagonal. Deterministic for a fixed seed.
const std::vector<std::string>& suite_names();

Report run_suite(const std::string& name, std::uint64_t seed = 0,
                 const Limits& limits = default_limits());

}  // namespace growthlab
