#pragma once

#include <json.hpp>

#include "growthlab/ad.hpp"
#include "growthlab/bell.hpp"
#include "growthlab/cantor.hpp"
#include "growthlab/density.hpp"
#include "growthlab/kelley.hpp"
#include "growthlab/slalom.hpp"

// Wire formats. Keys are emitted in a fixed order (ordered_json) so that
// reports serialize byte-identically run to run.

namespace growthlab {

using Json = nlohmann::ordered_json;

Json rational_to_json(const Rational& r);
Rational rational_from_json(const Json& j, const std::string& path);

Json assignment_to_json(const PartialAssignment& a);
PartialAssignment assignment_from_json(const Json& j, const std::string& path);

Json clopen_to_json(const ClopenSet& s,
                    const Limits& limits = default_limits());
ClopenSet clopen_from_json(const Json& j, const std::string& path);

Json periodic_to_json(const PeriodicSet& p);
PeriodicSet periodic_from_json(const Json& j, const std::string& path);

Json staged_to_json(const StagedSet& s);
StagedSet staged_from_json(const Json& j, const std::string& path);

Json scenario_to_json(const Scenario& s);
Scenario ad_scenario_from_json(const Json& j, const std::string& path);

Json slalom_to_json(const Slalom& s);
Slalom slalom_from_json(const Json& j, const std::string& path);

Json genexpr_to_json(const GenExpr& e);
GenExpr genexpr_from_json(const Json& j, const std::string& path);

Json family_to_json(const FiniteFamily& f);
FiniteFamily family_from_json(const Json& j, const std::string& path);

Json bell_node_to_json(const BellNode& n);
BellNode bell_node_from_json(const Json& j, const std::string& path);

Json pi_prefix_to_json(const PiPrefix& p);
PiPrefix pi_prefix_from_json(const Json& j, const std::string& path);

}  // namespace growthlab
