#pragma once

#include <string>

#include <json.hpp>

#include "ccs/equilibrium.hpp"
#include "ccs/mechanisms.hpp"
#include "ccs/optimizers.hpp"
#include "ccs/types.hpp"

namespace ccs {

// Instance document: {n, quality: {kind: "graph"|"scaling", ...}, cost:
// {kind: "linear"|"power", ...}, label}. Matrices are row-major arrays.
// Doubles survive the round trip exactly (shortest-round-trip printing).
nlohmann::json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);

// load validates; parse errors name the byte offset, dimension and
// invariant violations name the field.
Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

// {kind: "pra"|"wta"|"tullock", p?: array}
nlohmann::json mechanism_to_json(const MechanismSpec& mech);
MechanismSpec mechanism_from_json(const nlohmann::json& j);

// Timing fields are opt-in so fixed-seed outputs stay byte-identical.
nlohmann::json solve_outcome_to_json(const SolveOutcome& out, bool with_timings = false);
nlohmann::json equilibrium_result_to_json(const EquilibriumResult& res);

}  // namespace ccs
