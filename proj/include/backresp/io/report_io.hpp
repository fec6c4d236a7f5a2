#pragma once

#include <optional>
#include <string>

#include "backresp/refine/refinement.hpp"
#include "backresp/resp/shapley.hpp"

namespace backresp {

// Plain-text table sorted by value (descending), then by the player's smallest state id.
// Absent values print as "-"; notes follow the table.
std::string format_table(const ResponsibilityReport& report);

// Records document described in docs/report.md. Entries keep player order.
std::string format_records(const ResponsibilityReport& report, const RefinementResult* refinement = nullptr,
                           const PlayerSet* atoms = nullptr, const TransitionSystem* ts = nullptr);

// Graphviz view of the system: run edges in bold, values on the nodes of their players,
// positive players filled.
std::string format_dot(const GameContext& ctx, const ResponsibilityReport& report);

}  // namespace backresp
