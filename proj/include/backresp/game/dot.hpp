#pragma once

#include <optional>
#include <string>
#include <vector>

#include "backresp/game/arena.hpp"
#include "backresp/rational.hpp"

namespace backresp {

struct DotOptions {
    const RunPosition* run = nullptr;                  // run edges drawn bold red
    const Objective* objective = nullptr;              // target states get a double border
    const std::vector<std::optional<Rational>>* values = nullptr;  // per state, appended to labels
    std::optional<StateSet> highlight;                 // filled nodes
    std::string graph_name = "arena";
};

// Graphviz rendering; the attribute conventions are documented in docs/dot.md.
std::string to_dot(const GameArena& arena, const DotOptions& options = {});

}  // namespace backresp
