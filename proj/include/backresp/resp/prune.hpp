#pragma once

#include <utility>
#include <vector>

#include "backresp/resp/payoff.hpp"

namespace backresp {

enum class PruneReason { single_successor, off_run, wins_alone, cannot_win };

std::string_view to_string(PruneReason r);

struct PruneResult {
    PlayerSet kept;
    std::vector<std::pair<StateId, PruneReason>> removed;
};

// Drops states that provably never appear in a switching pair.
PruneResult prune_dummies(const GameContext& ctx, const PlayerSet& candidates);

}  // namespace backresp
