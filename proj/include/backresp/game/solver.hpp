#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "backresp/game/arena.hpp"

namespace backresp {

// Winning region of Sat with a positional strategy.
// The strategy is defined on Sat-owned states of the region and never leaves it.
struct WinningRegion {
    StateSet sat_wins;
    std::vector<std::int32_t> strategy;  // -1 where undefined

    std::optional<StateId> move(StateId s) const {
        if (strategy[s.index] < 0) return std::nullopt;
        return StateId(static_cast<std::uint32_t>(strategy[s.index]));
    }
};

// States from which `player` forces a visit to `target`, staying inside `within`.
// `within` must be a subarena: every state in it has a successor in it.
// When `strategy` is given, it receives attractor moves for the player's states outside `target`.
StateSet attractor(const GameArena& arena, const StateSet& target, Player player,
                   const StateSet* within = nullptr, std::vector<std::int32_t>* strategy = nullptr);

WinningRegion solve(const Game& game);

// Whether Sat wins from the initial state.
bool game_value(const Game& game);

}  // namespace backresp
