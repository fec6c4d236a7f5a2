#pragma once

#include <optional>
#include <string_view>

#include "backresp/model.hpp"

namespace backresp {

// How a coalition turns into a game.
//  pessimistic: run edges of non-coalition run states are fixed, coalition plays for Sat.
//  optimistic:  as pessimistic, but Sat also controls every state off the run.
//  forward:     no fixed edges, coalition plays for Sat.
enum class Mode { pessimistic, optimistic, forward };

std::string_view to_string(Mode m);
Mode mode_from_string(std::string_view s);  // throws InputError

enum class Player { sat, unsat };

// Two-player turn-based arena: a total graph plus the set of Sat-owned states.
struct GameArena {
    TransitionSystem graph;
    StateSet sat_owned;

    Player owner(StateId s) const { return sat_owned.contains(s) ? Player::sat : Player::unsat; }
};

struct Game {
    GameArena arena;
    Objective objective;
};

// Keeps every edge of states outside `run \ keep`; states of `run \ keep` keep only their run edge.
TransitionSystem engrave(const TransitionSystem& ts, const RunPosition& run, const StateSet& keep);

// Builds the game for coalition C. The run is ignored in forward mode.
Game build_game(const TransitionSystem& ts, const Objective& obj, const RunPosition* run,
                const StateSet& coalition, Mode mode);

}  // namespace backresp
