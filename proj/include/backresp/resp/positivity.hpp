#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "backresp/resp/shapley.hpp"

namespace backresp {

// Optimistic reachability: the states of the run that win on their own.
StateSet positivity_reach_opt(const GameContext& ctx);

// Optimistic reachability values: 1/|R| for every state in R, 0 elsewhere. Players are all states.
ResponsibilityReport values_reach_opt(const GameContext& ctx);

// Preorder on run states used by the optimistic Buechi test.
// The default reading follows the run (t is reachable from s along the run);
// the literal reading uses reachability in the whole system.
class RhoOrder {
public:
    RhoOrder(const GameContext& ctx, bool literal);

    bool preceq(StateId s, StateId t) const;
    bool prec(StateId s, StateId t) const { return preceq(s, t) && !preceq(t, s); }

    // Earliest run state reachable from s when only s deviates from the run.
    std::optional<StateId> lowest(StateId s) const { return lowest_[s.index]; }
    // Earliest run state reachable from s through a target state, same game.
    std::optional<StateId> lowest_via_target(StateId s) const { return lowest_target_[s.index]; }

    const std::vector<StateId>& run_states() const { return ctx_->positions()->states(); }

private:
    const GameContext* ctx_;
    bool literal_;
    std::vector<std::optional<StateId>> lowest_;
    std::vector<std::optional<StateId>> lowest_target_;
    std::vector<std::vector<bool>> reach_;  // literal reading, indexed by run position
};

// Decides positive responsibility of single states for optimistic Buechi objectives.
class BuechiPositivity {
public:
    BuechiPositivity(const GameContext& ctx, bool literal_order = false);

    bool is_responsible(StateId s);
    StateSet responsible_set();
    std::uint64_t games_solved() const { return solved_; }

private:
    bool winning(const StateSet& coalition);
    bool winning(std::initializer_list<StateId> coalition);
    bool bottom_candidate(StateId s, StateId top);
    bool skipping_candidate(StateId s, StateId bottom, StateId top, StateId skip);
    bool le(std::optional<StateId> s, StateId t) const { return s && order_.preceq(*s, t); }

    const GameContext& ctx_;
    RhoOrder order_;
    std::unordered_map<StateSet, bool, StateSetHash> cache_;
    std::uint64_t solved_ = 0;
};

bool positivity_buechi_opt(const GameContext& ctx, StateId s, bool literal_order = false);

}  // namespace backresp
