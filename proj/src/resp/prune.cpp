#include "backresp/resp/prune.hpp"

namespace backresp {

std::string_view to_string(PruneReason r) {
    switch (r) {
        case PruneReason::single_successor: return "single successor";
        case PruneReason::off_run: return "off the run in optimistic mode";
        case PruneReason::wins_alone: return "winning without any coalition";
        case PruneReason::cannot_win: return "losing even for the full coalition";
    }
    return "?";
}

PruneResult prune_dummies(const GameContext& ctx, const PlayerSet& candidates) {
    if (candidates.kind() != PlayerKind::states) throw InputError("pruning applies to state players only");
    const auto& ts = ctx.system();
    const std::size_t n = ts.size();
    const StateSet win_none = ctx.region(StateSet(n)).sat_wins;
    const StateSet win_all = ctx.region(StateSet::full(n)).sat_wins;

    PruneResult out;
    std::vector<StateId> kept;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        StateId s = candidates.members(i).front();
        if (ts.successors(s).size() == 1)
            out.removed.emplace_back(s, PruneReason::single_successor);
        else if (ctx.mode() == Mode::optimistic && !ctx.positions()->on_run(s))
            out.removed.emplace_back(s, PruneReason::off_run);
        else if (win_none.contains(s))
            out.removed.emplace_back(s, PruneReason::wins_alone);
        else if (!win_all.contains(s))
            out.removed.emplace_back(s, PruneReason::cannot_win);
        else
            kept.push_back(s);
    }
    out.kept = PlayerSet::of_states(std::move(kept), n);
    return out;
}

}  // namespace backresp
