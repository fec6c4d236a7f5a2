#include "backresp/game/arena.hpp"

namespace backresp {

std::string_view to_string(Mode m) {
    switch (m) {
        case Mode::pessimistic: return "pessimistic";
        case Mode::optimistic: return "optimistic";
        case Mode::forward: return "forward";
    }
    return "?";
}

Mode mode_from_string(std::string_view s) {
    if (s == "pessimistic") return Mode::pessimistic;
    if (s == "optimistic") return Mode::optimistic;
    if (s == "forward") return Mode::forward;
    throw InputError("unknown mode '" + std::string(s) + "'");
}

TransitionSystem engrave(const TransitionSystem& ts, const RunPosition& run, const StateSet& keep) {
    const std::size_t n = ts.size();
    std::vector<std::uint32_t> offsets;
    std::vector<StateId> targets;
    offsets.reserve(n + 1);
    targets.reserve(ts.transition_count());
    offsets.push_back(0);
    for (std::uint32_t i = 0; i < n; ++i) {
        StateId s(i);
        if (run.on_run(s) && !keep.contains(s)) {
            targets.push_back(run.successor(s));
        } else {
            auto succ = ts.successors(s);
            targets.insert(targets.end(), succ.begin(), succ.end());
        }
        offsets.push_back(static_cast<std::uint32_t>(targets.size()));
    }
    return ts.with_edges(std::move(offsets), std::move(targets));
}

Game build_game(const TransitionSystem& ts, const Objective& obj, const RunPosition* run,
                const StateSet& coalition, Mode mode) {
    if (mode == Mode::forward) return Game{GameArena{ts, coalition}, obj};
    StateSet sat = coalition;
    if (mode == Mode::optimistic) sat |= run->as_set().complement();
    return Game{GameArena{engrave(ts, *run, coalition), std::move(sat)}, obj};
}

}  // namespace backresp
