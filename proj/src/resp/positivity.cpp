#include "backresp/resp/positivity.hpp"

#include <deque>

namespace backresp {

namespace {

void require(const GameContext& ctx, ObjectiveKind kind) {
    if (ctx.objective().kind() != kind || ctx.mode() != Mode::optimistic)
        throw WrongObjective("this positivity test needs an optimistic " + std::string(to_string(kind)) + " objective");
}

StateSet reachable(const TransitionSystem& g, const StateSet& from) {
    StateSet seen = from;
    std::deque<StateId> queue;
    from.for_each([&](StateId s) { queue.push_back(s); });
    while (!queue.empty()) {
        StateId s = queue.front();
        queue.pop_front();
        for (StateId t : g.successors(s))
            if (!seen.contains(t)) {
                seen.insert(t);
                queue.push_back(t);
            }
    }
    return seen;
}

std::optional<StateId> earliest(const RunPosition& run, const StateSet& states) {
    for (StateId s : run.states())
        if (states.contains(s)) return s;
    return std::nullopt;
}

}  // namespace

StateSet positivity_reach_opt(const GameContext& ctx) {
    require(ctx, ObjectiveKind::reachability);
    const std::size_t n = ctx.size();
    StateSet out(n);
    if (ctx.wins(StateSet(n))) return out;
    for (StateId s : ctx.positions()->states()) {
        StateSet single(n);
        single.insert(s);
        if (ctx.wins(single)) out.insert(s);
    }
    return out;
}

ResponsibilityReport values_reach_opt(const GameContext& ctx) {
    StateSet r = positivity_reach_opt(ctx);
    const auto& ts = ctx.system();
    ResponsibilityReport report;
    report.mode = Mode::optimistic;
    report.kind = PlayerKind::states;
    report.objective = ObjectiveKind::reachability;
    const std::size_t k = r.size();
    for (std::uint32_t i = 0; i < ts.size(); ++i) {
        StateId s(i);
        bool in = r.contains(s);
        report.entries.push_back({ts.name(s), {s}, in ? Rational(1, static_cast<long long>(k)) : Rational(0), in});
    }
    report.stats.games_solved = ctx.positions()->length() + 1;
    return report;
}

RhoOrder::RhoOrder(const GameContext& ctx, bool literal)
    : ctx_(&ctx), literal_(literal), lowest_(ctx.size()), lowest_target_(ctx.size()) {
    if (!ctx.positions()) throw InputError("a run is required for the run preorder");
    const auto& run = *ctx.positions();
    const auto& ts = ctx.system();
    const std::size_t n = ts.size();
    for (StateId s : run.states()) {
        StateSet only(n);
        only.insert(s);
        TransitionSystem g = engrave(ts, run, only);
        StateSet from_s = reachable(g, only);
        lowest_[s.index] = earliest(run, from_s);
        StateSet via = from_s & ctx.objective().target();
        if (!via.empty()) lowest_target_[s.index] = earliest(run, reachable(g, via));
    }
    if (literal_) {
        reach_.assign(run.length(), std::vector<bool>(run.length(), false));
        for (std::size_t i = 0; i < run.length(); ++i) {
            StateSet start(n);
            start.insert(run.at(i));
            StateSet seen = reachable(ts, start);
            for (std::size_t j = 0; j < run.length(); ++j) reach_[i][j] = seen.contains(run.at(j));
        }
    }
}

bool RhoOrder::preceq(StateId s, StateId t) const {
    const auto& run = *ctx_->positions();
    if (literal_) return reach_[run.index(s)][run.index(t)];
    return run.index(s) <= run.index(t) || (run.in_loop(s) && run.in_loop(t));
}

BuechiPositivity::BuechiPositivity(const GameContext& ctx, bool literal_order)
    : ctx_(ctx), order_((require(ctx, ObjectiveKind::buechi), ctx), literal_order) {}

bool BuechiPositivity::winning(const StateSet& coalition) {
    auto it = cache_.find(coalition);
    if (it != cache_.end()) return it->second;
    bool v = ctx_.wins(coalition);
    ++solved_;
    cache_.emplace(coalition, v);
    return v;
}

bool BuechiPositivity::winning(std::initializer_list<StateId> coalition) {
    return winning(StateSet::of(ctx_.size(), coalition));
}

bool BuechiPositivity::bottom_candidate(StateId s, StateId top) {
    StateSet c = StateSet::of(ctx_.size(), std::initializer_list<StateId>{s, top});
    for (StateId x : order_.run_states()) {
        if (!order_.prec(s, x) || !order_.preceq(x, top) || winning({x})) continue;
        if (!le(order_.lowest_via_target(x), top)) c.insert(x);
    }
    return winning(c);
}

bool BuechiPositivity::skipping_candidate(StateId s, StateId bottom, StateId top, StateId skip) {
    StateSet c = StateSet::of(ctx_.size(), std::initializer_list<StateId>{s, bottom});
    for (StateId x : order_.run_states()) {
        if (!order_.prec(bottom, x) || !order_.preceq(x, top) || winning({x})) continue;
        StateId low = *order_.lowest(x);
        bool jumps_over_skip = order_.prec(low, skip) && order_.preceq(skip, x);
        if (!le(order_.lowest_via_target(x), top) && !jumps_over_skip) c.insert(x);
    }
    return winning(c);
}

bool BuechiPositivity::is_responsible(StateId s) {
    const auto& run = *ctx_.positions();
    if (!run.on_run(s)) return false;
    if (winning({s})) return true;
    const auto& rho = order_.run_states();
    // Members of a minimal winning coalition of size two or more never win alone.
    for (StateId top : rho)
        if (le(order_.lowest_via_target(s), top) && !winning({top}) && bottom_candidate(s, top)) return true;
    for (StateId bottom : rho) {
        if (!order_.prec(bottom, s) || winning({bottom})) continue;
        auto bottom_f = order_.lowest_via_target(bottom);
        if (!bottom_f) continue;
        for (StateId top : rho) {
            if (!order_.preceq(s, top) || !order_.preceq(*bottom_f, top) || winning({top})) continue;
            for (StateId skip : rho) {
                if (!order_.prec(*order_.lowest(s), skip) || !order_.preceq(skip, s)) continue;
                if (!order_.prec(bottom, skip) || !order_.preceq(skip, *bottom_f)) continue;
                if (skipping_candidate(s, bottom, top, skip)) return true;
            }
        }
    }
    return false;
}

StateSet BuechiPositivity::responsible_set() {
    StateSet out(ctx_.size());
    for (StateId s : order_.run_states())
        if (is_responsible(s)) out.insert(s);
    return out;
}

bool positivity_buechi_opt(const GameContext& ctx, StateId s, bool literal_order) {
    return BuechiPositivity(ctx, literal_order).is_responsible(s);
}

}  // namespace backresp
