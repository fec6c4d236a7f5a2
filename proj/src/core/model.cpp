#include "backresp/model.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace backresp {

TransitionSystem::TransitionSystem(std::vector<std::string> names, StateId initial,
                                   std::vector<std::vector<StateId>> successors) {
    const std::size_t n = names.size();
    if (n == 0) throw InputError("transition system has no states");
    if (successors.size() != n) throw InputError("successor table does not match state count");
    if (initial.index >= n) throw InputError("initial state out of range");

    auto index = std::make_shared<std::unordered_map<std::string, std::uint32_t>>();
    for (std::size_t i = 0; i < n; ++i) {
        if (names[i].empty()) throw InputError("state " + std::to_string(i) + " has an empty name");
        if (!index->emplace(names[i], static_cast<std::uint32_t>(i)).second)
            throw InputError("duplicate state name '" + names[i] + "'");
    }

    std::vector<std::string> deadlocks;
    offsets_.reserve(n + 1);
    offsets_.push_back(0);
    for (std::size_t i = 0; i < n; ++i) {
        auto& succ = successors[i];
        for (StateId t : succ)
            if (t.index >= n)
                throw InputError("transition from '" + names[i] + "' to unknown state index " + std::to_string(t.index));
        std::sort(succ.begin(), succ.end());
        succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
        if (succ.empty()) deadlocks.push_back(names[i]);
        targets_.insert(targets_.end(), succ.begin(), succ.end());
        offsets_.push_back(static_cast<std::uint32_t>(targets_.size()));
    }
    if (!deadlocks.empty()) {
        std::string msg = "transition system is not total; states without successors:";
        for (auto& d : deadlocks) msg += " " + d;
        throw InputError(msg);
    }

    names_ = std::make_shared<const std::vector<std::string>>(std::move(names));
    index_ = std::move(index);
    initial_ = initial;
}

TransitionSystem TransitionSystem::with_edges(std::vector<std::uint32_t> offsets, std::vector<StateId> targets) const {
    TransitionSystem t;
    t.names_ = names_;
    t.index_ = index_;
    t.initial_ = initial_;
    t.offsets_ = std::move(offsets);
    t.targets_ = std::move(targets);
    return t;
}

bool TransitionSystem::has_edge(StateId from, StateId to) const {
    auto succ = successors(from);
    return std::binary_search(succ.begin(), succ.end(), to);
}

std::optional<StateId> TransitionSystem::find(std::string_view name) const {
    auto it = index_->find(std::string(name));
    if (it == index_->end()) return std::nullopt;
    return StateId(it->second);
}

StateId TransitionSystem::lookup(std::string_view name) const {
    if (auto s = find(name)) return *s;
    throw InputError("unknown state '" + std::string(name) + "'");
}

std::string_view to_string(ObjectiveKind k) {
    switch (k) {
        case ObjectiveKind::safety: return "safety";
        case ObjectiveKind::reachability: return "reachability";
        case ObjectiveKind::buechi: return "buechi";
        case ObjectiveKind::parity: return "parity";
    }
    return "?";
}

ObjectiveKind objective_kind_from_string(std::string_view s) {
    if (s == "safety") return ObjectiveKind::safety;
    if (s == "reachability" || s == "reach") return ObjectiveKind::reachability;
    if (s == "buechi" || s == "büchi") return ObjectiveKind::buechi;
    if (s == "parity") return ObjectiveKind::parity;
    throw InputError("unknown objective kind '" + std::string(s) + "'");
}

Objective Objective::parity(std::vector<unsigned> colours) {
    StateSet none(colours.size());
    return {ObjectiveKind::parity, std::move(none), std::move(colours)};
}

RunValidation validate_run(const TransitionSystem& ts, const LassoRun& run) {
    auto fail = [](std::string m) { return RunValidation{false, std::move(m)}; };
    const std::size_t n = ts.size();
    if (run.loop.empty()) return fail("run loop is empty");
    std::vector<StateId> seq = run.prefix;
    seq.insert(seq.end(), run.loop.begin(), run.loop.end());
    for (std::size_t i = 0; i < seq.size(); ++i)
        if (seq[i].index >= n) return fail("run position " + std::to_string(i) + " names an unknown state");
    if (seq.front() != ts.initial())
        return fail("run starts at '" + ts.name(seq.front()) + "' instead of the initial state '" +
                    ts.name(ts.initial()) + "'");
    std::vector<int> seen(n, -1);
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (seen[seq[i].index] >= 0) {
            bool in_prefix = i < run.prefix.size();
            return fail("state '" + ts.name(seq[i]) + "' repeats at run position " + std::to_string(i) +
                        (in_prefix ? " (prefix is not simple)" : " (loop overlaps the prefix or is not simple)"));
        }
        seen[seq[i].index] = static_cast<int>(i);
    }
    for (std::size_t i = 0; i < seq.size(); ++i) {
        StateId from = seq[i];
        StateId to = i + 1 < seq.size() ? seq[i + 1] : run.loop.front();
        if (!ts.has_edge(from, to))
            return fail("missing transition " + ts.name(from) + " -> " + ts.name(to) + " at run position " +
                        std::to_string(i));
    }
    return {};
}

void require_valid_run(const TransitionSystem& ts, const LassoRun& run) {
    auto v = validate_run(ts, run);
    if (!v.ok) throw InputError("invalid run: " + v.message);
}

bool violates(const LassoRun& run, const Objective& obj) {
    auto any_in = [&](const std::vector<StateId>& seq) {
        return std::any_of(seq.begin(), seq.end(), [&](StateId s) { return obj.target().contains(s); });
    };
    switch (obj.kind()) {
        case ObjectiveKind::safety: return any_in(run.prefix) || any_in(run.loop);
        case ObjectiveKind::reachability: return !any_in(run.prefix) && !any_in(run.loop);
        case ObjectiveKind::buechi: return !any_in(run.loop);
        case ObjectiveKind::parity: {
            unsigned top = 0;
            for (StateId s : run.loop) top = std::max(top, obj.colour(s));
            return top % 2 == 1;
        }
    }
    return false;
}

namespace {

// Shortest path from `from` to the nearest state of `goal` using only `allowed`.
std::optional<std::vector<StateId>> bfs_path(const TransitionSystem& ts, StateId from, const StateSet& goal,
                                             const StateSet& allowed) {
    const std::size_t n = ts.size();
    if (!allowed.contains(from)) return std::nullopt;
    std::vector<int> parent(n, -2);
    std::deque<StateId> queue{from};
    parent[from.index] = -1;
    while (!queue.empty()) {
        StateId s = queue.front();
        queue.pop_front();
        if (goal.contains(s)) {
            std::vector<StateId> path;
            for (int cur = static_cast<int>(s.index); cur >= 0; cur = parent[cur]) path.push_back(StateId(cur));
            std::reverse(path.begin(), path.end());
            return path;
        }
        for (StateId t : ts.successors(s)) {
            if (parent[t.index] != -2 || !allowed.contains(t)) continue;
            parent[t.index] = static_cast<int>(s.index);
            queue.push_back(t);
        }
    }
    return std::nullopt;
}

// States of `within` that have an infinite path staying in `within`.
StateSet infinite_core(const TransitionSystem& ts, StateSet within) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (StateId s : within.to_vector()) {
            auto succ = ts.successors(s);
            if (std::none_of(succ.begin(), succ.end(), [&](StateId t) { return within.contains(t); })) {
                within.erase(s);
                changed = true;
            }
        }
    }
    return within;
}

// Follows `path`, then lowest-index successors inside `walk_in`, until a state repeats.
LassoRun close_lasso(const TransitionSystem& ts, std::vector<StateId> path, const StateSet& walk_in) {
    std::vector<int> pos(ts.size(), -1);
    for (std::size_t i = 0; i < path.size(); ++i) pos[path[i].index] = static_cast<int>(i);
    while (true) {
        StateId cur = path.back();
        StateId next = cur;
        for (StateId t : ts.successors(cur))
            if (walk_in.contains(t)) {
                next = t;
                break;
            }
        if (pos[next.index] >= 0) {
            auto cut = path.begin() + pos[next.index];
            return LassoRun{{path.begin(), cut}, {cut, path.end()}};
        }
        pos[next.index] = static_cast<int>(path.size());
        path.push_back(next);
    }
}

}  // namespace

LassoRun find_violating_run(const TransitionSystem& ts, const Objective& obj) {
    const std::size_t n = ts.size();
    const StateSet all = StateSet::full(n);
    switch (obj.kind()) {
        case ObjectiveKind::safety: {
            auto path = bfs_path(ts, ts.initial(), obj.target(), all);
            if (!path) throw NoViolation();
            return close_lasso(ts, *path, all);
        }
        case ObjectiveKind::reachability: {
            StateSet core = infinite_core(ts, all - obj.target());
            auto path = bfs_path(ts, ts.initial(), core, core);
            if (!path || !core.contains(ts.initial())) throw NoViolation();
            return close_lasso(ts, *path, core);
        }
        case ObjectiveKind::buechi: {
            StateSet core = infinite_core(ts, all - obj.target());
            auto path = bfs_path(ts, ts.initial(), core, all);
            if (!path) throw NoViolation();
            return close_lasso(ts, *path, core);
        }
        case ObjectiveKind::parity: {
            for (std::uint32_t w = 0; w < n; ++w) {
                unsigned c = obj.colour(StateId(w));
                if (c % 2 == 0) continue;
                StateSet low(n);
                for (std::uint32_t i = 0; i < n; ++i)
                    if (obj.colour(StateId(i)) <= c) low.insert(StateId(i));
                // Shortest cycle through w inside `low`.
                std::optional<std::vector<StateId>> cycle;
                StateSet target(n);
                target.insert(StateId(w));
                for (StateId t : ts.successors(StateId(w))) {
                    if (!low.contains(t)) continue;
                    auto back = bfs_path(ts, t, target, low);
                    if (back && (!cycle || back->size() + 1 < cycle->size())) {
                        std::vector<StateId> cyc{StateId(w)};
                        cyc.insert(cyc.end(), back->begin(), back->end() - 1);
                        cycle = cyc;
                    }
                }
                if (!cycle) continue;
                StateSet on_cycle = StateSet::of(n, *cycle);
                auto path = bfs_path(ts, ts.initial(), on_cycle, all);
                if (!path) continue;
                StateId entry = path->back();
                auto at = std::find(cycle->begin(), cycle->end(), entry);
                std::vector<StateId> loop(at, cycle->end());
                loop.insert(loop.end(), cycle->begin(), at);
                path->pop_back();
                return LassoRun{*path, loop};
            }
            throw NoViolation();
        }
    }
    throw NoViolation();
}

RunPosition::RunPosition(const LassoRun& run, std::size_t num_states)
    : index_(num_states, -1), next_(num_states, StateId{}), prefix_len_(run.prefix.size()) {
    order_ = run.prefix;
    order_.insert(order_.end(), run.loop.begin(), run.loop.end());
    for (std::size_t i = 0; i < order_.size(); ++i) {
        index_[order_[i].index] = static_cast<int>(i);
        next_[order_[i].index] = i + 1 < order_.size() ? order_[i + 1] : run.loop.front();
    }
}

StateSet RunPosition::as_set() const { return StateSet::of(index_.size(), order_); }

}  // namespace backresp
