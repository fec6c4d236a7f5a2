#include "backresp/resp/payoff.hpp"

#include <algorithm>

namespace backresp {

GameContext::GameContext(TransitionSystem ts, Objective objective, std::optional<LassoRun> run, Mode mode)
    : ts_(std::move(ts)), objective_(std::move(objective)), run_(std::move(run)), mode_(mode) {
    if (objective_.kind() == ObjectiveKind::parity ? objective_.colours().size() != ts_.size()
                                                   : objective_.target().universe() != ts_.size())
        throw InputError("objective does not match the state count");
    if (mode_ != Mode::forward && !run_) throw InputError("a run is required in " + std::string(to_string(mode_)) + " mode");
    if (run_) {
        require_valid_run(ts_, *run_);
        positions_ = RunPosition(*run_, ts_.size());
    }
}

PlayerSet PlayerSet::of_states(std::vector<StateId> states, std::size_t universe) {
    std::sort(states.begin(), states.end());
    states.erase(std::unique(states.begin(), states.end()), states.end());
    PlayerSet p;
    p.kind_ = PlayerKind::states;
    p.universe_ = universe;
    p.owner_.assign(universe, -1);
    for (StateId s : states) {
        if (s.index >= universe) throw InputError("player state out of range");
        p.owner_[s.index] = static_cast<std::int32_t>(p.members_.size());
        p.members_.push_back({s});
    }
    return p;
}

PlayerSet PlayerSet::of_blocks(std::vector<std::pair<std::string, std::vector<StateId>>> blocks, std::size_t universe) {
    std::sort(blocks.begin(), blocks.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    PlayerSet p;
    p.kind_ = PlayerKind::blocks;
    p.universe_ = universe;
    p.owner_.assign(universe, -1);
    for (auto& [name, states] : blocks) {
        if (!p.names_.empty() && p.names_.back() == name) throw InputError("duplicate block name '" + name + "'");
        if (states.empty()) throw InputError("block '" + name + "' is empty");
        std::sort(states.begin(), states.end());
        for (StateId s : states) {
            if (s.index >= universe) throw InputError("block '" + name + "' names a state out of range");
            if (p.owner_[s.index] >= 0) throw InputError("state index " + std::to_string(s.index) + " is in two blocks");
            p.owner_[s.index] = static_cast<std::int32_t>(p.members_.size());
        }
        p.names_.push_back(name);
        p.members_.push_back(states);
    }
    return p;
}

std::string PlayerSet::name(std::size_t i, const TransitionSystem& ts) const {
    return kind_ == PlayerKind::states ? ts.name(members_[i].front()) : names_[i];
}

StateSet PlayerSet::flatten(Coalition c) const {
    StateSet out(universe_);
    for (std::size_t i = 0; i < members_.size(); ++i)
        if (c.contains(i))
            for (StateId s : members_[i]) out.insert(s);
    return out;
}

StateSet PlayerSet::flatten(const std::vector<std::size_t>& players) const {
    StateSet out(universe_);
    for (std::size_t i : players)
        for (StateId s : members_[i]) out.insert(s);
    return out;
}

StateSet PlayerSet::all_states() const {
    StateSet out(universe_);
    for (const auto& m : members_)
        for (StateId s : m) out.insert(s);
    return out;
}

std::optional<std::size_t> PlayerSet::owner_of(StateId s) const {
    if (s.index >= universe_ || owner_[s.index] < 0) return std::nullopt;
    return static_cast<std::size_t>(owner_[s.index]);
}

PlayerSet PlayerSet::restrict_to(const std::vector<std::size_t>& players) const {
    PlayerSet p;
    p.kind_ = kind_;
    p.universe_ = universe_;
    p.owner_.assign(universe_, -1);
    for (std::size_t i : players) {
        for (StateId s : members_[i]) p.owner_[s.index] = static_cast<std::int32_t>(p.members_.size());
        p.members_.push_back(members_[i]);
        if (kind_ == PlayerKind::blocks) p.names_.push_back(names_[i]);
    }
    return p;
}

PayoffGame::PayoffGame(std::shared_ptr<const GameContext> ctx, PlayerSet players)
    : ctx_(std::move(ctx)), players_(std::move(players)) {
    if (players_.universe() != ctx_->size()) throw InputError("player set does not match the system");
}

bool PayoffGame::gamma(Coalition c) const {
    if (players_.size() > max_players) throw Refusal("too many players for a bitmask coalition");
    {
        std::lock_guard lock(mutex_);
        auto it = memo_.find(c.bits);
        if (it != memo_.end()) {
            ++hits_;
            return it->second;
        }
    }
    bool v = ctx_->wins(players_.flatten(c));
    ++solved_;
    std::lock_guard lock(mutex_);
    memo_.emplace(c.bits, v);
    return v;
}

}  // namespace backresp
