#pragma once

#include <atomic>
#include <bit>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "backresp/game/arena.hpp"
#include "backresp/game/solver.hpp"

namespace backresp {

// Everything needed to turn a coalition of states into a game.
class GameContext {
public:
    // A run is required unless the mode is forward; it is validated against the system.
    GameContext(TransitionSystem ts, Objective objective, std::optional<LassoRun> run, Mode mode);

    const TransitionSystem& system() const { return ts_; }
    const Objective& objective() const { return objective_; }
    Mode mode() const { return mode_; }
    const std::optional<LassoRun>& run() const { return run_; }
    const RunPosition* positions() const { return run_ ? &positions_ : nullptr; }
    std::size_t size() const { return ts_.size(); }

    Game build(const StateSet& coalition) const { return build_game(ts_, objective_, positions(), coalition, mode_); }
    WinningRegion region(const StateSet& coalition) const { return solve(build(coalition)); }
    bool wins(const StateSet& coalition) const { return game_value(build(coalition)); }

private:
    TransitionSystem ts_;
    Objective objective_;
    std::optional<LassoRun> run_;
    RunPosition positions_;
    Mode mode_;
};

enum class PlayerKind { states, blocks };

// Bitmask over the players of a PlayerSet, bit i for player i.
struct Coalition {
    std::uint64_t bits = 0;

    bool contains(std::size_t i) const { return (bits >> i) & 1U; }
    Coalition with(std::size_t i) const { return {bits | (std::uint64_t{1} << i)}; }
    Coalition without(std::size_t i) const { return {bits & ~(std::uint64_t{1} << i)}; }
    std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits)); }
    static Coalition all(std::size_t n) { return {n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1}; }

    friend bool operator==(Coalition, Coalition) = default;
};

// Ordered agents: single states (ascending id) or named disjoint blocks (ascending name).
class PlayerSet {
public:
    static PlayerSet of_states(std::vector<StateId> states, std::size_t universe);
    static PlayerSet of_blocks(std::vector<std::pair<std::string, std::vector<StateId>>> blocks, std::size_t universe);

    PlayerKind kind() const { return kind_; }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }
    std::size_t universe() const { return universe_; }
    const std::vector<StateId>& members(std::size_t i) const { return members_[i]; }
    std::string name(std::size_t i, const TransitionSystem& ts) const;
    const std::vector<std::string>& block_names() const { return names_; }

    StateSet flatten(Coalition c) const;
    StateSet flatten(const std::vector<std::size_t>& players) const;
    StateSet all_states() const;
    std::optional<std::size_t> owner_of(StateId s) const;  // player containing s

    // Sub-population keeping the given player indices in order.
    PlayerSet restrict_to(const std::vector<std::size_t>& players) const;

private:
    PlayerKind kind_ = PlayerKind::states;
    std::size_t universe_ = 0;
    std::vector<std::vector<StateId>> members_;
    std::vector<std::string> names_;
    std::vector<std::int32_t> owner_;
};

struct GameStats {
    std::uint64_t games_solved = 0;
    std::uint64_t memo_hits = 0;
};

// The simple game gamma: coalition -> {0,1}, memoized by coalition bitmask.
// Evaluating gamma refuses above max_players.
class PayoffGame {
public:
    PayoffGame(std::shared_ptr<const GameContext> ctx, PlayerSet players);

    bool gamma(Coalition c) const;
    const PlayerSet& players() const { return players_; }
    const GameContext& context() const { return *ctx_; }
    std::shared_ptr<const GameContext> shared_context() const { return ctx_; }
    GameStats stats() const { return {solved_.load(), hits_.load()}; }

    static constexpr std::size_t max_players = 63;

private:
    std::shared_ptr<const GameContext> ctx_;
    PlayerSet players_;
    mutable std::mutex mutex_;
    mutable std::unordered_map<std::uint64_t, bool> memo_;
    mutable std::atomic<std::uint64_t> solved_{0};
    mutable std::atomic<std::uint64_t> hits_{0};
};

}  // namespace backresp
