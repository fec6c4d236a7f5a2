#include "backresp/game/solver.hpp"

#include <algorithm>
#include <array>

namespace backresp {

namespace {

struct Predecessors {
    std::vector<std::uint32_t> offsets;
    std::vector<StateId> sources;

    explicit Predecessors(const TransitionSystem& g) : offsets(g.size() + 1, 0) {
        const std::size_t n = g.size();
        for (std::uint32_t s = 0; s < n; ++s)
            for (StateId t : g.successors(StateId(s))) ++offsets[t.index + 1];
        for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
        sources.resize(offsets[n]);
        std::vector<std::uint32_t> fill(offsets.begin(), offsets.end() - 1);
        for (std::uint32_t s = 0; s < n; ++s)
            for (StateId t : g.successors(StateId(s))) sources[fill[t.index]++] = StateId(s);
    }

    std::span<const StateId> of(StateId t) const {
        return {sources.data() + offsets[t.index], sources.data() + offsets[t.index + 1]};
    }
};

StateSet attract(const GameArena& arena, const Predecessors& preds, const StateSet& target, Player player,
                 const StateSet& within, std::vector<std::int32_t>* strategy) {
    const auto& g = arena.graph;
    StateSet attr = target & within;
    std::vector<StateId> queue = attr.to_vector();
    std::vector<std::int32_t> remaining(g.size(), -1);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        StateId t = queue[head];
        for (StateId s : preds.of(t)) {
            if (!within.contains(s) || attr.contains(s)) continue;
            if (arena.owner(s) == player) {
                if (strategy) (*strategy)[s.index] = static_cast<std::int32_t>(t.index);
            } else {
                if (remaining[s.index] < 0) {
                    std::int32_t c = 0;
                    for (StateId u : g.successors(s)) c += within.contains(u) ? 1 : 0;
                    remaining[s.index] = c;
                }
                if (--remaining[s.index] > 0) continue;
            }
            attr.insert(s);
            queue.push_back(s);
        }
    }
    return attr;
}

std::int32_t first_successor_in(const TransitionSystem& g, StateId s, const StateSet& region) {
    for (StateId t : g.successors(s))
        if (region.contains(t)) return static_cast<std::int32_t>(t.index);
    return -1;
}

Player player_of_parity(unsigned c) { return c % 2 == 0 ? Player::sat : Player::unsat; }
Player opponent(Player p) { return p == Player::sat ? Player::unsat : Player::sat; }
std::size_t slot(Player p) { return p == Player::sat ? 0 : 1; }

class Zielonka {
public:
    Zielonka(const Game& game, const Predecessors& preds)
        : game_(game), preds_(preds), strategy_{std::vector<std::int32_t>(game.arena.graph.size(), -1),
                                                std::vector<std::int32_t>(game.arena.graph.size(), -1)} {}

    // Returns the winning regions of Sat and Unsat inside `sub`.
    std::array<StateSet, 2> run(const StateSet& sub) {
        const std::size_t n = sub.universe();
        std::array<StateSet, 2> win{StateSet(n), StateSet(n)};
        if (sub.empty()) return win;

        unsigned top = 0;
        sub.for_each([&](StateId s) { top = std::max(top, game_.objective.colour(s)); });
        Player p = player_of_parity(top);
        Player q = opponent(p);

        StateSet top_states(n);
        sub.for_each([&](StateId s) {
            if (game_.objective.colour(s) == top) top_states.insert(s);
        });
        StateSet a = attract(game_.arena, preds_, top_states, p, sub, &strategy_[slot(p)]);
        auto first = run(sub - a);
        if (first[slot(q)].empty()) {
            top_states.for_each([&](StateId s) {
                if (game_.arena.owner(s) == p)
                    strategy_[slot(p)][s.index] = first_successor_in(game_.arena.graph, s, sub);
            });
            win[slot(p)] = sub;
            return win;
        }
        StateSet b = attract(game_.arena, preds_, first[slot(q)], q, sub, &strategy_[slot(q)]);
        auto second = run(sub - b);
        win[slot(p)] = second[slot(p)];
        win[slot(q)] = second[slot(q)] | b;
        return win;
    }

    std::vector<std::int32_t>& sat_strategy() { return strategy_[0]; }

private:
    const Game& game_;
    const Predecessors& preds_;
    std::array<std::vector<std::int32_t>, 2> strategy_;
};

}  // namespace

StateSet attractor(const GameArena& arena, const StateSet& target, Player player, const StateSet* within,
                   std::vector<std::int32_t>* strategy) {
    Predecessors preds(arena.graph);
    StateSet all = StateSet::full(arena.graph.size());
    return attract(arena, preds, target, player, within ? *within : all, strategy);
}

WinningRegion solve(const Game& game) {
    const auto& arena = game.arena;
    const auto& g = arena.graph;
    const std::size_t n = g.size();
    const StateSet all = StateSet::full(n);
    Predecessors preds(g);
    WinningRegion out{StateSet(n), std::vector<std::int32_t>(n, -1)};

    auto fill_free_moves = [&](const StateSet& states) {
        states.for_each([&](StateId s) {
            if (arena.owner(s) == Player::sat && out.sat_wins.contains(s) && out.strategy[s.index] < 0)
                out.strategy[s.index] = first_successor_in(g, s, out.sat_wins);
        });
    };

    switch (game.objective.kind()) {
        case ObjectiveKind::safety: {
            out.sat_wins = all - attract(arena, preds, game.objective.target(), Player::unsat, all, nullptr);
            fill_free_moves(out.sat_wins);
            break;
        }
        case ObjectiveKind::reachability: {
            out.sat_wins = attract(arena, preds, game.objective.target(), Player::sat, all, &out.strategy);
            fill_free_moves(game.objective.target());
            break;
        }
        case ObjectiveKind::buechi: {
            StateSet arena_left = all;
            std::vector<std::int32_t> moves(n, -1);
            while (true) {
                std::fill(moves.begin(), moves.end(), -1);
                StateSet recur =
                    attract(arena, preds, game.objective.target() & arena_left, Player::sat, arena_left, &moves);
                StateSet lost = arena_left - recur;
                if (lost.empty()) break;
                arena_left -= attract(arena, preds, lost, Player::unsat, arena_left, nullptr);
            }
            out.sat_wins = arena_left;
            out.strategy = std::move(moves);
            out.sat_wins.for_each([&](StateId s) {
                if (!arena.sat_owned.contains(s)) out.strategy[s.index] = -1;
            });
            fill_free_moves(game.objective.target() & out.sat_wins);
            break;
        }
        case ObjectiveKind::parity: {
            Zielonka z(game, preds);
            out.sat_wins = z.run(all)[0];
            out.strategy = std::move(z.sat_strategy());
            break;
        }
    }
    for (std::uint32_t i = 0; i < n; ++i) {
        StateId s(i);
        if (!out.sat_wins.contains(s) || arena.owner(s) != Player::sat) out.strategy[i] = -1;
    }
    return out;
}

bool game_value(const Game& game) { return solve(game).sat_wins.contains(game.arena.graph.initial()); }

}  // namespace backresp
