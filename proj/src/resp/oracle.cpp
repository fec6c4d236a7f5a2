#include "backresp/resp/oracle.hpp"

namespace backresp {

namespace {

std::vector<bool> all_values(const GameContext& ctx, const PlayerSet& players, std::size_t cap) {
    const std::size_t n = players.size();
    if (n > cap) throw Refusal("oracle limited to " + std::to_string(cap) + " players");
    std::vector<bool> v(std::size_t{1} << n);
    for (std::uint64_t mask = 0; mask < v.size(); ++mask) {
        Game g = build_game(ctx.system(), ctx.objective(), ctx.positions(), players.flatten(Coalition{mask}),
                            ctx.mode());
        v[mask] = game_value(g);
    }
    return v;
}

BigInt factorial(std::size_t k) {
    BigInt f = 1;
    for (std::size_t i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace

ResponsibilityReport oracle_shapley(const GameContext& ctx, const PlayerSet& players, std::size_t cap) {
    const std::size_t n = players.size();
    const auto gamma = all_values(ctx, players, cap);
    ResponsibilityReport r;
    r.mode = ctx.mode();
    r.kind = players.kind();
    r.objective = ctx.objective().kind();
    r.stats.games_solved = gamma.size();
    const BigInt n_fact = factorial(n);
    for (std::size_t p = 0; p < n; ++p) {
        Rational value = 0;
        const std::uint64_t bit = std::uint64_t{1} << p;
        for (std::uint64_t mask = 0; mask < gamma.size(); ++mask) {
            if (mask & bit) continue;
            int marginal = static_cast<int>(gamma[mask | bit]) - static_cast<int>(gamma[mask]);
            if (marginal == 0) continue;
            std::size_t k = static_cast<std::size_t>(std::popcount(mask));
            value += Rational(factorial(k) * factorial(n - k - 1), n_fact) * marginal;
        }
        r.entries.push_back({players.name(p, ctx.system()), players.members(p), value, value > 0});
    }
    return r;
}

std::vector<Coalition> minimal_winning_coalitions(const GameContext& ctx, const PlayerSet& players, std::size_t cap) {
    const auto gamma = all_values(ctx, players, cap);
    std::vector<Coalition> out;
    for (std::uint64_t mask = 0; mask < gamma.size(); ++mask) {
        if (!gamma[mask]) continue;
        bool minimal = true;
        for (std::uint64_t rest = mask; rest && minimal; rest &= rest - 1)
            if (gamma[mask & ~(rest & -rest)]) minimal = false;
        if (minimal) out.push_back(Coalition{mask});
    }
    return out;
}

}  // namespace backresp
