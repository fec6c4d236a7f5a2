#include "backresp/resp/shapley.hpp"

#include <algorithm>
#include <thread>

namespace backresp {

const PlayerValue* ResponsibilityReport::find(std::string_view name) const {
    for (const auto& e : entries)
        if (e.name == name) return &e;
    return nullptr;
}

std::vector<std::string> ResponsibilityReport::positive_names() const {
    std::vector<std::string> out;
    for (const auto& e : entries)
        if (e.positive) out.push_back(e.name);
    return out;
}

ResponsibilityReport empty_report(const PayoffGame& pg) {
    ResponsibilityReport r;
    r.mode = pg.context().mode();
    r.kind = pg.players().kind();
    r.objective = pg.context().objective().kind();
    for (std::size_t i = 0; i < pg.players().size(); ++i)
        r.entries.push_back({pg.players().name(i, pg.context().system()), pg.players().members(i), Rational(0), false});
    return r;
}

ResponsibilityReport shapley_exact(const PayoffGame& pg, const ShapleyOptions& options) {
    const std::size_t n = pg.players().size();
    if (n > options.player_cap)
        throw Refusal(std::to_string(n) + " players exceed the exact Shapley cap of " +
                      std::to_string(options.player_cap) + "; use refinement for positivity");

    ResponsibilityReport report = empty_report(pg);

    const Coalition full = Coalition::all(n);
    if (!pg.gamma(full)) {
        report.notes.push_back("objective unsatisfiable; all responsibilities 0");
        report.stats = pg.stats();
        return report;
    }
    if (pg.gamma(Coalition{})) {
        report.notes.push_back("objective holds without any player; all responsibilities 0");
        report.stats = pg.stats();
        return report;
    }

    // One gamma bit per coalition.
    const std::uint64_t count = std::uint64_t{1} << n;
    const std::uint64_t words = (count + 63) / 64;
    std::vector<std::uint64_t> table(words, 0);
    const auto& ctx = pg.context();
    const auto& players = pg.players();
    auto fill = [&](unsigned worker, unsigned stride) {
        for (std::uint64_t w = worker; w < words; w += stride) {
            options.deadline.check();
            std::uint64_t bits = 0;
            for (std::uint64_t b = 0; b < 64 && w * 64 + b < count; ++b)
                if (ctx.wins(players.flatten(Coalition{w * 64 + b}))) bits |= std::uint64_t{1} << b;
            table[w] = bits;
        }
    };
    const unsigned threads = std::max(1U, std::min<unsigned>(options.threads, static_cast<unsigned>(words)));
    if (threads == 1) {
        fill(0, 1);
    } else {
        std::vector<std::exception_ptr> errors(threads);
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                try {
                    fill(t, threads);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    auto bit = [&](std::uint64_t mask) { return (table[mask >> 6] >> (mask & 63)) & 1U; };

    // Switching-pair histogram by coalition size.
    std::vector<std::vector<std::uint64_t>> pivots(n, std::vector<std::uint64_t>(n, 0));
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        if (bit(mask)) continue;
        const auto k = static_cast<std::size_t>(std::popcount(mask));
        for (std::size_t p = 0; p < n; ++p)
            if (!((mask >> p) & 1U) && bit(mask | (std::uint64_t{1} << p))) ++pivots[p][k];
    }

    // weight(k) = k!(n-k-1)!/n!
    std::vector<Rational> weight(n);
    weight[0] = Rational(1, static_cast<long long>(n));
    for (std::size_t k = 0; k + 1 < n; ++k)
        weight[k + 1] = weight[k] * Rational(static_cast<long long>(k + 1), static_cast<long long>(n - k - 1));

    for (std::size_t p = 0; p < n; ++p) {
        Rational v = 0;
        for (std::size_t k = 0; k < n; ++k)
            if (pivots[p][k]) v += weight[k] * Rational(BigInt(pivots[p][k]));
        report.entries[p].value = v;
        report.entries[p].positive = v > 0;
    }
    report.stats = pg.stats();
    report.stats.games_solved += count;
    return report;
}

bool is_switching_pair(const PayoffGame& pg, Coalition c, std::size_t player) {
    if (c.contains(player)) return false;
    return !pg.gamma(c) && pg.gamma(c.with(player));
}

bool threshold(const ResponsibilityReport& report, std::string_view player, const Rational& t) {
    const PlayerValue* e = report.find(player);
    if (!e) throw InputError("unknown player '" + std::string(player) + "'");
    if (!e->value) throw InputError("no value computed for '" + std::string(player) + "'");
    return *e->value > t;
}

}  // namespace backresp
