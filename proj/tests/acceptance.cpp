// Acceptance checks. Prints one PASS/FAIL line per criterion; the exit status is
// non-zero when any selected criterion fails. Usage: acceptance [criterion...]

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "backresp/bench/generators.hpp"
#include "backresp/refine/refinement.hpp"
#include "backresp/resp/oracle.hpp"
#include "backresp/resp/positivity.hpp"
#include "backresp/resp/prune.hpp"
#include "brute.hpp"
#include "figures.hpp"

using namespace backresp;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[failed: " << what << "] ";
        }
    }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

PlayerSet all_states(const TransitionSystem& ts) {
    std::vector<StateId> ids;
    for (std::uint32_t i = 0; i < ts.size(); ++i) ids.push_back(StateId(i));
    return PlayerSet::of_states(ids, ts.size());
}

Rational value(const ResponsibilityReport& r, const std::string& name) {
    const auto* e = r.find(name);
    return e && e->value ? *e->value : Rational(-1);
}

std::string values_text(const ResponsibilityReport& r) {
    std::string out = "(";
    for (std::size_t i = 0; i < r.entries.size(); ++i) {
        if (i) out += ", ";
        out += r.entries[i].value ? fraction_string(*r.entries[i].value) : "-";
    }
    return out + ")";
}

bool same_values(const ResponsibilityReport& a, const ResponsibilityReport& b) {
    if (a.entries.size() != b.entries.size()) return false;
    for (std::size_t i = 0; i < a.entries.size(); ++i)
        if (a.entries[i].value != b.entries[i].value || a.entries[i].positive != b.entries[i].positive) return false;
    return true;
}

StateSet positive_states(const ResponsibilityReport& r, std::size_t n) {
    StateSet s(n);
    for (const auto& e : r.entries)
        if (e.positive)
            for (StateId m : e.members) s.insert(m);
    return s;
}

std::vector<Rational> expect(std::initializer_list<std::pair<long long, long long>> fr) {
    std::vector<Rational> out;
    for (auto [p, q] : fr) out.push_back(Rational(p, q));
    return out;
}

bool values_are(const ResponsibilityReport& r, const std::vector<Rational>& want) {
    if (r.entries.size() != want.size()) return false;
    for (std::size_t i = 0; i < want.size(); ++i)
        if (!r.entries[i].value || *r.entries[i].value != want[i]) return false;
    return true;
}

const char* kind_name(ObjectiveKind k) { return to_string(k).data(); }

// Random violating instance of the given kind; retries until one exists.
fixtures::Example instance(std::mt19937_64& rng, ObjectiveKind kind, std::size_t lo, std::size_t hi) {
    while (true)
        if (auto e = brute::random_example(rng, kind, lo, hi)) return *e;
}

HeuristicsConfig rotating_config(std::size_t i) {
    static const SelectHeuristic selects[] = {SelectHeuristic::random, SelectHeuristic::max_delta,
                                              SelectHeuristic::min_delta, SelectHeuristic::min_frontier};
    static const RefineHeuristic refines[] = {RefineHeuristic::random,          RefineHeuristic::frontier_random,
                                              RefineHeuristic::frontier_max,    RefineHeuristic::frontier_losing,
                                              RefineHeuristic::frontier_winning, RefineHeuristic::frontier_lowest};
    HeuristicsConfig c;
    c.select = selects[i % 4];
    c.refine = refines[(i / 4) % 6];
    c.initial_blocks = 1 + i % 3;
    c.seed = i;
    return c;
}

// ---------------------------------------------------------------------------

Outcome fig3_values() {
    Outcome o;
    auto e = fixtures::figure3();
    auto t0 = Clock::now();
    auto opt = shapley_exact(PayoffGame(e.context(Mode::optimistic), all_states(e.ts)));
    auto pes = shapley_exact(PayoffGame(e.context(Mode::pessimistic), all_states(e.ts)));
    double t = seconds_since(t0);
    o.require(values_are(opt, expect({{1, 6}, {1, 6}, {2, 3}, {0, 1}, {0, 1}, {0, 1}})), "optimistic values");
    o.require(values_are(pes, expect({{1, 12}, {1, 12}, {3, 4}, {0, 1}, {1, 12}, {0, 1}})), "pessimistic values");
    o.require(t < 1.0, "time under 1 s");
    o.detail << "optimistic " << values_text(opt) << ", pessimistic " << values_text(pes) << ", " << t << " s";
    return o;
}

Outcome fig5_grouping() {
    Outcome o;
    auto e = fixtures::figure5();
    auto ctx = e.context(Mode::pessimistic);
    auto single = shapley_exact(PayoffGame(ctx, all_states(e.ts)));
    auto blocks = PlayerSet::of_blocks({{"A", {e.id("s0"), e.id("s1")}}, {"B", {e.id("s2")}}, {"C", {e.id("s3")}}},
                                       e.ts.size());
    auto grouped = shapley_exact(PayoffGame(ctx, blocks));
    o.require(values_are(single, expect({{1, 2}, {1, 4}, {1, 4}, {0, 1}})), "individual values (1/2, 1/4, 1/4, 0)");
    o.require(value(grouped, "A") == 0, "block {s0,s1} value 0");
    o.detail << "individual " << values_text(single) << ", blocks A,B,C " << values_text(grouped);
    return o;
}

Outcome fig8_refinement() {
    Outcome o;
    auto e = fixtures::figure8();
    auto ctx = e.context(Mode::pessimistic);
    auto players = all_states(e.ts);
    HeuristicsConfig config;
    config.refine = RefineHeuristic::frontier_lowest;
    config.select = SelectHeuristic::min_frontier;
    auto t0 = Clock::now();
    auto rr = responsibility_via_refinement(ctx, players, config);
    double t = seconds_since(t0);
    const auto& trace = rr.refinement.trace;
    std::vector<std::set<std::string>> frontiers;
    for (const auto& rec : trace)
        for (const auto& w : rec.witnesses)
            if (rec.selected && w.block == *rec.selected && w.frontier_atoms) {
                std::set<std::string> f;
                for (std::size_t a : *w.frontier_atoms) f.insert(players.name(a, e.ts));
                frontiers.push_back(f);
            }
    using S = std::set<std::string>;
    const std::vector<S> want{{"s3", "s6", "s8"}, {"s6", "s8"}, {"s2"}, {"s8"}};
    o.require(trace.size() == 5, "five trace records");
    o.require(frontiers == want, "frontiers {s3,s6,s8} {s6,s8} {s2} {s8}");
    S final;
    for (std::size_t a : rr.refinement.responsible) final.insert(players.name(a, e.ts));
    o.require(final == S{"s2", "s3", "s6", "s8"}, "final set {s2,s3,s6,s8}");
    bool vals = value(rr.report, "s2") == Rational(5, 12) && value(rr.report, "s3") == Rational(5, 12) &&
                value(rr.report, "s6") == Rational(1, 12) && value(rr.report, "s8") == Rational(1, 12);
    o.require(vals, "values 5/12 5/12 1/12 1/12");
    o.require(t < 1.0, "time under 1 s");
    o.detail << trace.size() << " records, frontiers";
    for (const auto& f : frontiers) {
        o.detail << " {";
        bool first = true;
        for (const auto& s : f) o.detail << (first ? "" : ",") << s, first = false;
        o.detail << "}";
    }
    o.detail << ", " << t << " s";
    return o;
}

Outcome positivity_equivalence() {
    Outcome o;
    auto t0 = Clock::now();
    std::mt19937_64 rng(20240611);
    const std::size_t per_case = 500;

    std::size_t reach_bad = 0, buechi_bad = 0, buechi_states = 0;
    for (std::size_t i = 0; i < per_case; ++i) {
        auto e = instance(rng, ObjectiveKind::reachability, 2, 9);
        auto ctx = e.context(Mode::optimistic);
        auto oracle = oracle_shapley(*ctx, all_states(e.ts));
        if (!(positivity_reach_opt(*ctx) == positive_states(oracle, e.ts.size()))) ++reach_bad;
    }
    for (std::size_t i = 0; i < per_case; ++i) {
        auto e = instance(rng, ObjectiveKind::buechi, 2, 9);
        auto ctx = e.context(Mode::optimistic);
        auto oracle = oracle_shapley(*ctx, all_states(e.ts));
        for (std::uint32_t s = 0; s < e.ts.size(); ++s, ++buechi_states)
            if (positivity_buechi_opt(*ctx, StateId(s)) != oracle.entries[s].positive) ++buechi_bad;
    }
    o.detail << "reach-opt " << per_case << " instances, " << reach_bad << " disagreements; buechi-opt " << per_case
             << " instances (" << buechi_states << " states), " << buechi_bad << " disagreements; refine:";
    o.require(reach_bad == 0, "positivity_reach_opt agreement");
    o.require(buechi_bad == 0, "positivity_buechi_opt agreement");

    std::size_t k = 0;
    for (auto kind : {ObjectiveKind::safety, ObjectiveKind::reachability, ObjectiveKind::buechi, ObjectiveKind::parity})
        for (auto mode : {Mode::pessimistic, Mode::optimistic, Mode::forward}) {
            std::size_t bad = 0;
            for (std::size_t i = 0; i < per_case; ++i, ++k) {
                auto e = instance(rng, kind, 2, 9);
                auto ctx = e.context(mode);
                auto players = all_states(e.ts);
                auto oracle = oracle_shapley(*ctx, players);
                auto r = refine_loop(ctx, players, rotating_config(k));
                StateSet got(e.ts.size());
                for (std::size_t a : r.responsible) got.insert(players.members(a).front());
                if (!(got == positive_states(oracle, e.ts.size()))) ++bad;
            }
            o.detail << " " << kind_name(kind) << "/" << to_string(mode) << " " << per_case << ":" << bad;
            o.require(bad == 0, std::string("refine_loop agreement ") + kind_name(kind) + "/" +
                                    std::string(to_string(mode)));
        }
    double t = seconds_since(t0);
    o.require(t < 300.0, "suite under 5 min");
    o.detail << "; " << t << " s";
    return o;
}

Outcome value_equivalence() {
    Outcome o;
    std::mt19937_64 rng(8675309);
    const std::size_t count = 240;
    std::size_t exact_bad = 0, refine_bad = 0;
    for (std::size_t i = 0; i < count; ++i) {
        auto kind = static_cast<ObjectiveKind>(i % 4);
        auto mode = static_cast<Mode>((i / 4) % 3);
        auto e = instance(rng, kind, 2, 8);
        auto ctx = e.context(mode);
        auto players = all_states(e.ts);
        auto oracle = oracle_shapley(*ctx, players);
        if (!same_values(shapley_exact(PayoffGame(ctx, players)), oracle)) ++exact_bad;
        if (!same_values(responsibility_via_refinement(ctx, players, rotating_config(i)).report, oracle)) ++refine_bad;
    }
    o.require(exact_bad == 0, "shapley_exact equals oracle");
    o.require(refine_bad == 0, "responsibility_via_refinement equals oracle");
    o.detail << count << " instances; shapley_exact " << exact_bad << " disagreements, via refinement " << refine_bad
             << " disagreements";
    return o;
}

// Replays refinement with public pieces, checking every non-carried witness.
void frontier_properties(const fixtures::Example& e, Mode mode, const ResponsibilityReport& oracle, std::size_t seed,
                     std::size_t& witnesses, std::size_t& empty, std::size_t& no_positive) {
    auto ctx = e.context(mode);
    auto atoms = all_states(e.ts);
    BlockGame game(ctx, atoms);
    auto config = rotating_config(seed);
    CounterRng rng(seed);
    auto p = Partition::initial(atoms.size(), config.initial_blocks, rng);
    std::set<std::size_t> known;
    StateSet positive = positive_states(oracle, e.ts.size());
    for (std::size_t round = 0; round <= atoms.size(); ++round) {
        auto has = compute_has_bsp(game, p, &known, config);
        std::optional<std::pair<BlockId, std::size_t>> split;
        for (const auto& [id, w] : has) {
            if (!w || w->carried) continue;
            auto info = frontier(game, p, *w);
            ++witnesses;
            if (info.frontier.empty()) ++empty;
            else if (!info.frontier.intersects(positive)) ++no_positive;
            const auto& blk = p.block(id).atoms;
            if (blk.size() == 1) known.insert(blk.front());
            else if (!split) split = std::make_pair(id, refine_block(info, config, rng).atom);
        }
        if (!split) return;
        p.split(split->first, split->second);
    }
}

Outcome structural_properties() {
    Outcome o;
    std::mt19937_64 rng(1618);
    const std::size_t count = 300;

    std::size_t off_run = 0, unequal = 0;
    for (std::size_t i = 0; i < count; ++i) {
        auto kind = static_cast<ObjectiveKind>(i % 4);
        auto e = instance(rng, kind, 2, 9);
        auto ctx = e.context(Mode::optimistic);
        auto oracle = oracle_shapley(*ctx, all_states(e.ts));
        for (const auto& en : oracle.entries)
            if (en.positive && !ctx->positions()->on_run(en.members.front())) ++off_run;
        if (kind == ObjectiveKind::reachability) {
            std::set<Rational> vals;
            for (const auto& en : oracle.entries)
                if (en.positive) vals.insert(*en.value);
            if (vals.size() > 1) ++unequal;
        }
    }
    o.require(off_run == 0, "optimistic positives lie on the run");
    o.require(unequal == 0, "optimistic reachability positives are equal");

    std::size_t witnesses = 0, empty = 0, no_positive = 0;
    for (std::size_t i = 0; i < count; ++i) {
        auto kind = i % 2 ? ObjectiveKind::reachability : ObjectiveKind::safety;
        auto mode = (i / 2) % 2 ? Mode::optimistic : Mode::pessimistic;
        auto e = instance(rng, kind, 2, 9);
        auto oracle = oracle_shapley(*e.context(mode), all_states(e.ts));
        frontier_properties(e, mode, oracle, i, witnesses, empty, no_positive);
    }
    o.require(witnesses > 0, "witnesses encountered");
    o.require(empty == 0, "frontier non-empty");
    o.require(no_positive == 0, "frontier holds a positive state");

    std::size_t non_monotone = 0, inefficient = 0;
    for (std::size_t i = 0; i < count; ++i) {
        auto kind = static_cast<ObjectiveKind>(i % 4);
        auto mode = static_cast<Mode>((i / 4) % 3);
        auto e = instance(rng, kind, 2, 8);
        auto ctx = e.context(mode);
        PayoffGame pg(ctx, all_states(e.ts));
        const std::size_t n = pg.players().size();
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m)
            for (std::size_t p = 0; p < n; ++p)
                if (pg.gamma(Coalition{m}) && !pg.gamma(Coalition{m}.with(p))) ++non_monotone;
        if (mode == Mode::forward) continue;
        auto r = shapley_exact(pg);
        Rational sum = 0;
        for (const auto& en : r.entries) sum += *en.value;
        if (sum != Rational(pg.gamma(Coalition::all(n)) ? 1 : 0)) ++inefficient;
    }
    o.require(non_monotone == 0, "gamma monotone");
    o.require(inefficient == 0, "efficiency");
    o.detail << count << " instances per property; off-run positives " << off_run << ", unequal reach values " << unequal
             << ", witnesses " << witnesses << " (empty frontier " << empty << ", no positive " << no_positive
             << "), monotonicity violations " << non_monotone << ", efficiency violations " << inefficient;
    return o;
}

Outcome exponential_family() {
    Outcome o;
    for (std::size_t n = 1; n <= 4; ++n) {
        auto m = generate({Family::exp_coalitions, n});
        GameContext ctx(m.ts, m.objective, m.run, mode_from_string(m.mode));
        auto mwc = minimal_winning_coalitions(ctx, all_states(m.ts));
        o.require(mwc.size() == (std::size_t{1} << n), "n=" + std::to_string(n));
        o.detail << "n=" << n << ": " << mwc.size() << " ";
    }
    return o;
}

Outcome scalability() {
    Outcome o;
    {
        auto m = generate({Family::clouds, 10000});
        auto ctx = std::make_shared<GameContext>(m.ts, m.objective, m.run, mode_from_string(m.mode));
        auto t0 = Clock::now();
        auto atoms = prune_dummies(*ctx, all_states(m.ts)).kept;
        auto r = refine_loop(ctx, atoms, {});
        double t = seconds_since(t0);
        std::vector<std::string> names;
        for (std::size_t a : r.responsible) names.push_back(atoms.name(a, m.ts));
        o.require(names == std::vector<std::string>{"s_crit"}, "refine clouds(10^4) returns {s_crit}");
        o.require(t < 60.0, "refine clouds(10^4) under 60 s");
        bool refused = false;
        try {
            shapley_exact(PayoffGame(ctx, atoms));
        } catch (const Refusal& e) {
            refused = std::string(e.what()).find("cap") != std::string::npos;
        }
        o.require(refused, "shapley_exact refuses at the player cap");
        o.detail << "clouds(10^4) " << m.ts.size() << " states, " << atoms.size() << " players, refine " << t
                 << " s -> {" << (names.empty() ? "" : names.front()) << "}, shapley_exact "
                 << (refused ? "refused" : "did not refuse") << "; ";
    }
    auto iterations = [](Family f, RefineHeuristic h, std::uint64_t seed) {
        auto m = generate({f, 50});
        auto ctx = std::make_shared<GameContext>(m.ts, m.objective, m.run, mode_from_string(m.mode));
        HeuristicsConfig c;
        c.refine = h;
        c.seed = seed;
        return refine_loop(ctx, prune_dummies(*ctx, all_states(m.ts)).kept, c).iterations;
    };
    for (auto [family, good] : {std::pair{Family::frontier_stress_reach, RefineHeuristic::frontier_winning},
                                std::pair{Family::frontier_stress_safety, RefineHeuristic::frontier_losing}}) {
        auto fast = iterations(family, good, 1);
        auto slow = iterations(family, RefineHeuristic::frontier_random, 1);
        o.require(fast < slow, std::string(to_string(good)) + " beats frontier-random on " +
                                   std::string(to_string(family)));
        o.detail << to_string(family) << "(50): " << to_string(good) << " " << fast << " vs frontier-random " << slow
                 << " iterations; ";
    }
    return o;
}

Outcome fig4_parity() {
    Outcome o;
    auto e = fixtures::figure4();
    auto ctx = e.context(Mode::optimistic);
    auto with3 = e.set({"s0", "s1", "s3", "s4"});
    auto without3 = e.set({"s0", "s1", "s4"});
    bool solver_a = ctx->wins(with3), solver_b = ctx->wins(without3);
    bool brute_a = brute::sat_wins(ctx->build(with3), e.ts.initial());
    bool brute_b = brute::sat_wins(ctx->build(without3), e.ts.initial());
    o.require(solver_a && brute_a, "gamma({s0,s1,s3,s4}) = 1 by solver and by strategy enumeration");
    o.require(!solver_b && !brute_b, "gamma({s0,s1,s4}) = 0 by solver and by strategy enumeration");
    o.detail << "solver " << solver_a << "/" << solver_b << ", enumeration " << brute_a << "/" << brute_b;
    return o;
}

struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all{
        {1, "fig3 exact values", fig3_values},
        {2, "fig5 grouping values", fig5_grouping},
        {3, "fig8 refinement trace", fig8_refinement},
        {4, "positivity oracle equivalence", positivity_equivalence},
        {5, "value oracle equivalence", value_equivalence},
        {6, "structural properties", structural_properties},
        {7, "exp-coalitions minimal winning coalitions", exponential_family},
        {8, "scalability feasibility", scalability},
        {9, "fig4 parity coalitions", fig4_parity},
    };
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
    bool ok = true;
    for (const auto& c : all) {
        if (!wanted.empty() && !wanted.count(c.id)) continue;
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail << "exception: " << e.what();
        }
        std::cout << (out.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.title << "): " << out.detail.str()
                  << std::endl;
        ok = ok && out.pass;
    }
    return ok ? 0 : 1;
}
