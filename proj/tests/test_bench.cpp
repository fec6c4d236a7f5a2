#include <doctest.h>

#include <map>

#include "backresp/bench/generators.hpp"
#include "backresp/ingest/modlang.hpp"
#include "backresp/io/report_io.hpp"
#include "backresp/refine/refinement.hpp"
#include "backresp/resp/oracle.hpp"
#include "backresp/resp/prune.hpp"

using namespace backresp;

namespace {

PlayerSet all_states(const TransitionSystem& ts) {
    std::vector<StateId> ids;
    for (std::uint32_t i = 0; i < ts.size(); ++i) ids.push_back(StateId(i));
    return PlayerSet::of_states(ids, ts.size());
}

std::shared_ptr<GameContext> context_of(const GeneratedModel& m) {
    return std::make_shared<GameContext>(m.ts, m.objective, m.run, mode_from_string(m.mode));
}

std::vector<std::string> positive_names(const ResponsibilityReport& r) { return r.positive_names(); }

// Expanded clouds state "region=R,layer=L,side=S" to the generator's name.
std::string generator_name(const std::string& valuation) {
    int region = 0, layer = 0, side = 0;
    std::sscanf(valuation.c_str(), "region=%d,layer=%d,side=%d", &region, &layer, &side);
    switch (region) {
        case 0: return "s0";
        case 2: return "s_crit";
        case 5: return "s_plus";
        case 6: return "s_minus";
        default: {
            const char* cloud = region == 1 ? "c1" : region == 3 ? "c2" : "c3";
            return std::string(cloud) + "_" + std::to_string(layer) + "_" + std::to_string(side);
        }
    }
}

}  // namespace

TEST_CASE("family names round-trip and ranges are checked") {
    for (auto f : {Family::clouds, Family::exp_coalitions, Family::frontier_stress_reach,
                   Family::frontier_stress_safety, Family::almost_empty_frontier, Family::centrifuge_analog})
        CHECK(family_from_string(to_string(f)) == f);
    CHECK_THROWS_AS(family_from_string("towers"), InputError);
    CHECK_THROWS_AS(generate({Family::clouds, 0}), InputError);
    CHECK_THROWS_AS(generate({Family::almost_empty_frontier, 1}), InputError);
    CHECK_THROWS_AS(generate({Family::centrifuge_analog, 2, 3}), InputError);
}

TEST_CASE("clouds(3): eleven states, only the critical state is responsible") {
    auto m = generate({Family::clouds, 3});
    CHECK(m.ts.size() == 11);
    auto ctx = context_of(m);
    auto oracle = oracle_shapley(*ctx, all_states(m.ts));
    CHECK(positive_names(oracle) == std::vector<std::string>{"s_crit"});
    CHECK(*oracle.find("s_crit")->value == 1);
    for (std::size_t k = 1; k <= 6; ++k) CHECK(generate({Family::clouds, k}).ts.size() == 3 * k + 2);
}

TEST_CASE("clouds module-language encoding expands to the generated graph") {
    for (std::size_t k = 1; k <= 7; ++k) {
        CAPTURE(k);
        auto gen = generate({Family::clouds, k});
        auto exp = lang::expand_program(lang::parse_program(clouds_program(k)));
        REQUIRE(exp.ts.size() == gen.ts.size());
        std::vector<StateId> to_gen(exp.ts.size());
        std::vector<bool> hit(gen.ts.size(), false);
        for (std::uint32_t i = 0; i < exp.ts.size(); ++i) {
            auto g = gen.ts.find(generator_name(exp.ts.name(StateId(i))));
            REQUIRE(g);
            CHECK_FALSE(hit[g->index]);
            hit[g->index] = true;
            to_gen[i] = *g;
        }
        CHECK(to_gen[exp.ts.initial().index] == gen.ts.initial());
        CHECK(exp.ts.transition_count() == gen.ts.transition_count());
        for (std::uint32_t i = 0; i < exp.ts.size(); ++i)
            for (StateId t : exp.ts.successors(StateId(i))) CHECK(gen.ts.has_edge(to_gen[i], to_gen[t.index]));
        auto plus = exp.labels.at("plus");
        CHECK(plus.size() == 1);
        plus.for_each([&](StateId s) { CHECK(gen.objective.target().contains(to_gen[s.index])); });
    }
}

TEST_CASE("shipped clouds3.prism is the generator output") {
    std::string text = read_file(std::string(BACKRESP_MODELS_DIR) + "/clouds3.prism");
    CHECK(text == clouds_program(3));
    CHECK(lang::expand_program(lang::parse_program(text)).ts.size() == 11);
}

TEST_CASE("exp-coalitions has 2^n minimal winning coalitions") {
    for (std::size_t n = 1; n <= 4; ++n) {
        auto m = generate({Family::exp_coalitions, n});
        CHECK(m.ts.size() == 2 * n + 2);
        auto ctx = context_of(m);
        CHECK(minimal_winning_coalitions(*ctx, all_states(m.ts)).size() == (std::size_t{1} << n));
    }
}

TEST_CASE("frontier-stress-reach: responsible winning side, frontier of 2k") {
    const std::size_t k = 4;
    auto m = generate({Family::frontier_stress_reach, k});
    auto ctx = context_of(m);
    auto oracle = oracle_shapley(*ctx, all_states(m.ts));
    for (std::size_t j = 1; j <= k; ++j) {
        CHECK(*oracle.find("w" + std::to_string(j))->value == Rational(1, static_cast<long long>(k)));
        CHECK(*oracle.find("l" + std::to_string(j))->value == 0);
    }
    auto atoms = prune_dummies(*ctx, all_states(m.ts)).kept;
    CHECK(atoms.size() == 2 * k);
    BlockGame game(ctx, atoms);
    CounterRng rng(0);
    auto p = Partition::initial(atoms.size(), 1, rng);
    auto info = frontier(game, p, *compute_has_bsp(game, p).at(0));
    REQUIRE(info.frontier_atoms.size() == 2 * k);
    for (std::size_t a : info.frontier_atoms) {
        bool winning_side = atoms.name(a, m.ts)[0] == 'w';
        CHECK((info.to_winning.at(a) > 0) == winning_side);
        if (!winning_side) CHECK(info.to_losing.at(a) > 0);
    }
}

TEST_CASE("frontier-stress-safety: responsible losing side, frontier of 2k") {
    const std::size_t k = 4;
    auto m = generate({Family::frontier_stress_safety, k});
    auto ctx = context_of(m);
    auto oracle = oracle_shapley(*ctx, all_states(m.ts));
    for (std::size_t j = 1; j <= k; ++j) {
        CHECK(*oracle.find("y" + std::to_string(j))->value == Rational(1, static_cast<long long>(k)));
        CHECK(*oracle.find("w" + std::to_string(j))->value == 0);
    }
    auto atoms = prune_dummies(*ctx, all_states(m.ts)).kept;
    BlockGame game(ctx, atoms);
    CounterRng rng(0);
    auto p = Partition::initial(atoms.size(), 1, rng);
    auto info = frontier(game, p, *compute_has_bsp(game, p).at(0));
    CHECK(info.frontier_atoms.size() == 2 * k);
    std::size_t to_win = 0, to_lose = 0;
    for (std::size_t a : info.frontier_atoms) {
        if (info.to_winning.at(a) > 0) ++to_win;
        if (info.to_losing.at(a) > 0) ++to_lose;
    }
    CHECK(to_win == k);
    CHECK(to_lose == k);
}

TEST_CASE("almost-empty-frontier: k frontier states, one responsible") {
    const std::size_t k = 5;
    auto m = generate({Family::almost_empty_frontier, k});
    auto ctx = context_of(m);
    auto oracle = oracle_shapley(*ctx, all_states(m.ts));
    CHECK(positive_names(oracle) == std::vector<std::string>{"r"});
    auto atoms = prune_dummies(*ctx, all_states(m.ts)).kept;
    BlockGame game(ctx, atoms);
    CounterRng rng(0);
    auto p = Partition::initial(atoms.size(), 1, rng);
    auto info = frontier(game, p, *compute_has_bsp(game, p).at(0));
    CHECK(info.frontier_atoms.size() == k);
}

TEST_CASE("centrifuge analog blames the faulty centrifuge") {
    auto clean = generate({Family::centrifuge_analog, 2});
    CHECK_FALSE(clean.run);
    auto m = generate({Family::centrifuge_analog, 2, 2});
    REQUIRE(m.run);
    REQUIRE(m.groups);
    CHECK(m.groups->block_names() == std::vector<std::string>{"centrifuge_1", "centrifuge_2", "scheduler"});
    auto ctx = context_of(m);
    auto oracle = oracle_shapley(*ctx, *m.groups);
    CHECK(oracle.find("centrifuge_2")->positive);
    CHECK_FALSE(oracle.find("centrifuge_1")->positive);
    auto via = responsibility_via_refinement(ctx, *m.groups, {});
    for (std::size_t i = 0; i < m.groups->size(); ++i)
        CHECK(*via.report.entries[i].value == *oracle.entries[i].value);
    MESSAGE("centrifuge analog: " << m.ts.size() << " states; scheduler " << fraction_string(*oracle.find("scheduler")->value)
                                  << ", centrifuge_2 " << fraction_string(*oracle.find("centrifuge_2")->value));
}

TEST_CASE("generators round-trip through the explicit format") {
    const GeneratorSpec specs[] = {{Family::clouds, 4},
                                   {Family::exp_coalitions, 3},
                                   {Family::frontier_stress_reach, 3},
                                   {Family::frontier_stress_safety, 3},
                                   {Family::almost_empty_frontier, 4},
                                   {Family::centrifuge_analog, 2, 1}};
    for (const auto& spec : specs) {
        CAPTURE(to_string(spec.family));
        auto m = generate(spec);
        auto doc = generate_doc(spec);
        auto text = serialize_explicit(doc);
        CHECK(serialize_explicit(generate_doc(spec)) == text);
        auto back = load_model(parse_explicit(text));
        CHECK(back.ts.names() == m.ts.names());
        CHECK(back.ts.transition_count() == m.ts.transition_count());
        CHECK(*back.objective == m.objective);
        CHECK(back.run == m.run);
        CHECK(back.groups.has_value() == m.groups.has_value());
    }
}

TEST_CASE("report formats") {
    auto m = generate({Family::frontier_stress_reach, 2});
    auto ctx = context_of(m);
    auto atoms = all_states(m.ts);
    auto r = oracle_shapley(*ctx, atoms);
    auto table = format_table(r);
    CHECK(table.find("w1") < table.find("s0"));
    CHECK(table.find("1/2") != std::string::npos);
    auto records = format_records(r);
    CHECK(records.find("\"value_numerator\": \"1\"") != std::string::npos);
    CHECK(records.find("\"value_denominator\": \"2\"") != std::string::npos);
    auto dot = format_dot(*ctx, r);
    CHECK(dot.find("fillcolor") != std::string::npos);
    ResponsibilityReport empty;
    auto none = format_records(empty);
    CHECK(none.find("\"entries\": []") != std::string::npos);
}
