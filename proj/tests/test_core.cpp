#include <doctest.h>

#include <random>

#include "brute.hpp"
#include "figures.hpp"

using namespace backresp;

TEST_CASE("transition system rejects deadlocks and duplicate names") {
    CHECK_THROWS_AS(TransitionSystem({"a", "b"}, StateId(0), {{StateId(1)}, {}}), InputError);
    CHECK_THROWS_AS(TransitionSystem({"a", "a"}, StateId(0), {{StateId(1)}, {StateId(0)}}), InputError);
    CHECK_THROWS_AS(TransitionSystem({"a"}, StateId(0), {{StateId(3)}}), InputError);
    try {
        TransitionSystem({"a", "b", "c"}, StateId(0), {{StateId(1)}, {}, {}});
        FAIL("expected rejection");
    } catch (const InputError& e) {
        std::string msg = e.what();
        CHECK(msg.find(" b") != std::string::npos);
        CHECK(msg.find(" c") != std::string::npos);
    }
}

TEST_CASE("successor lists are sorted and deduplicated") {
    TransitionSystem ts({"a", "b"}, StateId(0), {{StateId(1), StateId(0), StateId(1)}, {StateId(0)}});
    auto s = ts.successors(StateId(0));
    REQUIRE(s.size() == 2);
    CHECK(s[0] == StateId(0));
    CHECK(s[1] == StateId(1));
    CHECK(ts.transition_count() == 3);
}

TEST_CASE("validate_run accepts the figure runs") {
    for (auto e : {fixtures::figure1(), fixtures::figure3(), fixtures::figure4(), fixtures::figure5(),
                   fixtures::figure8(), fixtures::figure9(), fixtures::figure10()}) {
        auto v = validate_run(e.ts, e.run);
        CHECK_MESSAGE(v.ok, v.message);
        CHECK(violates(e.run, e.objective));
    }
}

TEST_CASE("validate_run diagnostics") {
    auto e = fixtures::figure3();
    SUBCASE("missing transition") {
        auto v = validate_run(e.ts, {e.seq({"s0", "s2"}), e.seq({"s3"})});
        CHECK_FALSE(v.ok);
        CHECK(v.message.find("missing transition s0 -> s2") != std::string::npos);
    }
    SUBCASE("wrong start") {
        auto v = validate_run(e.ts, {e.seq({"s1", "s2"}), e.seq({"s3"})});
        CHECK_FALSE(v.ok);
        CHECK(v.message.find("initial") != std::string::npos);
    }
    SUBCASE("prefix repeats") {
        auto v = validate_run(e.ts, {e.seq({"s0", "s1", "s4", "s1", "s2"}), e.seq({"s3"})});
        CHECK_FALSE(v.ok);
        CHECK(v.message.find("prefix is not simple") != std::string::npos);
    }
    SUBCASE("loop overlaps prefix") {
        auto v = validate_run(e.ts, {e.seq({"s0", "s1", "s4"}), e.seq({"s0", "s1", "s4"})});
        CHECK_FALSE(v.ok);
    }
    SUBCASE("loop does not close") {
        auto v = validate_run(e.ts, {e.seq({"s0"}), e.seq({"s1", "s2"})});
        CHECK_FALSE(v.ok);
        CHECK(v.message.find("s2 -> s1") != std::string::npos);
    }
    SUBCASE("empty loop") {
        CHECK_FALSE(validate_run(e.ts, {e.seq({"s0"}), {}}).ok);
    }
}

TEST_CASE("violates follows each objective") {
    auto e = fixtures::figure3();
    LassoRun through_s2{e.seq({"s0", "s1"}), e.seq({"s2"})};
    CHECK_FALSE(violates(through_s2, e.objective));
    CHECK(violates(e.run, e.objective));
    CHECK(violates(e.run, Objective::safety(e.set({"s1"}))));
    CHECK_FALSE(violates(e.run, Objective::safety(e.set({"s4"}))));
    CHECK_FALSE(violates(e.run, Objective::reachability(e.set({"s2"}))));
    CHECK(violates(e.run, Objective::reachability(e.set({"s5"}))));
    CHECK(violates(e.run, Objective::parity({0, 0, 0, 1, 0, 0})));
    CHECK_FALSE(violates(e.run, Objective::parity({0, 0, 0, 2, 0, 0})));
}

TEST_CASE("run positions order prefix before loop") {
    auto e = fixtures::figure3();
    RunPosition pos(e.run, e.ts.size());
    CHECK(pos.length() == 4);
    CHECK(pos.index(e.id("s2")) == 2);
    CHECK(pos.in_loop(e.id("s3")));
    CHECK_FALSE(pos.in_loop(e.id("s2")));
    CHECK_FALSE(pos.on_run(e.id("s4")));
    CHECK(pos.successor(e.id("s3")) == e.id("s3"));
    CHECK(pos.successor(e.id("s1")) == e.id("s2"));
}

TEST_CASE("find_violating_run agrees with exhaustive path search") {
    std::mt19937_64 rng(7);
    int found = 0, none = 0;
    for (int i = 0; i < 2000; ++i) {
        auto kind = static_cast<ObjectiveKind>(i % 4);
        std::uniform_int_distribution<std::size_t> sz(1, 9);
        const std::size_t n = sz(rng);
        std::vector<std::string> names;
        for (std::size_t k = 0; k < n; ++k) names.push_back("s" + std::to_string(k));
        std::vector<std::vector<StateId>> succ(n);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1), deg(1, 3);
        for (auto& row : succ)
            for (std::size_t d = deg(rng); d > 0; --d) row.push_back(StateId(pick(rng)));
        TransitionSystem ts(names, StateId(0), succ);
        StateSet target(n);
        for (std::size_t d = deg(rng); d > 0; --d) target.insert(StateId(pick(rng)));
        std::vector<unsigned> colours(n);
        for (auto& c : colours) c = static_cast<unsigned>(pick(rng) % 5);
        Objective obj = kind == ObjectiveKind::safety         ? Objective::safety(target)
                        : kind == ObjectiveKind::reachability ? Objective::reachability(target)
                        : kind == ObjectiveKind::buechi       ? Objective::buechi(target)
                                                              : Objective::parity(colours);
        std::vector<std::vector<StateId>> graph(n);
        for (std::uint32_t k = 0; k < n; ++k) graph[k].assign(ts.successors(StateId(k)).begin(), ts.successors(StateId(k)).end());
        bool exists = brute::has_bad_path(graph, obj, ts.initial());
        try {
            LassoRun run = find_violating_run(ts, obj);
            auto v = validate_run(ts, run);
            REQUIRE_MESSAGE(v.ok, v.message);
            CHECK(violates(run, obj));
            CHECK(exists);
            ++found;
        } catch (const NoViolation&) {
            CHECK_FALSE(exists);
            ++none;
        }
    }
    CHECK(found > 100);
    CHECK(none > 100);
}
