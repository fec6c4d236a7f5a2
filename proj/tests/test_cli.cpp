#include <doctest.h>

#include <json.hpp>
#include <regex>
#include <set>
#include <sstream>

#include "backresp/bench/generators.hpp"
#include "backresp/cli/cli.hpp"

using namespace backresp;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string model(const std::string& name) { return std::string(BACKRESP_MODELS_DIR) + "/" + name; }

// First data row of a table.
std::string top_row(const std::string& table) {
    std::istringstream in(table);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    return row;
}

std::set<std::string> filled_nodes(const std::string& dot) {
    std::set<std::string> out;
    std::regex node(R"re(label="([^"\\]+)[^\]]*fillcolor)re");
    for (std::sregex_iterator it(dot.begin(), dot.end(), node), end; it != end; ++it) out.insert((*it)[1]);
    return out;
}

}  // namespace

TEST_CASE("analyze fig3 optimistic puts s2 = 2/3 on top") {
    auto r = cli({"analyze", model("fig3.json"), "--mode", "optimistic"});
    REQUIRE(r.code == exit_ok);
    auto row = top_row(r.out);
    CHECK(row.rfind("s2 ", 0) == 0);
    CHECK(row.find("2/3") != std::string::npos);
}

TEST_CASE("analyze on an unwinnable model prints zeros and the note") {
    auto r = cli({"analyze", model("unwinnable.json")});
    REQUIRE(r.code == exit_ok);
    CHECK(r.out.find("note: objective unsatisfiable; all responsibilities 0") != std::string::npos);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    int rows = 0;
    while (std::getline(in, line) && line.rfind("note:", 0) != 0) {
        ++rows;
        CHECK(line.find(" 0 ") != std::string::npos);
        CHECK(line.find(" no") != std::string::npos);
    }
    CHECK(rows == 3);
}

TEST_CASE("refine fig8 with a seed explains down to {s2,s3,s6,s8}") {
    auto r = cli({"refine", model("fig8.json"), "--refine", "frontier-random", "--seed", "7", "--explain"});
    REQUIRE(r.code == exit_ok);
    CHECK(r.out.find("trace:\n{") != std::string::npos);
    CHECK(r.out.find("responsible: s2 s3 s6 s8\n") != std::string::npos);
}

TEST_CASE("records for fig3") {
    auto r = cli({"analyze", model("fig3.json"), "--mode", "optimistic", "--format", "records"});
    REQUIRE(r.code == exit_ok);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["schema"] == "backresp-responsibility/1");
    REQUIRE(doc["entries"].size() == 6);
    bool seen = false;
    for (const auto& e : doc["entries"])
        if (e["name"] == "s2") {
            seen = true;
            CHECK(e["value_numerator"] == "2");
            CHECK(e["value_denominator"] == "3");
        }
    CHECK(seen);
}

TEST_CASE("dot export of a fig8 refinement highlights the responsible states") {
    auto r = cli({"refine", model("fig8.json"), "--format", "dot", "--seed", "3"});
    REQUIRE(r.code == exit_ok);
    CHECK(filled_nodes(r.out) == std::set<std::string>{"s2", "s3", "s6", "s8"});
}

TEST_CASE("records output is byte-identical for equal inputs and seed") {
    for (const char* cmd : {"analyze", "refine", "positivity", "oracle"}) {
        CAPTURE(cmd);
        std::vector<std::string> args{cmd, model("fig8.json"), "--format", "records", "--seed", "11",
                                      "--select", "min-frontier"};
        auto a = cli(args);
        auto b = cli(args);
        REQUIRE(a.code == exit_ok);
        CHECK(a.out == b.out);
    }
    auto one = cli({"analyze", model("fig3.json"), "--format", "records", "--threads", "1"});
    auto four = cli({"analyze", model("fig3.json"), "--format", "records", "--threads", "4"});
    auto e1 = nlohmann::json::parse(one.out)["entries"];
    auto e4 = nlohmann::json::parse(four.out)["entries"];
    CHECK(e1 == e4);
}

TEST_CASE("clouds(10^4): analyze refuses at the cap, refine finds s_crit") {
    auto a = cli({"analyze", "--generate", "clouds:10000"});
    CHECK(a.code == exit_refused);
    CHECK(a.err.find("exact Shapley cap") != std::string::npos);
    auto r = cli({"refine", "--generate", "clouds:10000", "--format", "records"});
    REQUIRE(r.code == exit_ok);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["refinement"]["responsible"] == nlohmann::json::array({"s_crit"}));
}

TEST_CASE("input errors exit with 2 and name the location") {
    auto missing = cli({"analyze", "no/such/file.json"});
    CHECK(missing.code == exit_input_error);
    CHECK(missing.err.find("no/such/file.json") != std::string::npos);
    CHECK(cli({"analyze", model("fig3.json"), "--mode", "sideways"}).code == exit_input_error);
    CHECK(cli({"frobnicate"}).code == exit_input_error);
    CHECK(cli({}).code == exit_input_error);
    auto obj = cli({"analyze", model("fig3.json"), "--objective", "safety:nowhere"});
    CHECK(obj.code == exit_input_error);
    CHECK(obj.err.find("nowhere") != std::string::npos);
    auto run = cli({"analyze", model("fig3.json"), "--run", "s0 s1"});
    CHECK(run.code == exit_input_error);
    auto both = cli({"analyze", model("fig3.json"), "--run", "s0 (s1)", "--find-run"});
    CHECK(both.code == exit_input_error);
    auto prog = cli({"analyze", model("toggle.prism")});
    CHECK(prog.code == exit_input_error);
    CHECK(prog.err.find("--objective") != std::string::npos);
    CHECK(cli({"analyze", "--generate", "clouds:0"}).code == exit_input_error);
    CHECK(cli({"--help"}).code == exit_ok);
}

TEST_CASE("module-language input with label objective and module groups") {
    auto r = cli({"analyze", model("toggle.prism"), "--objective", "safety:@both", "--find-run", "--group-by-module"});
    REQUIRE(r.code == exit_ok);
    CHECK(r.out.find("left") != std::string::npos);
    CHECK(r.out.find("_unowned") != std::string::npos);
    auto none = cli({"analyze", model("toggle.prism"), "--objective", "safety:", "--find-run"});
    CHECK(none.code == exit_ok);
    CHECK(none.out.find("nothing to explain") != std::string::npos);
}

TEST_CASE("grouping from a file and from the model") {
    auto file = cli({"analyze", model("fig5.json"), "--groups", model("fig5_groups.json")});
    auto embedded = cli({"analyze", model("fig5.json"), "--embedded-groups"});
    REQUIRE(file.code == exit_ok);
    CHECK(file.out == embedded.out);
}

TEST_CASE("positivity uses the polynomial tests where they apply") {
    auto reach = cli({"positivity", "--generate", "frontier-stress-reach:3", "--mode", "optimistic"});
    REQUIRE(reach.code == exit_ok);
    CHECK(reach.out.find("optimistic reachability test") != std::string::npos);
    auto buechi = cli({"positivity", model("fig3.json"), "--mode", "optimistic"});
    REQUIRE(buechi.code == exit_ok);
    CHECK(buechi.out.find("optimistic Buechi test") != std::string::npos);
    CHECK(top_row(buechi.out).rfind("s0 ", 0) == 0);
}

TEST_CASE("generate and export round-trip") {
    auto gen = cli({"generate", "exp-coalitions", "3"});
    REQUIRE(gen.code == exit_ok);
    CHECK(gen.out == serialize_explicit(generate_doc({Family::exp_coalitions, 3})));
    auto prog = cli({"generate", "clouds", "3", "--format", "program"});
    CHECK(prog.out == clouds_program(3));
    CHECK(cli({"generate", "frontier-stress-reach", "3", "--format", "program"}).code == exit_input_error);
    auto exp = cli({"export", model("fig3.json")});
    CHECK(exp.out == read_file(model("fig3.json")));
    auto dot = cli({"export", model("clouds3.prism"), "--format", "dot"});
    CHECK(dot.out.rfind("digraph \"system\"", 0) == 0);
}
