#include "backresp/cli/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <optional>
#include <sstream>

#include "backresp/bench/generators.hpp"
#include "backresp/game/dot.hpp"
#include "backresp/ingest/explicit.hpp"
#include "backresp/ingest/grouping.hpp"
#include "backresp/ingest/modlang.hpp"
#include "backresp/io/report_io.hpp"
#include "backresp/refine/refinement.hpp"
#include "backresp/resp/oracle.hpp"
#include "backresp/resp/positivity.hpp"
#include "backresp/resp/prune.hpp"

namespace backresp {

namespace {

struct Config {
    std::string command;
    std::string input;
    std::string generate;
    std::optional<std::string> mode;
    std::optional<std::string> objective;
    std::optional<std::string> run;
    bool find_run = false;
    std::string groups_path;
    bool embedded_groups = false;
    bool group_by_module = false;
    std::vector<std::string> group_by_label;
    std::string format = "table";
    unsigned threads = 1;
    double timeout_s = 0;
    std::uint64_t seed = 0;
    std::size_t cap = 24;
    std::size_t state_cap = 10'000'000;
    bool no_prune = false;
    bool preorder_literal = false;
    std::string select = "random";
    std::string refine = "frontier-random";
    std::size_t initial_blocks = 1;
    unsigned search_budget = 24;
    bool explain = false;
    // generate
    std::string family;
    std::size_t size = 0;
    std::optional<std::size_t> faulty;
};

struct Model {
    TransitionSystem ts;
    std::optional<Objective> objective;
    std::optional<LassoRun> run;
    std::optional<PlayerSet> groups;
    LabelInfo labels;
    std::optional<std::string> mode;
};

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::vector<std::string> tokens(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::string> out;
    for (std::string t; in >> t;) out.push_back(t);
    return out;
}

GeneratorSpec parse_generator(const std::string& text) {
    auto first = text.find(':');
    if (first == std::string::npos) throw InputError("--generate: expected FAMILY:SIZE[:FAULTY], got '" + text + "'");
    GeneratorSpec spec;
    spec.family = family_from_string(text.substr(0, first));
    auto second = text.find(':', first + 1);
    auto number = [&](const std::string& s) {
        std::size_t pos = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(s, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (s.empty() || pos != s.size()) throw InputError("--generate: '" + s + "' is not a number");
        return static_cast<std::size_t>(v);
    };
    spec.size = number(text.substr(first + 1, second == std::string::npos ? std::string::npos : second - first - 1));
    if (second != std::string::npos) spec.faulty = number(text.substr(second + 1));
    return spec;
}

Model load(const Config& cfg) {
    Model m;
    if (!cfg.generate.empty()) {
        if (!cfg.input.empty()) throw InputError("give either an input file or --generate, not both");
        auto g = generate(parse_generator(cfg.generate));
        m.ts = std::move(g.ts);
        m.objective = std::move(g.objective);
        m.run = std::move(g.run);
        m.groups = std::move(g.groups);
        m.mode = g.mode;
        return m;
    }
    if (cfg.input.empty()) throw InputError("no input: give a model file or --generate FAMILY:SIZE");
    std::string text = read_file(cfg.input);
    try {
        if (ends_with(cfg.input, ".json")) {
            auto loaded = load_model(parse_explicit(text));
            m.ts = std::move(loaded.ts);
            m.objective = std::move(loaded.objective);
            m.run = std::move(loaded.run);
            m.groups = std::move(loaded.groups);
        } else {
            lang::ExpandOptions opt;
            opt.state_cap = cfg.state_cap;
            auto e = lang::expand_program(lang::parse_program(text), opt);
            m.ts = std::move(e.ts);
            m.labels.labels = std::move(e.labels);
            m.labels.owners = std::move(e.owners);
        }
    } catch (const InputError& e) {
        throw InputError(cfg.input + ": " + e.what());
    }
    return m;
}

StateSet resolve_target(const std::string& token, const Model& m) {
    StateSet out(m.ts.size());
    if (!token.empty() && token[0] == '@') {
        auto it = m.labels.labels.find(token.substr(1));
        if (it == m.labels.labels.end()) throw InputError("--objective: unknown label '" + token.substr(1) + "'");
        return it->second;
    }
    out.insert(m.ts.lookup(token));
    return out;
}

// "kind:targets", targets separated by whitespace; "@name" selects a label.
// Parity takes "target=colour" items.
Objective parse_objective(const std::string& text, const Model& m) {
    auto colon = text.find(':');
    ObjectiveKind kind = objective_kind_from_string(text.substr(0, colon));
    std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (kind == ObjectiveKind::parity) {
        std::vector<unsigned> colours(m.ts.size(), 0);
        for (const auto& item : tokens(rest)) {
            auto eq = item.rfind('=');
            if (eq == std::string::npos) throw InputError("--objective: parity item '" + item + "' lacks '=colour'");
            unsigned c = 0;
            try {
                c = static_cast<unsigned>(std::stoul(item.substr(eq + 1)));
            } catch (const std::exception&) {
                throw InputError("--objective: bad colour in '" + item + "'");
            }
            resolve_target(item.substr(0, eq), m).for_each([&](StateId s) { colours[s.index] = c; });
        }
        return Objective::parity(std::move(colours));
    }
    StateSet target(m.ts.size());
    for (const auto& t : tokens(rest)) target |= resolve_target(t, m);
    switch (kind) {
        case ObjectiveKind::safety: return Objective::safety(std::move(target));
        case ObjectiveKind::reachability: return Objective::reachability(std::move(target));
        default: return Objective::buechi(std::move(target));
    }
}

// "s0 s1 (s2 s3)": prefix, then the loop in parentheses.
LassoRun parse_run(std::string text, const TransitionSystem& ts) {
    std::string spaced;
    for (char c : text) {
        if (c == '(' || c == ')') {
            spaced += ' ';
            spaced += c;
            spaced += ' ';
        } else {
            spaced += c;
        }
    }
    LassoRun run;
    int state = 0;  // 0 prefix, 1 loop, 2 closed
    for (const auto& t : tokens(spaced)) {
        if (t == "(") {
            if (state != 0) throw InputError("--run: unexpected '('");
            state = 1;
        } else if (t == ")") {
            if (state != 1) throw InputError("--run: unexpected ')'");
            state = 2;
        } else {
            if (state == 2) throw InputError("--run: states after the loop");
            (state == 0 ? run.prefix : run.loop).push_back(ts.lookup(t));
        }
    }
    if (state != 2) throw InputError("--run: the loop must be given in parentheses");
    require_valid_run(ts, run);
    return run;
}

struct Analysis {
    std::shared_ptr<GameContext> ctx;
    PlayerSet all;      // reported players
    PlayerSet players;  // analysed players (pruned when states)
    Model model;
};

std::optional<Analysis> prepare(const Config& cfg, std::ostream& out) {
    Model m = load(cfg);
    if (cfg.objective) m.objective = parse_objective(*cfg.objective, m);
    if (!m.objective) throw InputError("no objective: the input has none, pass --objective");
    Mode mode = mode_from_string(cfg.mode ? *cfg.mode : m.mode.value_or("pessimistic"));
    if (cfg.run && cfg.find_run) throw InputError("--run and --find-run are exclusive");
    if (cfg.run) m.run = parse_run(*cfg.run, m.ts);
    if (cfg.find_run) {
        try {
            m.run = find_violating_run(m.ts, *m.objective);
        } catch (const NoViolation&) {
            out << "nothing to explain: every run of the system satisfies the objective\n";
            return std::nullopt;
        }
    }
    if (m.run && !violates(*m.run, *m.objective))
        throw InputError("the run satisfies the objective; nothing to explain");
    if (mode != Mode::forward && !m.run) throw InputError("no run: the input has none, pass --run or --find-run");

    int grouping = (!cfg.groups_path.empty()) + cfg.embedded_groups + cfg.group_by_module + !cfg.group_by_label.empty();
    if (grouping > 1) throw InputError("choose at most one grouping option");

    Analysis a;
    a.all = PlayerSet::of_states({}, m.ts.size());
    std::vector<StateId> ids;
    for (std::uint32_t i = 0; i < m.ts.size(); ++i) ids.push_back(StateId(i));
    if (!cfg.groups_path.empty()) {
        GroupList g;
        try {
            g = parse_group_file(read_file(cfg.groups_path));
        } catch (const InputError& e) {
            throw InputError(cfg.groups_path + ": " + e.what());
        }
        a.all = resolve_grouping(ExplicitGroups{std::move(g)}, m.ts, m.labels);
    } else if (cfg.embedded_groups) {
        if (!m.groups) throw InputError("--embedded-groups: the input defines no groups");
        a.all = *m.groups;
    } else if (cfg.group_by_module) {
        a.all = resolve_grouping(ByModule{}, m.ts, m.labels);
    } else if (!cfg.group_by_label.empty()) {
        a.all = resolve_grouping(ByLabel{cfg.group_by_label}, m.ts, m.labels);
    } else {
        a.all = PlayerSet::of_states(ids, m.ts.size());
    }
    a.ctx = std::make_shared<GameContext>(m.ts, *m.objective, m.run, mode);
    a.players = a.all.kind() == PlayerKind::states && !cfg.no_prune ? prune_dummies(*a.ctx, a.all).kept : a.all;
    a.model = std::move(m);
    return a;
}

// Lifts a report over the analysed players to all reported players; pruned ones get 0.
ResponsibilityReport lift(const ResponsibilityReport& partial, const Analysis& a) {
    if (a.players.size() == a.all.size()) return partial;
    bool valued = std::all_of(partial.entries.begin(), partial.entries.end(),
                              [](const PlayerValue& e) { return e.value.has_value(); });
    ResponsibilityReport r = partial;
    r.entries.clear();
    const auto& ts = a.ctx->system();
    std::size_t k = 0;
    for (std::size_t i = 0; i < a.all.size(); ++i) {
        if (k < partial.entries.size() && partial.entries[k].members == a.all.members(i)) {
            r.entries.push_back(partial.entries[k++]);
        } else {
            std::optional<Rational> v;
            if (valued) v = Rational(0);
            r.entries.push_back({a.all.name(i, ts), a.all.members(i), v, false});
        }
    }
    return r;
}

HeuristicsConfig heuristics(const Config& cfg) {
    HeuristicsConfig h;
    h.initial_blocks = cfg.initial_blocks;
    h.select = select_heuristic_from_string(cfg.select);
    h.refine = refine_heuristic_from_string(cfg.refine);
    h.seed = cfg.seed;
    h.search_budget_log2 = cfg.search_budget;
    if (cfg.timeout_s > 0) h.deadline = Deadline::after_seconds(cfg.timeout_s);
    return h;
}

ShapleyOptions shapley_options(const Config& cfg) {
    ShapleyOptions s;
    s.player_cap = cfg.cap;
    s.threads = std::max(1U, cfg.threads);
    if (cfg.timeout_s > 0) s.deadline = Deadline::after_seconds(cfg.timeout_s);
    return s;
}

void emit(const Config& cfg, const Analysis& a, const ResponsibilityReport& report, const RefinementResult* refinement,
          std::ostream& out) {
    const auto& ts = a.ctx->system();
    if (cfg.format == "records") {
        out << format_records(report, refinement, &a.players, &ts);
    } else if (cfg.format == "dot") {
        out << format_dot(*a.ctx, report);
    } else {
        out << format_table(report);
        if (refinement && cfg.explain) {
            out << "trace:\n" << trace_to_jsonl(refinement->trace, a.players, ts);
            out << "responsible:";
            for (std::size_t atom : refinement->responsible) out << " " << a.players.name(atom, ts);
            out << "\n";
        }
    }
}

int analyse(const Config& cfg, std::ostream& out) {
    auto prepared = prepare(cfg, out);
    if (!prepared) return exit_ok;
    const Analysis& a = *prepared;
    if (cfg.command == "analyze") {
        if (a.players.size() > cfg.cap)
            throw Refusal(std::to_string(a.players.size()) + " players exceed the exact Shapley cap of " +
                          std::to_string(cfg.cap) + "; use refine for positivity");
        auto r = shapley_exact(PayoffGame(a.ctx, a.players), shapley_options(cfg));
        emit(cfg, a, lift(r, a), nullptr, out);
    } else if (cfg.command == "oracle") {
        auto r = oracle_shapley(*a.ctx, a.players, std::min<std::size_t>(cfg.cap, 20));
        emit(cfg, a, lift(r, a), nullptr, out);
    } else if (cfg.command == "refine") {
        auto rr = responsibility_via_refinement(a.ctx, a.players, heuristics(cfg), shapley_options(cfg));
        emit(cfg, a, lift(rr.report, a), &rr.refinement, out);
    } else {
        const auto& ctx = *a.ctx;
        ResponsibilityReport r;
        r.mode = ctx.mode();
        r.kind = a.players.kind();
        r.objective = ctx.objective().kind();
        for (std::size_t i = 0; i < a.players.size(); ++i)
            r.entries.push_back({a.players.name(i, ctx.system()), a.players.members(i), std::nullopt, false});
        bool states = a.players.kind() == PlayerKind::states;
        std::optional<StateSet> positive;
        if (states && ctx.mode() == Mode::optimistic && ctx.objective().kind() == ObjectiveKind::reachability) {
            positive = positivity_reach_opt(ctx);
            r.notes.push_back("positivity by the optimistic reachability test");
        } else if (states && ctx.mode() == Mode::optimistic && ctx.objective().kind() == ObjectiveKind::buechi) {
            positive = BuechiPositivity(ctx, cfg.preorder_literal).responsible_set();
            r.notes.push_back("positivity by the optimistic Buechi test");
        }
        if (positive) {
            for (auto& e : r.entries) e.positive = positive->contains(e.members.front());
        } else {
            auto res = refine_loop(a.ctx, a.players, heuristics(cfg));
            for (std::size_t atom : res.responsible) r.entries[atom].positive = true;
            r.stats = res.stats;
            r.notes.push_back("positivity by refinement");
        }
        emit(cfg, a, lift(r, a), nullptr, out);
    }
    return exit_ok;
}

int run_generate(const Config& cfg, std::ostream& out) {
    GeneratorSpec spec{family_from_string(cfg.family), cfg.size, cfg.faulty};
    if (cfg.format == "program") {
        if (spec.family == Family::clouds) {
            generate(spec);
            out << clouds_program(spec.size);
        } else if (spec.family == Family::centrifuge_analog) {
            generate(spec);
            out << centrifuge_program(spec.size, spec.faulty);
        } else {
            throw InputError("--format program: only clouds and centrifuge-analog have a module-language form");
        }
    } else {
        out << serialize_explicit(generate_doc(spec));
    }
    return exit_ok;
}

int run_export(const Config& cfg, std::ostream& out) {
    Model m = load(cfg);
    if (cfg.objective) m.objective = parse_objective(*cfg.objective, m);
    if (cfg.run) m.run = parse_run(*cfg.run, m.ts);
    if (cfg.find_run) {
        if (!m.objective) throw InputError("--find-run needs an objective");
        try {
            m.run = find_violating_run(m.ts, *m.objective);
        } catch (const NoViolation&) {
            m.run.reset();
        }
    }
    if (cfg.format == "dot") {
        Objective obj = m.objective.value_or(Objective::safety(StateSet(m.ts.size())));
        std::optional<RunPosition> pos;
        if (m.run) pos = RunPosition(*m.run, m.ts.size());
        Game g = build_game(m.ts, obj, pos ? &*pos : nullptr, StateSet(m.ts.size()), Mode::forward);
        DotOptions opt;
        opt.run = pos ? &*pos : nullptr;
        opt.objective = m.objective ? &obj : nullptr;
        opt.graph_name = "system";
        out << to_dot(g.arena, opt);
    } else {
        out << serialize_explicit(to_doc(m.ts, m.objective, m.run, m.groups));
    }
    return exit_ok;
}

void add_input(CLI::App* sub, Config& cfg) {
    sub->add_option("input", cfg.input, "model file (.json explicit, anything else module language)");
    sub->add_option("--generate", cfg.generate, "use a generated model, FAMILY:SIZE[:FAULTY]");
    sub->add_option("--objective", cfg.objective, "objective override, KIND:TARGETS");
    sub->add_option("--run", cfg.run, "run override, \"s0 s1 (s2 s3)\"");
    sub->add_flag("--find-run", cfg.find_run, "search for a violating run");
    sub->add_option("--state-cap", cfg.state_cap, "state cap for module-language expansion");
}

void add_analysis(CLI::App* sub, Config& cfg) {
    add_input(sub, cfg);
    sub->add_option("--mode", cfg.mode, "optimistic | pessimistic | forward")
        ->check(CLI::IsMember({"optimistic", "pessimistic", "forward"}));
    sub->add_option("--groups", cfg.groups_path, "grouping file");
    sub->add_flag("--embedded-groups", cfg.embedded_groups, "use the groups stored in the input");
    sub->add_flag("--group-by-module", cfg.group_by_module, "one block per owning module");
    sub->add_option("--group-by-label", cfg.group_by_label, "one block per label valuation")->delimiter(',');
    sub->add_option("--format", cfg.format, "table | records | dot")
        ->check(CLI::IsMember({"table", "records", "dot"}));
    sub->add_option("--threads", cfg.threads, "worker threads for coalition enumeration")
        ->check(CLI::Range(1U, 256U));
    sub->add_option("--timeout-s", cfg.timeout_s, "wall-clock budget in seconds, 0 for none")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", cfg.seed, "seed for randomised heuristics");
    sub->add_option("--cap", cfg.cap, "player cap for exact values")->check(CLI::Range(0, 63));
    sub->add_flag("--no-prune", cfg.no_prune, "keep dummy states as players");
    sub->add_flag("--preorder-literal", cfg.preorder_literal, "literal run-state order in the Buechi test");
    sub->add_option("--select", cfg.select, "random | max-delta | min-delta | min-frontier");
    sub->add_option("--refine", cfg.refine,
                    "random | frontier-random | frontier-max | frontier-losing | frontier-winning | frontier-lowest");
    sub->add_option("--initial-blocks", cfg.initial_blocks, "blocks of the initial partition")
        ->check(CLI::PositiveNumber);
    sub->add_option("--search-budget", cfg.search_budget, "log2 of coalitions visited per witness search")
        ->check(CLI::Range(1U, 40U));
    sub->add_flag("--explain", cfg.explain, "print the refinement trace");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Config cfg;
    CLI::App app{"Backward responsibility for counterexamples of transition systems", "backresp"};
    app.require_subcommand(1, 1);
    for (const char* name : {"analyze", "refine", "positivity", "oracle"}) {
        const char* what = std::string_view(name) == "analyze"    ? "exact Shapley values"
                           : std::string_view(name) == "refine"   ? "positivity by refinement, then exact values"
                           : std::string_view(name) == "positivity" ? "positivity set only"
                                                                    : "brute-force reference values";
        auto* sub = app.add_subcommand(name, what);
        add_analysis(sub, cfg);
        sub->callback([&cfg, name] { cfg.command = name; });
    }
    auto* gen = app.add_subcommand("generate", "print a benchmark model");
    gen->add_option("family", cfg.family, "generator family")->required();
    gen->add_option("size", cfg.size, "size parameter")->required();
    gen->add_option("--faulty", cfg.faulty, "centrifuge-analog: faulty centrifuge");
    gen->add_option("--format", cfg.format, "explicit | program")->check(CLI::IsMember({"explicit", "program"}));
    gen->callback([&cfg] {
        cfg.command = "generate";
        if (cfg.format == "table") cfg.format = "explicit";
    });
    auto* exp = app.add_subcommand("export", "print the model as explicit JSON or DOT");
    add_input(exp, cfg);
    exp->add_option("--format", cfg.format, "explicit | dot")->check(CLI::IsMember({"explicit", "dot"}));
    exp->callback([&cfg] {
        cfg.command = "export";
        if (cfg.format == "table") cfg.format = "explicit";
    });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_input_error;
    }

    try {
        if (cfg.command == "generate") return run_generate(cfg, out);
        if (cfg.command == "export") return run_export(cfg, out);
        return analyse(cfg, out);
    } catch (const Refusal& e) {
        err << "refused: " << e.what() << "\n";
        return exit_refused;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return exit_input_error;
    } catch (const WrongObjective& e) {
        err << "error: " << e.what() << "\n";
        return exit_input_error;
    }
}

}  // namespace backresp
