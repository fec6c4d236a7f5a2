#include "backresp/bench/generators.hpp"

#include <map>

#include "backresp/ingest/grouping.hpp"
#include "backresp/ingest/modlang.hpp"

namespace backresp {

std::string_view to_string(Family f) {
    switch (f) {
        case Family::clouds: return "clouds";
        case Family::exp_coalitions: return "exp-coalitions";
        case Family::frontier_stress_reach: return "frontier-stress-reach";
        case Family::frontier_stress_safety: return "frontier-stress-safety";
        case Family::almost_empty_frontier: return "almost-empty-frontier";
        case Family::centrifuge_analog: return "centrifuge-analog";
    }
    return "?";
}

Family family_from_string(std::string_view s) {
    for (auto f : {Family::clouds, Family::exp_coalitions, Family::frontier_stress_reach, Family::frontier_stress_safety,
                   Family::almost_empty_frontier, Family::centrifuge_analog})
        if (to_string(f) == s) return f;
    throw InputError("unknown generator family '" + std::string(s) + "'");
}

namespace {

// Incrementally built named graph.
class Builder {
public:
    StateId add(const std::string& name) {
        names_.push_back(name);
        succ_.emplace_back();
        return StateId(static_cast<std::uint32_t>(names_.size() - 1));
    }
    void edge(StateId a, StateId b) { succ_[a.index].push_back(b); }
    void loop(StateId a) { edge(a, a); }
    std::size_t size() const { return names_.size(); }
    TransitionSystem build() { return TransitionSystem(names_, StateId(0), succ_); }

private:
    std::vector<std::string> names_;
    std::vector<std::vector<StateId>> succ_;
};

void require_range(const GeneratorSpec& spec, std::size_t lo, std::size_t hi) {
    if (spec.size < lo || spec.size > hi)
        throw InputError(std::string(to_string(spec.family)) + " size must lie in [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "], got " + std::to_string(spec.size));
}

// Acyclic lattice of m nodes: one entry node, then layers of width two.
struct Lattice {
    std::size_t nodes;
    std::size_t last_layer() const { return nodes <= 1 ? 0 : 1 + (nodes - 2) / 2; }
    bool full_last() const { return nodes > 1 && (nodes - 1) % 2 == 0; }
    std::size_t layer(std::size_t i) const { return i == 0 ? 0 : 1 + (i - 1) / 2; }
    std::size_t side(std::size_t i) const { return i == 0 ? 0 : (i - 1) % 2; }
};

// Adds the cloud's nodes; returns them in layer order.
std::vector<StateId> add_cloud(Builder& b, const std::string& prefix, const Lattice& lat) {
    std::vector<StateId> ids;
    for (std::size_t i = 0; i < lat.nodes; ++i)
        ids.push_back(b.add(prefix + "_" + std::to_string(lat.layer(i)) + "_" + std::to_string(lat.side(i))));
    for (std::size_t i = 0; i < lat.nodes; ++i)
        for (std::size_t j = 0; j < lat.nodes; ++j)
            if (lat.layer(j) == lat.layer(i) + 1) b.edge(ids[i], ids[j]);
    return ids;
}

// Entry node plus the side-0 node of every later layer.
std::vector<StateId> spine(const std::vector<StateId>& ids, const Lattice& lat) {
    std::vector<StateId> out;
    for (std::size_t i = 0; i < lat.nodes; ++i)
        if (lat.side(i) == 0) out.push_back(ids[i]);
    return out;
}

void link_exits(Builder& b, const std::vector<StateId>& ids, const Lattice& lat, StateId exit) {
    for (std::size_t i = 0; i < lat.nodes; ++i)
        if (lat.layer(i) == lat.last_layer()) b.edge(ids[i], exit);
}

GeneratedModel clouds(std::size_t k) {
    Builder b;
    Lattice l1{k}, l2{k - 1}, l3{k - 1};
    StateId s0 = b.add("s0");
    auto c1 = add_cloud(b, "c1", l1);
    StateId crit = b.add("s_crit");
    auto c2 = add_cloud(b, "c2", l2);
    auto c3 = add_cloud(b, "c3", l3);
    StateId plus = b.add("s_plus");
    StateId minus = b.add("s_minus");
    b.edge(s0, c1.front());
    link_exits(b, c1, l1, crit);
    b.edge(crit, c2.empty() ? plus : c2.front());
    b.edge(crit, c3.empty() ? minus : c3.front());
    if (!c2.empty()) link_exits(b, c2, l2, plus);
    if (!c3.empty()) link_exits(b, c3, l3, minus);
    b.loop(plus);
    b.loop(minus);
    GeneratedModel m;
    m.ts = b.build();
    m.objective = Objective::reachability(StateSet::of(m.ts.size(), std::initializer_list<StateId>{plus}));
    LassoRun run;
    run.prefix.push_back(s0);
    for (StateId s : spine(c1, l1)) run.prefix.push_back(s);
    run.prefix.push_back(crit);
    for (StateId s : spine(c3, l3)) run.prefix.push_back(s);
    run.loop = {minus};
    m.run = run;
    m.mode = "pessimistic";
    return m;
}

GeneratedModel exp_coalitions(std::size_t n) {
    Builder b;
    StateId s0 = b.add("s0");
    std::vector<StateId> a, bb;
    for (std::size_t i = 1; i <= n; ++i) {
        a.push_back(b.add("s" + std::to_string(i) + "a"));
        bb.push_back(b.add("s" + std::to_string(i) + "b"));
    }
    StateId sf = b.add("sf");
    b.edge(s0, a[0]);
    b.edge(s0, sf);
    for (std::size_t i = 0; i < n; ++i) {
        b.edge(a[i], bb[i]);
        if (i + 1 < n) b.edge(bb[i], a[i + 1]);
        StateId back = i == 0 ? s0 : a[i - 1];
        b.edge(a[i], back);
        b.edge(bb[i], back);
    }
    b.loop(bb[n - 1]);
    b.edge(sf, a[n - 1]);
    GeneratedModel m;
    m.ts = b.build();
    m.objective = Objective::buechi(StateSet::of(m.ts.size(), std::initializer_list<StateId>{sf}));
    LassoRun run;
    run.prefix.push_back(s0);
    for (std::size_t i = 0; i < n; ++i) {
        run.prefix.push_back(a[i]);
        if (i + 1 < n) run.prefix.push_back(bb[i]);
    }
    run.loop = {bb[n - 1]};
    m.run = run;
    m.mode = "optimistic";
    return m;
}

// Chain s0 l_1..l_k w_1..w_k bad; every l may drop into a dead end, every w may jump to the goal.
GeneratedModel frontier_stress_reach(std::size_t k) {
    Builder b;
    StateId s0 = b.add("s0");
    std::vector<StateId> chain;
    for (std::size_t j = 1; j <= k; ++j) chain.push_back(b.add("l" + std::to_string(j)));
    for (std::size_t j = 1; j <= k; ++j) chain.push_back(b.add("w" + std::to_string(j)));
    StateId bad = b.add("bad"), goal = b.add("goal"), dead = b.add("dead");
    b.edge(s0, chain.front());
    for (std::size_t i = 0; i < chain.size(); ++i) {
        b.edge(chain[i], i + 1 < chain.size() ? chain[i + 1] : bad);
        b.edge(chain[i], i < k ? dead : goal);
    }
    b.loop(bad);
    b.loop(goal);
    b.loop(dead);
    GeneratedModel m;
    m.ts = b.build();
    m.objective = Objective::reachability(StateSet::of(m.ts.size(), std::initializer_list<StateId>{goal}));
    LassoRun run;
    run.prefix.push_back(s0);
    run.prefix.insert(run.prefix.end(), chain.begin(), chain.end());
    run.loop = {bad};
    m.run = run;
    m.mode = "pessimistic";
    return m;
}

// Chain s0 y_1..y_k bad; every y may also fall into bad or visit its decoy w, which can return or escape.
GeneratedModel frontier_stress_safety(std::size_t k) {
    Builder b;
    StateId s0 = b.add("s0");
    std::vector<StateId> y, w;
    for (std::size_t j = 1; j <= k; ++j) y.push_back(b.add("y" + std::to_string(j)));
    for (std::size_t j = 1; j <= k; ++j) w.push_back(b.add("w" + std::to_string(j)));
    StateId safe = b.add("safe"), safe2 = b.add("safe2"), bad = b.add("bad");
    b.edge(s0, y.front());
    for (std::size_t j = 0; j < k; ++j) {
        b.edge(y[j], j + 1 < k ? y[j + 1] : bad);
        b.edge(y[j], bad);
        b.edge(y[j], w[j]);
        b.edge(w[j], y[j]);
        b.edge(w[j], safe);
        b.edge(w[j], safe2);
    }
    b.loop(safe);
    b.loop(safe2);
    b.loop(bad);
    GeneratedModel m;
    m.ts = b.build();
    m.objective = Objective::safety(StateSet::of(m.ts.size(), std::initializer_list<StateId>{bad}));
    LassoRun run;
    run.prefix.push_back(s0);
    run.prefix.insert(run.prefix.end(), y.begin(), y.end());
    run.loop = {bad};
    m.run = run;
    m.mode = "pessimistic";
    return m;
}

// r decides the outcome; the decoys d_i look identical from the frontier but are never needed.
GeneratedModel almost_empty_frontier(std::size_t k) {
    Builder b;
    StateId s0 = b.add("s0");
    std::vector<StateId> d;
    for (std::size_t i = 1; i < k; ++i) d.push_back(b.add("d" + std::to_string(i)));
    StateId r = b.add("r");
    StateId bad = b.add("bad"), goal = b.add("goal"), dead = b.add("dead");
    b.edge(s0, r);
    b.edge(r, bad);
    b.edge(r, goal);
    for (StateId x : d) {
        b.edge(r, x);
        b.edge(x, goal);
        b.edge(x, dead);
    }
    b.loop(bad);
    b.loop(goal);
    b.loop(dead);
    GeneratedModel m;
    m.ts = b.build();
    m.objective = Objective::reachability(StateSet::of(m.ts.size(), std::initializer_list<StateId>{goal}));
    m.run = LassoRun{{s0, r}, {bad}};
    m.mode = "pessimistic";
    return m;
}

GeneratedModel centrifuge(std::size_t c, std::optional<std::size_t> faulty) {
    auto expanded = lang::expand_program(lang::parse_program(centrifuge_program(c, faulty)));
    GeneratedModel m;
    m.ts = expanded.ts;
    m.objective = Objective::reachability(expanded.labels.at("correct"));
    try {
        m.run = find_violating_run(m.ts, m.objective);
    } catch (const NoViolation&) {
        m.run.reset();
    }
    m.groups = resolve_grouping(ByModule{}, m.ts, {expanded.labels, expanded.owners});
    m.mode = "pessimistic";
    return m;
}

}  // namespace

GeneratedModel generate(const GeneratorSpec& spec) {
    switch (spec.family) {
        case Family::clouds: require_range(spec, 1, 5'000'000); return clouds(spec.size);
        case Family::exp_coalitions: require_range(spec, 1, 30); return exp_coalitions(spec.size);
        case Family::frontier_stress_reach: require_range(spec, 1, 1'000'000); return frontier_stress_reach(spec.size);
        case Family::frontier_stress_safety: require_range(spec, 1, 1'000'000); return frontier_stress_safety(spec.size);
        case Family::almost_empty_frontier: require_range(spec, 2, 1'000'000); return almost_empty_frontier(spec.size);
        case Family::centrifuge_analog:
            require_range(spec, 1, 4);
            if (spec.faulty && (*spec.faulty < 1 || *spec.faulty > spec.size))
                throw InputError("faulty centrifuge index must lie in [1, " + std::to_string(spec.size) + "]");
            return centrifuge(spec.size, spec.faulty);
    }
    throw InputError("unknown generator family");
}

ExplicitModelDoc generate_doc(const GeneratorSpec& spec) {
    auto m = generate(spec);
    return to_doc(m.ts, m.objective, m.run, m.groups);
}

std::string clouds_program(std::size_t k) {
    if (k < 1) throw InputError("clouds size must be at least 1");
    const Lattice lat[] = {{k}, {k - 1}, {k - 1}};
    const std::size_t max_layer = lat[0].last_layer();
    const int region_of[] = {1, 3, 4};
    const int exit_of[] = {2, 5, 6};
    std::string p;
    p += "// clouds(" + std::to_string(k) + "): s0 -> cloud 1 -> s_crit; s_crit -> cloud 2 -> s_plus and s_crit -> cloud 3 -> s_minus.\n";
    p += "// Regions: 0 s0, 1-4 as named below, 5 s_plus, 6 s_minus. Each cloud is an acyclic lattice of width two.\n";
    p += "mdp\n\n";
    for (int c = 0; c < 3; ++c) {
        p += "const int LAST" + std::to_string(c + 1) + " = " + std::to_string(lat[c].last_layer()) + ";\n";
        p += "const bool FULL" + std::to_string(c + 1) + " = " + (lat[c].full_last() ? "true" : "false") + ";\n";
    }
    p += "\nmodule walk\n";
    p += "  region : [0..6] init 0;\n";
    p += "  layer : [0.." + std::to_string(max_layer) + "] init 0;\n";
    p += "  side : [0..1] init 0;\n";
    p += "  [] region = 0 -> (region'=1);\n";
    for (int c = 0; c < 3; ++c) {
        if (lat[c].nodes == 0) continue;
        const std::string r = std::to_string(region_of[c]), last = "LAST" + std::to_string(c + 1),
                          full = "FULL" + std::to_string(c + 1);
        p += "  [] region = " + r + " & layer < " + last + " -> (layer'=layer + 1) & (side'=0);\n";
        p += "  [] region = " + r + " & layer < " + last + " & (layer + 1 < " + last + " | " + full +
             ") -> (layer'=layer + 1) & (side'=1);\n";
        p += "  [] region = " + r + " & layer = " + last + " -> (region'=" + std::to_string(exit_of[c]) +
             ") & (layer'=0) & (side'=0);\n";
    }
    p += "  [] region = 2 -> (region'=" + std::string(lat[1].nodes ? "3" : "5") + ");\n";
    p += "  [] region = 2 -> (region'=" + std::string(lat[2].nodes ? "4" : "6") + ");\n";
    p += "  [] region = 5 | region = 6 -> true;\n";
    p += "endmodule\n\n";
    p += "label \"crit\" = region = 2;\n";
    p += "label \"plus\" = region = 5;\n";
    p += "label \"minus\" = region = 6;\n";
    return p;
}

std::string centrifuge_program(std::size_t c, std::optional<std::size_t> faulty) {
    if (c < 1) throw InputError("at least one centrifuge is needed");
    auto idx = [](std::size_t i) { return std::to_string(i); };
    std::string p;
    p += "// Centrifuge lab analog (a reconstruction at small scale, not the original model).\n";
    p += "// A scheduler hands one clean and one infected sample, one at a time, to the centrifuges. A sample soaks\n";
    p += "// for three minutes (infected: 2 or 3 cm per minute, clean: 0 or 1 cm; chosen\n";
    p += "// nondeterministically) and is reported infected when it soaked at least 4 cm.\n";
    if (faulty) p += "// Centrifuge " + idx(*faulty) + " tests t <= 3 instead of t = 3 and may report early.\n";
    p += "mdp\n\nconst int CLEAN = 1;\nconst int INFECTED = 1;\nconst int SAMPLES = CLEAN + INFECTED;\n\n";
    std::string idle;
    for (std::size_t i = 1; i <= c; ++i) idle += (i > 1 ? " & " : "") + std::string("p") + idx(i) + " = 0";
    p += "formula idle = " + idle + ";\n";
    p += "formula finished = clean_left = 0 & infected_left = 0 & idle;\n\n";
    p += "module scheduler\n  clean_left : [0..CLEAN] init CLEAN;\n  infected_left : [0..INFECTED] init INFECTED;\n";
    p += "  owner idle;\n";
    for (std::size_t i = 1; i <= c; ++i) {
        p += "  [load_clean_" + idx(i) + "] idle & clean_left > 0 -> (clean_left'=clean_left - 1);\n";
        p += "  [load_infected_" + idx(i) + "] idle & infected_left > 0 -> (infected_left'=infected_left - 1);\n";
    }
    p += "  [] finished -> true;\nendmodule\n";
    for (std::size_t i = 1; i <= c; ++i) {
        const std::string n = idx(i), ph = "p" + n, k = "k" + n, t = "t" + n, d = "d" + n;
        const std::string done = faulty && *faulty == i ? t + " <= 3" : t + " = 3";
        const std::string reset = "(" + ph + "'=0) & (" + k + "'=false) & (" + t + "'=0) & (" + d + "'=0)";
        p += "\nmodule centrifuge_" + n + "\n";
        p += "  " + ph + " : [0..1] init 0;\n  " + k + " : bool init false;\n  " + t + " : [0..3] init 0;\n  " + d +
             " : [0..9] init 0;\n";
        p += "  owner " + ph + " = 1;\n";
        p += "  [load_clean_" + n + "] " + ph + " = 0 -> (" + ph + "'=1) & (" + k + "'=false);\n";
        p += "  [load_infected_" + n + "] " + ph + " = 0 -> (" + ph + "'=1) & (" + k + "'=true);\n";
        p += "  [] " + ph + " = 1 & " + t + " < 3 & " + k + " -> (" + t + "'=" + t + " + 1) & (" + d + "'=" + d + " + 2);\n";
        p += "  [] " + ph + " = 1 & " + t + " < 3 & " + k + " -> (" + t + "'=" + t + " + 1) & (" + d + "'=" + d + " + 3);\n";
        p += "  [] " + ph + " = 1 & " + t + " < 3 & !" + k + " -> (" + t + "'=" + t + " + 1);\n";
        p += "  [] " + ph + " = 1 & " + t + " < 3 & !" + k + " -> (" + t + "'=" + t + " + 1) & (" + d + "'=" + d + " + 1);\n";
        p += "  [report_infected_" + n + "] " + ph + " = 1 & " + done + " & " + d + " >= 4 -> " + reset + ";\n";
        p += "  [report_clean_" + n + "] " + ph + " = 1 & " + done + " & " + d + " < 4 -> " + reset + ";\n";
        p += "endmodule\n";
    }
    p += "\nmodule counter\n  clean_results : [0..SAMPLES] init 0;\n  infected_results : [0..SAMPLES] init 0;\n";
    for (std::size_t i = 1; i <= c; ++i) {
        p += "  [report_clean_" + idx(i) + "] true -> (clean_results'=clean_results + 1);\n";
        p += "  [report_infected_" + idx(i) + "] true -> (infected_results'=infected_results + 1);\n";
    }
    p += "endmodule\n\n";
    p += "label \"done\" = finished;\n";
    p += "label \"correct\" = finished & clean_results = CLEAN & infected_results = INFECTED;\n";
    return p;
}

}  // namespace backresp
