#include "backresp/ingest/explicit.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

namespace backresp {

using nlohmann::json;

namespace {

std::string line_col(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

// Parses JSON, rejecting duplicate object keys.
json parse_json(std::string_view text) {
    std::vector<std::set<std::string>> keys;
    auto cb = [&](int, json::parse_event_t ev, json& parsed) {
        if (ev == json::parse_event_t::object_start) keys.emplace_back();
        else if (ev == json::parse_event_t::object_end) keys.pop_back();
        else if (ev == json::parse_event_t::key && !keys.back().insert(parsed.get<std::string>()).second)
            throw InputError("duplicate key \"" + parsed.get<std::string>() + "\"");
        return true;
    };
    try {
        return json::parse(text.begin(), text.end(), cb);
    } catch (const json::parse_error& e) {
        std::string what = e.what();
        auto colon = what.find("syntax error");
        throw InputError(line_col(text, e.byte == 0 ? 0 : e.byte - 1) + ": " +
                         (colon == std::string::npos ? what : what.substr(colon)));
    }
}

[[noreturn]] void fail(const std::string& pointer, const std::string& msg) {
    throw InputError((pointer.empty() ? "/" : pointer) + ": " + msg);
}

void only_fields(const json& obj, const std::string& at, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) fail(at, "expected an object");
    for (const auto& [k, v] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || k == a;
        if (!ok) fail(at + "/" + k, "unknown field \"" + k + "\"");
    }
}

std::string get_string(const json& v, const std::string& at) {
    if (!v.is_string()) fail(at, "expected a string");
    return v.get<std::string>();
}

std::vector<std::string> get_strings(const json& v, const std::string& at) {
    if (!v.is_array()) fail(at, "expected an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get_string(v[i], at + "/" + std::to_string(i)));
    return out;
}

const json& required(const json& obj, const std::string& at, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(at, std::string("missing field \"") + key + "\"");
    return *it;
}

GroupList get_groups(const json& v, const std::string& at) {
    if (!v.is_object()) fail(at, "expected an object mapping block names to state arrays");
    GroupList out;
    for (const auto& [k, members] : v.items()) out.emplace_back(k, get_strings(members, at + "/" + k));
    return out;
}

StateId resolve(const TransitionSystem& ts, const std::string& name, const std::string& at) {
    auto id = ts.find(name);
    if (!id) fail(at, "unknown state " + name);
    return *id;
}

std::string quoted(const std::string& s) { return json(s).dump(); }

std::string inline_list(const std::vector<std::string>& xs) {
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + quoted(xs[i]);
    return out + "]";
}

}  // namespace

ExplicitModelDoc parse_explicit(std::string_view text) {
    json root = parse_json(text);
    only_fields(root, "", {"states", "initial", "transitions", "objective", "run", "groups"});
    ExplicitModelDoc doc;
    doc.states = get_strings(required(root, "", "states"), "/states");
    doc.initial = get_string(required(root, "", "initial"), "/initial");
    const json& tr = required(root, "", "transitions");
    if (!tr.is_array()) fail("/transitions", "expected an array of [from, to] pairs");
    for (std::size_t i = 0; i < tr.size(); ++i) {
        std::string at = "/transitions/" + std::to_string(i);
        auto pair = get_strings(tr[i], at);
        if (pair.size() != 2) fail(at, "expected a [from, to] pair");
        doc.transitions.emplace_back(pair[0], pair[1]);
    }
    if (auto it = root.find("objective"); it != root.end()) {
        only_fields(*it, "/objective", {"kind", "target", "colours"});
        ObjectiveDoc o;
        try {
            o.kind = objective_kind_from_string(get_string(required(*it, "/objective", "kind"), "/objective/kind"));
        } catch (const InputError& e) {
            fail("/objective/kind", e.what());
        }
        if (o.kind == ObjectiveKind::parity) {
            if (it->contains("target")) fail("/objective/target", "parity objectives take \"colours\"");
            const json& cols = required(*it, "/objective", "colours");
            if (!cols.is_object()) fail("/objective/colours", "expected an object mapping states to colours");
            for (const auto& [k, v] : cols.items()) {
                if (!v.is_number_unsigned()) fail("/objective/colours/" + k, "expected a non-negative integer");
                o.colours[k] = v.get<unsigned>();
            }
        } else {
            if (it->contains("colours")) fail("/objective/colours", "only parity objectives take \"colours\"");
            o.target = get_strings(required(*it, "/objective", "target"), "/objective/target");
        }
        doc.objective = std::move(o);
    }
    if (auto it = root.find("run"); it != root.end()) {
        only_fields(*it, "/run", {"prefix", "loop"});
        RunDoc r;
        if (it->contains("prefix")) r.prefix = get_strings((*it)["prefix"], "/run/prefix");
        r.loop = get_strings(required(*it, "/run", "loop"), "/run/loop");
        doc.run = std::move(r);
    }
    if (auto it = root.find("groups"); it != root.end()) doc.groups = get_groups(*it, "/groups");
    return doc;
}

std::string serialize_explicit(const ExplicitModelDoc& doc) {
    std::ostringstream out;
    out << "{\n  \"states\": " << inline_list(doc.states) << ",\n";
    out << "  \"initial\": " << quoted(doc.initial) << ",\n";
    out << "  \"transitions\": [";
    for (std::size_t i = 0; i < doc.transitions.size(); ++i)
        out << (i ? ",\n    " : "\n    ") << "[" << quoted(doc.transitions[i].first) << ", "
            << quoted(doc.transitions[i].second) << "]";
    out << (doc.transitions.empty() ? "]" : "\n  ]");
    if (doc.objective) {
        const auto& o = *doc.objective;
        out << ",\n  \"objective\": {\"kind\": " << quoted(std::string(to_string(o.kind)));
        if (o.kind == ObjectiveKind::parity) {
            out << ", \"colours\": {";
            bool first = true;
            for (const auto& [k, v] : o.colours) {
                out << (first ? "" : ", ") << quoted(k) << ": " << v;
                first = false;
            }
            out << "}}";
        } else {
            out << ", \"target\": " << inline_list(o.target) << "}";
        }
    }
    if (doc.run)
        out << ",\n  \"run\": {\"prefix\": " << inline_list(doc.run->prefix) << ", \"loop\": " << inline_list(doc.run->loop)
            << "}";
    if (doc.groups) {
        out << ",\n  \"groups\": {";
        for (std::size_t i = 0; i < doc.groups->size(); ++i)
            out << (i ? ",\n    " : "\n    ") << quoted((*doc.groups)[i].first) << ": "
                << inline_list((*doc.groups)[i].second);
        out << (doc.groups->empty() ? "}" : "\n  }");
    }
    out << "\n}\n";
    return out.str();
}

Objective resolve_objective(const ObjectiveDoc& doc, const TransitionSystem& ts) {
    if (doc.kind == ObjectiveKind::parity) {
        std::vector<unsigned> colours(ts.size(), 0);
        for (const auto& [name, c] : doc.colours) colours[resolve(ts, name, "/objective/colours/" + name).index] = c;
        return Objective::parity(std::move(colours));
    }
    StateSet target(ts.size());
    for (std::size_t i = 0; i < doc.target.size(); ++i)
        target.insert(resolve(ts, doc.target[i], "/objective/target/" + std::to_string(i)));
    switch (doc.kind) {
        case ObjectiveKind::safety: return Objective::safety(target);
        case ObjectiveKind::reachability: return Objective::reachability(target);
        default: return Objective::buechi(target);
    }
}

LassoRun resolve_run(const RunDoc& doc, const TransitionSystem& ts) {
    LassoRun run;
    for (std::size_t i = 0; i < doc.prefix.size(); ++i)
        run.prefix.push_back(resolve(ts, doc.prefix[i], "/run/prefix/" + std::to_string(i)));
    for (std::size_t i = 0; i < doc.loop.size(); ++i)
        run.loop.push_back(resolve(ts, doc.loop[i], "/run/loop/" + std::to_string(i)));
    auto check = validate_run(ts, run);
    if (!check.ok) fail("/run", check.message);
    return run;
}

PlayerSet resolve_groups(const GroupList& groups, const TransitionSystem& ts) {
    std::vector<std::pair<std::string, std::vector<StateId>>> blocks;
    std::vector<int> seen(ts.size(), -1);
    for (std::size_t b = 0; b < groups.size(); ++b) {
        const auto& [name, members] = groups[b];
        if (members.empty()) fail("/groups/" + name, "block is empty");
        std::vector<StateId> ids;
        for (std::size_t i = 0; i < members.size(); ++i) {
            std::string at = "/groups/" + name + "/" + std::to_string(i);
            StateId s = resolve(ts, members[i], at);
            if (seen[s.index] >= 0)
                fail(at, "state " + members[i] + " is already in block " + groups[static_cast<std::size_t>(seen[s.index])].first);
            seen[s.index] = static_cast<int>(b);
            ids.push_back(s);
        }
        blocks.emplace_back(name, std::move(ids));
    }
    std::string missing;
    for (std::uint32_t i = 0; i < ts.size(); ++i)
        if (seen[i] < 0) missing += (missing.empty() ? "" : ", ") + ts.name(StateId(i));
    if (!missing.empty()) fail("/groups", "groups do not cover states " + missing);
    return PlayerSet::of_blocks(std::move(blocks), ts.size());
}

LoadedModel load_model(const ExplicitModelDoc& doc) {
    std::map<std::string, std::uint32_t> index;
    for (std::size_t i = 0; i < doc.states.size(); ++i)
        if (!index.emplace(doc.states[i], static_cast<std::uint32_t>(i)).second)
            fail("/states/" + std::to_string(i), "duplicate state " + doc.states[i]);
    auto id_of = [&](const std::string& name, const std::string& at) {
        auto it = index.find(name);
        if (it == index.end()) fail(at, "unknown state " + name);
        return StateId(it->second);
    };
    std::vector<std::vector<StateId>> succ(doc.states.size());
    for (std::size_t i = 0; i < doc.transitions.size(); ++i) {
        std::string at = "/transitions/" + std::to_string(i);
        StateId a = id_of(doc.transitions[i].first, at + "/0");
        succ[a.index].push_back(id_of(doc.transitions[i].second, at + "/1"));
    }
    LoadedModel m;
    StateId init = id_of(doc.initial, "/initial");
    m.ts = TransitionSystem(doc.states, init, std::move(succ));
    if (doc.objective) m.objective = resolve_objective(*doc.objective, m.ts);
    if (doc.run) m.run = resolve_run(*doc.run, m.ts);
    if (doc.groups) m.groups = resolve_groups(*doc.groups, m.ts);
    return m;
}

ExplicitModelDoc to_doc(const TransitionSystem& ts, const std::optional<Objective>& objective,
                        const std::optional<LassoRun>& run, const std::optional<PlayerSet>& groups) {
    ExplicitModelDoc doc;
    doc.states = ts.names();
    doc.initial = ts.name(ts.initial());
    for (std::uint32_t i = 0; i < ts.size(); ++i)
        for (StateId t : ts.successors(StateId(i))) doc.transitions.emplace_back(ts.name(StateId(i)), ts.name(t));
    if (objective) {
        ObjectiveDoc o;
        o.kind = objective->kind();
        if (o.kind == ObjectiveKind::parity) {
            for (std::uint32_t i = 0; i < ts.size(); ++i)
                if (objective->colour(StateId(i)) != 0) o.colours[ts.name(StateId(i))] = objective->colour(StateId(i));
        } else {
            objective->target().for_each([&](StateId s) { o.target.push_back(ts.name(s)); });
        }
        doc.objective = std::move(o);
    }
    if (run) {
        RunDoc r;
        for (StateId s : run->prefix) r.prefix.push_back(ts.name(s));
        for (StateId s : run->loop) r.loop.push_back(ts.name(s));
        doc.run = std::move(r);
    }
    if (groups) {
        GroupList g;
        for (std::size_t i = 0; i < groups->size(); ++i) {
            std::vector<std::string> names;
            for (StateId s : groups->members(i)) names.push_back(ts.name(s));
            g.emplace_back(groups->name(i, ts), std::move(names));
        }
        doc.groups = std::move(g);
    }
    return doc;
}

GroupList parse_group_file(std::string_view text) { return get_groups(parse_json(text), ""); }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace backresp
