#include "backresp/io/report_io.hpp"

#include <algorithm>
#include <json.hpp>
#include <sstream>

#include "backresp/game/dot.hpp"

namespace backresp {

namespace {

StateId first_member(const PlayerValue& e) {
    return e.members.empty() ? StateId(UINT32_MAX) : *std::min_element(e.members.begin(), e.members.end());
}

std::string player_kind(PlayerKind k) { return k == PlayerKind::states ? "states" : "blocks"; }

}  // namespace

std::string format_table(const ResponsibilityReport& report) {
    std::vector<const PlayerValue*> rows;
    for (const auto& e : report.entries) rows.push_back(&e);
    std::stable_sort(rows.begin(), rows.end(), [](const PlayerValue* a, const PlayerValue* b) {
        Rational va = a->value.value_or(a->positive ? Rational(1) : Rational(0));
        Rational vb = b->value.value_or(b->positive ? Rational(1) : Rational(0));
        if (va != vb) return va > vb;
        return first_member(*a) < first_member(*b);
    });
    std::size_t w_name = 6, w_frac = 5;
    for (const auto* r : rows) {
        w_name = std::max(w_name, r->name.size());
        if (r->value) w_frac = std::max(w_frac, fraction_string(*r->value).size());
    }
    std::ostringstream out;
    auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w > s.size() ? w - s.size() : 0, ' '); };
    out << pad("player", w_name) << "  " << pad("value", w_frac) << "  " << pad("approx", 8) << "  positive\n";
    for (const auto* r : rows) {
        std::string frac = r->value ? fraction_string(*r->value) : "-";
        std::string dec = r->value ? decimal_string(*r->value) : "-";
        out << pad(r->name, w_name) << "  " << pad(frac, w_frac) << "  " << pad(dec, 8) << "  "
            << (r->positive ? "yes" : "no") << "\n";
    }
    for (const auto& n : report.notes) out << "note: " << n << "\n";
    return out.str();
}

std::string format_records(const ResponsibilityReport& report, const RefinementResult* refinement,
                           const PlayerSet* atoms, const TransitionSystem* ts) {
    using nlohmann::ordered_json;
    ordered_json doc;
    doc["schema"] = "backresp-responsibility/1";
    doc["mode"] = std::string(to_string(report.mode));
    doc["objective"] = std::string(to_string(report.objective));
    doc["players"] = player_kind(report.kind);
    ordered_json entries = ordered_json::array();
    for (const auto& e : report.entries) {
        ordered_json j;
        j["name"] = e.name;
        if (report.kind == PlayerKind::blocks) {
            ordered_json members = ordered_json::array();
            for (StateId s : e.members) members.push_back(ts ? ts->name(s) : std::to_string(s.index));
            j["members"] = members;
        }
        if (e.value) {
            j["value_numerator"] = boost::multiprecision::numerator(*e.value).str();
            j["value_denominator"] = boost::multiprecision::denominator(*e.value).str();
            j["value_decimal"] = decimal_string(*e.value);
        } else {
            j["value_numerator"] = nullptr;
            j["value_denominator"] = nullptr;
            j["value_decimal"] = nullptr;
        }
        j["positive"] = e.positive;
        entries.push_back(j);
    }
    doc["entries"] = entries;
    doc["stats"] = {{"games_solved", report.stats.games_solved}, {"memo_hits", report.stats.memo_hits}};
    doc["notes"] = report.notes;
    if (refinement && atoms && ts) {
        ordered_json r;
        r["iterations"] = refinement->iterations;
        ordered_json resp = ordered_json::array();
        for (std::size_t a : refinement->responsible) resp.push_back(atoms->name(a, *ts));
        r["responsible"] = resp;
        ordered_json trace = ordered_json::array();
        std::istringstream lines(trace_to_jsonl(refinement->trace, *atoms, *ts));
        for (std::string line; std::getline(lines, line);) trace.push_back(ordered_json::parse(line));
        r["trace"] = trace;
        doc["refinement"] = r;
    }
    return doc.dump(2) + "\n";
}

std::string format_dot(const GameContext& ctx, const ResponsibilityReport& report) {
    const auto& ts = ctx.system();
    StateSet positive(ts.size());
    std::vector<std::optional<Rational>> values(ts.size());
    for (const auto& e : report.entries)
        for (StateId s : e.members) {
            values[s.index] = e.value;
            if (e.positive) positive.insert(s);
        }
    Game view = build_game(ts, ctx.objective(), ctx.positions(), positive, Mode::forward);
    DotOptions opt;
    opt.run = ctx.positions();
    opt.objective = &ctx.objective();
    opt.values = &values;
    opt.highlight = positive;
    opt.graph_name = "responsibility";
    return to_dot(view.arena, opt);
}

}  // namespace backresp
