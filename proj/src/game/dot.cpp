#include "backresp/game/dot.hpp"

#include <sstream>

namespace backresp {

namespace {

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string to_dot(const GameArena& arena, const DotOptions& opt) {
    const auto& g = arena.graph;
    std::ostringstream out;
    out << "digraph " << quoted(opt.graph_name) << " {\n";
    out << "  rankdir=LR;\n";
    out << "  __init [shape=point];\n";
    out << "  __init -> n" << g.initial().index << ";\n";
    for (std::uint32_t i = 0; i < g.size(); ++i) {
        StateId s(i);
        std::string label = quoted(g.name(s));
        if (opt.values && (*opt.values)[i]) label.insert(label.size() - 1, "\\n" + fraction_string(*(*opt.values)[i]));
        out << "  n" << i << " [label=" << label;
        out << ", shape=" << (arena.owner(s) == Player::sat ? "box" : "ellipse");
        if (opt.objective) {
            if (opt.objective->kind() == ObjectiveKind::parity)
                out << ", xlabel=\"c" << opt.objective->colour(s) << "\"";
            else if (opt.objective->target().contains(s))
                out << ", peripheries=2";
        }
        if (opt.highlight && opt.highlight->contains(s)) out << ", style=filled, fillcolor=\"#f4a261\"";
        out << "];\n";
    }
    for (std::uint32_t i = 0; i < g.size(); ++i) {
        StateId s(i);
        for (StateId t : g.successors(s)) {
            out << "  n" << i << " -> n" << t.index;
            if (opt.run && opt.run->on_run(s) && opt.run->successor(s) == t) out << " [color=red, penwidth=2]";
            out << ";\n";
        }
    }
    out << "}\n";
    return out.str();
}

}  // namespace backresp
