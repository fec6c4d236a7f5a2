#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <set>
#include <unordered_map>

#include "backresp/errors.hpp"
#include "backresp/ingest/modlang.hpp"

namespace backresp::lang {

namespace {

using Valuation = std::vector<std::int64_t>;

enum class Type { integer, boolean };

const char* type_name(Type t) { return t == Type::integer ? "int" : "bool"; }

[[noreturn]] void error_at(const Expr& e, const std::string& msg) {
    throw InputError("line " + std::to_string(e.line) + ", column " + std::to_string(e.column) + ": " + msg);
}

// Expression with names resolved to variable slots or folded constants.
struct Compiled {
    Op op = Op::int_lit;
    std::int64_t value = 0;  // literal, or slot for Op::name
    std::vector<Compiled> args;

    std::int64_t eval(const Valuation& v) const {
        switch (op) {
            case Op::int_lit:
            case Op::bool_lit: return value;
            case Op::name: return v[static_cast<std::size_t>(value)];
            case Op::neg: return -args[0].eval(v);
            case Op::lnot: return !args[0].eval(v);
            case Op::add: return args[0].eval(v) + args[1].eval(v);
            case Op::sub: return args[0].eval(v) - args[1].eval(v);
            case Op::mul: return args[0].eval(v) * args[1].eval(v);
            case Op::eq: return args[0].eval(v) == args[1].eval(v);
            case Op::ne: return args[0].eval(v) != args[1].eval(v);
            case Op::lt: return args[0].eval(v) < args[1].eval(v);
            case Op::le: return args[0].eval(v) <= args[1].eval(v);
            case Op::gt: return args[0].eval(v) > args[1].eval(v);
            case Op::ge: return args[0].eval(v) >= args[1].eval(v);
            case Op::land: return args[0].eval(v) && args[1].eval(v);
            case Op::lor: return args[0].eval(v) || args[1].eval(v);
            case Op::implies: return !args[0].eval(v) || args[1].eval(v);
            case Op::ite: return args[0].eval(v) ? args[1].eval(v) : args[2].eval(v);
            case Op::min:
            case Op::max: {
                std::int64_t r = args[0].eval(v);
                for (std::size_t i = 1; i < args.size(); ++i)
                    r = op == Op::min ? std::min(r, args[i].eval(v)) : std::max(r, args[i].eval(v));
                return r;
            }
        }
        return 0;
    }
};

struct Slot {
    std::string name;
    std::size_t module;
    Type type;
    std::int64_t low, high;
};

class Compiler {
public:
    explicit Compiler(const Program& p) : program_(p) {
        for (const auto& c : p.constants) declare(c.name, c.line), const_decl_[c.name] = &c;
        for (const auto& f : p.formulas) declare(f.name, f.line), formula_decl_[f.name] = &f;
        for (std::size_t m = 0; m < p.modules.size(); ++m)
            for (const auto& v : p.modules[m].variables) {
                declare(v.name, v.line);
                slot_of_[v.name] = slots_.size();
                slots_.push_back({v.name, m, v.is_bool ? Type::boolean : Type::integer, 0, 1});
            }
        for (auto& s : slots_) {
            const VarDecl& v = decl_of(s);
            if (s.type == Type::integer) {
                s.low = constant(*v.low, Type::integer);
                s.high = constant(*v.high, Type::integer);
                if (s.low > s.high)
                    throw InputError("line " + std::to_string(v.line) + ": variable " + s.name + " has empty range");
            }
        }
    }

    const std::vector<Slot>& slots() const { return slots_; }
    std::optional<std::size_t> slot(const std::string& name) const {
        auto it = slot_of_.find(name);
        if (it == slot_of_.end()) return std::nullopt;
        return it->second;
    }

    const VarDecl& decl_of(const Slot& s) const {
        for (const auto& v : program_.modules[s.module].variables)
            if (v.name == s.name) return v;
        throw std::logic_error("slot without declaration");
    }

    Compiled compile(const Expr& e, Type want) {
        Type got;
        Compiled c = infer(e, got);
        if (got != want)
            error_at(e, std::string("expected a ") + type_name(want) + " expression, found " + type_name(got));
        return c;
    }

    std::int64_t constant(const Expr& e, Type want) {
        Compiled c = compile(e, want);
        if (!is_static(c)) error_at(e, "expected a constant expression");
        return c.eval({});
    }

private:
    void declare(const std::string& name, int line) {
        if (!names_.insert(name).second)
            throw InputError("line " + std::to_string(line) + ": name " + name + " is declared twice");
    }

    static bool is_static(const Compiled& c) {
        if (c.op == Op::name) return false;
        for (const auto& a : c.args)
            if (!is_static(a)) return false;
        return true;
    }

    Compiled infer(const Expr& e, Type& type) {
        Compiled c;
        c.op = e.op;
        auto arg = [&](std::size_t i, Type want) { c.args.push_back(compile(*e.args[i], want)); };
        switch (e.op) {
            case Op::int_lit:
                c.value = e.value;
                type = Type::integer;
                return c;
            case Op::bool_lit:
                c.value = e.value;
                type = Type::boolean;
                return c;
            case Op::name: return resolve(e, type);
            case Op::neg:
                arg(0, Type::integer);
                type = Type::integer;
                return c;
            case Op::lnot:
                arg(0, Type::boolean);
                type = Type::boolean;
                return c;
            case Op::add: case Op::sub: case Op::mul:
                arg(0, Type::integer);
                arg(1, Type::integer);
                type = Type::integer;
                return c;
            case Op::lt: case Op::le: case Op::gt: case Op::ge:
                arg(0, Type::integer);
                arg(1, Type::integer);
                type = Type::boolean;
                return c;
            case Op::eq: case Op::ne: {
                Type lt;
                c.args.push_back(infer(*e.args[0], lt));
                arg(1, lt);
                type = Type::boolean;
                return c;
            }
            case Op::land: case Op::lor: case Op::implies:
                arg(0, Type::boolean);
                arg(1, Type::boolean);
                type = Type::boolean;
                return c;
            case Op::ite: {
                arg(0, Type::boolean);
                c.args.push_back(infer(*e.args[1], type));
                arg(2, type);
                return c;
            }
            case Op::min: case Op::max:
                for (std::size_t i = 0; i < e.args.size(); ++i) arg(i, Type::integer);
                type = Type::integer;
                return c;
        }
        error_at(e, "unsupported expression");
    }

    Compiled resolve(const Expr& e, Type& type) {
        if (auto s = slot(e.name)) {
            Compiled c;
            c.op = Op::name;
            c.value = static_cast<std::int64_t>(*s);
            type = slots_[*s].type;
            return c;
        }
        if (active_.count(e.name)) error_at(e, "definition of " + e.name + " refers to itself");
        if (auto it = const_decl_.find(e.name); it != const_decl_.end()) {
            active_.insert(e.name);
            type = it->second->is_bool ? Type::boolean : Type::integer;
            Compiled value = compile(*it->second->value, type);
            active_.erase(e.name);
            if (!is_static(value)) error_at(e, "constant " + e.name + " depends on a variable");
            Compiled c;
            c.op = type == Type::boolean ? Op::bool_lit : Op::int_lit;
            c.value = value.eval({});
            return c;
        }
        if (auto it = formula_decl_.find(e.name); it != formula_decl_.end()) {
            active_.insert(e.name);
            Compiled c = infer(*it->second->body, type);
            active_.erase(e.name);
            return c;
        }
        error_at(e, "unknown name " + e.name);
    }

    const Program& program_;
    std::set<std::string> names_;
    std::set<std::string> active_;
    std::unordered_map<std::string, const ConstDecl*> const_decl_;
    std::unordered_map<std::string, const FormulaDecl*> formula_decl_;
    std::unordered_map<std::string, std::size_t> slot_of_;
    std::vector<Slot> slots_;
};

struct CompiledCommand {
    std::string action;
    std::string module;
    int line;
    Compiled guard;
    std::vector<std::pair<std::size_t, Compiled>> updates;
};

std::string state_name(const std::vector<Slot>& slots, const Valuation& v) {
    std::string out;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (i) out += ",";
        out += slots[i].name + "=";
        out += slots[i].type == Type::boolean ? (v[i] ? "true" : "false") : std::to_string(v[i]);
    }
    return out;
}

}  // namespace

ExpandedModel expand_program(const Program& program, const ExpandOptions& options) {
    if (program.modules.empty()) throw InputError("the program declares no modules");
    Compiler compiler(program);
    const auto& slots = compiler.slots();

    // Commands grouped by module; synchronising actions collected in first-use order.
    std::vector<std::vector<CompiledCommand>> by_module(program.modules.size());
    std::vector<std::string> actions;
    for (std::size_t m = 0; m < program.modules.size(); ++m) {
        const auto& mod = program.modules[m];
        for (const auto& cmd : mod.commands) {
            CompiledCommand cc{cmd.action, mod.name, cmd.line, compiler.compile(*cmd.guard, Type::boolean), {}};
            std::set<std::string> assigned;
            for (const auto& u : cmd.updates) {
                auto s = compiler.slot(u.variable);
                if (!s) error_at(*u.value, "unknown variable " + u.variable);
                if (slots[*s].module != m)
                    error_at(*u.value, "module " + mod.name + " cannot update variable " + u.variable + " of module " +
                                           program.modules[slots[*s].module].name);
                if (!assigned.insert(u.variable).second)
                    error_at(*u.value, "variable " + u.variable + " is assigned twice in one command");
                cc.updates.emplace_back(*s, compiler.compile(*u.value, slots[*s].type));
            }
            if (!cmd.action.empty() && std::find(actions.begin(), actions.end(), cmd.action) == actions.end())
                actions.push_back(cmd.action);
            by_module[m].push_back(std::move(cc));
        }
    }

    // Mixed-radix key of a valuation.
    std::vector<std::uint64_t> radix(slots.size());
    std::uint64_t span = 1;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        std::uint64_t width = static_cast<std::uint64_t>(slots[i].high - slots[i].low) + 1;
        radix[i] = span;
        if (width != 0 && span > std::numeric_limits<std::uint64_t>::max() / width)
            throw Refusal("variable ranges are too wide to enumerate");
        span *= width;
    }
    auto key = [&](const Valuation& v) {
        std::uint64_t k = 0;
        for (std::size_t i = 0; i < v.size(); ++i) k += static_cast<std::uint64_t>(v[i] - slots[i].low) * radix[i];
        return k;
    };

    Valuation init(slots.size());
    for (std::size_t i = 0; i < slots.size(); ++i) {
        const VarDecl& d = compiler.decl_of(slots[i]);
        init[i] = d.init ? compiler.constant(*d.init, slots[i].type) : slots[i].low;
        if (init[i] < slots[i].low || init[i] > slots[i].high)
            throw InputError("line " + std::to_string(d.line) + ": initial value of " + slots[i].name + " is out of range");
    }

    std::vector<Valuation> states{init};
    std::unordered_map<std::uint64_t, std::uint32_t> index{{key(init), 0}};
    std::vector<std::vector<StateId>> succ;

    auto apply = [&](const Valuation& pre, const std::vector<const CompiledCommand*>& cmds) {
        Valuation post = pre;
        for (const CompiledCommand* c : cmds)
            for (const auto& [s, e] : c->updates) {
                std::int64_t x = e.eval(pre);
                if (x < slots[s].low || x > slots[s].high)
                    throw InputError("line " + std::to_string(c->line) + ": command in module " + c->module + " sets " +
                                     slots[s].name + " to " + std::to_string(x) + " outside [" +
                                     std::to_string(slots[s].low) + ".." + std::to_string(slots[s].high) +
                                     "] in state " + state_name(slots, pre));
                post[s] = x;
            }
        return post;
    };

    for (std::size_t cur = 0; cur < states.size(); ++cur) {
        const Valuation pre = states[cur];
        std::vector<Valuation> next;
        for (const auto& cmds : by_module)
            for (const auto& c : cmds)
                if (c.action.empty() && c.guard.eval(pre)) next.push_back(apply(pre, {&c}));
        for (const auto& a : actions) {
            std::vector<std::vector<const CompiledCommand*>> choices;
            bool blocked = false;
            for (const auto& cmds : by_module) {
                std::vector<const CompiledCommand*> enabled;
                bool uses = false;
                for (const auto& c : cmds)
                    if (c.action == a) {
                        uses = true;
                        if (c.guard.eval(pre)) enabled.push_back(&c);
                    }
                if (!uses) continue;
                if (enabled.empty()) blocked = true;
                choices.push_back(std::move(enabled));
            }
            if (blocked) continue;
            std::vector<const CompiledCommand*> pick(choices.size());
            std::function<void(std::size_t)> product = [&](std::size_t i) {
                if (i == choices.size()) {
                    next.push_back(apply(pre, pick));
                    return;
                }
                for (const auto* c : choices[i]) {
                    pick[i] = c;
                    product(i + 1);
                }
            };
            product(0);
        }
        if (next.empty()) throw InputError("deadlock: no command is enabled in state " + state_name(slots, pre));
        std::vector<StateId> out;
        for (auto& v : next) {
            auto [it, fresh] = index.emplace(key(v), static_cast<std::uint32_t>(states.size()));
            if (fresh) {
                if (states.size() >= options.state_cap)
                    throw Refusal("state space exceeds the cap of " + std::to_string(options.state_cap) + " states");
                states.push_back(std::move(v));
            }
            out.push_back(StateId(it->second));
        }
        succ.push_back(std::move(out));
    }

    ExpandedModel m;
    std::vector<std::string> names;
    for (const auto& v : states) names.push_back(state_name(slots, v));
    m.ts = TransitionSystem(std::move(names), StateId(0), std::move(succ));
    for (const auto& s : slots) m.variables.push_back(s.name);
    auto states_where = [&](const Expr& e) {
        Compiled c = compiler.compile(e, Type::boolean);
        StateSet out(states.size());
        for (std::uint32_t i = 0; i < states.size(); ++i)
            if (c.eval(states[i])) out.insert(StateId(i));
        return out;
    };
    for (const auto& l : program.labels) {
        if (m.labels.count(l.name)) throw InputError("line " + std::to_string(l.line) + ": label \"" + l.name + "\" is defined twice");
        m.labels.emplace(l.name, states_where(*l.expr));
    }
    for (const auto& mod : program.modules)
        if (mod.owner) m.owners.emplace_back(mod.name, states_where(*mod.owner));
    m.valuations = std::move(states);
    return m;
}

}  // namespace backresp::lang
