#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "backresp/model.hpp"

namespace backresp::lang {

enum class Op {
    int_lit, bool_lit, name,
    neg, lnot,
    add, sub, mul,
    eq, ne, lt, le, gt, ge,
    land, lor, implies,
    ite, min, max
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    Op op = Op::int_lit;
    std::int64_t value = 0;       // literals
    std::string name;             // names
    std::vector<ExprPtr> args;
    int line = 0, column = 0;
};

struct ConstDecl {
    std::string name;
    bool is_bool = false;
    ExprPtr value;
    int line = 0;
};

struct FormulaDecl {
    std::string name;
    ExprPtr body;
    int line = 0;
};

struct VarDecl {
    std::string name;
    bool is_bool = false;
    ExprPtr low, high;  // integer bounds
    ExprPtr init;       // null: lower bound or false
    int line = 0;
};

struct Assignment {
    std::string variable;
    ExprPtr value;
};

struct Command {
    std::string action;  // empty: not synchronised
    ExprPtr guard;
    std::vector<Assignment> updates;  // empty: no change
    int line = 0;
};

struct ModuleDecl {
    std::string name;
    std::vector<VarDecl> variables;
    ExprPtr owner;  // optional state predicate for by-module grouping
    std::vector<Command> commands;
    int line = 0;
};

struct LabelDecl {
    std::string name;
    ExprPtr expr;
    int line = 0;
};

struct Program {
    std::string header;  // "", "mdp" or "nondeterministic"
    std::vector<ConstDecl> constants;
    std::vector<FormulaDecl> formulas;
    std::vector<ModuleDecl> modules;
    std::vector<LabelDecl> labels;
};

// Throws InputError with "line L, column C" on syntax errors.
Program parse_program(std::string_view text);

// Canonical pretty-print; parse(serialize(p)) serializes identically.
std::string serialize_program(const Program& program);
std::string serialize_expr(const Expr& e);

struct ExpandOptions {
    std::size_t state_cap = 10'000'000;
};

struct ExpandedModel {
    TransitionSystem ts;
    std::vector<std::string> variables;            // declaration order
    std::vector<std::vector<std::int64_t>> valuations;  // per state
    std::map<std::string, StateSet> labels;
    std::vector<std::pair<std::string, StateSet>> owners;  // modules with an owner, declaration order
};

// Breadth-first reachable state space; states numbered in discovery order and
// named "x=v,y=w" with variables in declaration order. Updates read the
// pre-state (simultaneous assignment). Throws InputError on type, bound or
// deadlock errors and Refusal above the state cap.
ExpandedModel expand_program(const Program& program, const ExpandOptions& options = {});

}  // namespace backresp::lang
