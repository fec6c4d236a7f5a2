#include <cctype>
#include <set>

#include "backresp/errors.hpp"
#include "backresp/ingest/modlang.hpp"

namespace backresp::lang {

namespace {

enum class Tok { ident, number, string, symbol, end };

struct Token {
    Tok kind = Tok::end;
    std::string text;
    int line = 1, column = 1;
};

[[noreturn]] void error_at(int line, int column, const std::string& msg) {
    throw InputError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg);
}

std::vector<Token> lex(std::string_view src) {
    static const char* const symbols[] = {"..", "->", "=>", "!=", "<=", ">=", "[", "]", "(", ")", ";", ":", ",",
                                          "'",  "=",  "<",  ">",  "+",  "-",  "*", "&", "|", "!", "?"};
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (src.substr(i, 2) == "//") {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        Token t;
        t.line = line;
        t.column = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            t.kind = Tok::ident;
            t.text = std::string(src.substr(i, j - i));
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            if (j < src.size() && src[j] == '.' && src.substr(j, 2) != "..") {
                ++j;
                while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            }
            t.kind = Tok::number;
            t.text = std::string(src.substr(i, j - i));
            advance(j - i);
        } else if (c == '"') {
            std::size_t j = i + 1;
            while (j < src.size() && src[j] != '"' && src[j] != '\n') ++j;
            if (j >= src.size() || src[j] != '"') error_at(line, col, "unterminated string");
            t.kind = Tok::string;
            t.text = std::string(src.substr(i + 1, j - i - 1));
            advance(j - i + 1);
        } else {
            bool matched = false;
            for (const char* s : symbols) {
                std::string_view sv(s);
                if (src.substr(i, sv.size()) == sv) {
                    t.kind = Tok::symbol;
                    t.text = std::string(sv);
                    advance(sv.size());
                    matched = true;
                    break;
                }
            }
            if (!matched) error_at(line, col, std::string("unexpected character '") + c + "'");
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.line = line;
    end.column = col;
    out.push_back(end);
    return out;
}

const std::set<std::string> kReserved = {"mdp", "nondeterministic", "const", "int", "bool", "formula", "module",
                                          "endmodule", "init", "owner", "label", "true", "false", "min", "max"};

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Program program() {
        Program p;
        if (is_word("dtmc") || is_word("ctmc") || is_word("pta") || is_word("probabilistic") ||
            is_word("stochastic"))
            fail("only non-probabilistic models (mdp or nondeterministic) are supported");
        if (is_word("mdp") || is_word("nondeterministic")) p.header = take().text;
        while (peek().kind != Tok::end) {
            if (accept_word("const")) p.constants.push_back(constant());
            else if (accept_word("formula")) p.formulas.push_back(formula());
            else if (accept_word("module")) p.modules.push_back(module());
            else if (accept_word("label")) p.labels.push_back(label());
            else if (is_word("global")) fail("global variables are not supported");
            else if (is_word("rewards")) fail("reward structures are not supported");
            else fail("expected const, formula, module or label");
        }
        return p;
    }

private:
    const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
    Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    bool is_word(const char* w) const { return peek().kind == Tok::ident && peek().text == w; }
    bool is_sym(const char* s) const { return peek().kind == Tok::symbol && peek().text == s; }
    bool accept_word(const char* w) {
        if (!is_word(w)) return false;
        ++pos_;
        return true;
    }
    bool accept(const char* s) {
        if (!is_sym(s)) return false;
        ++pos_;
        return true;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        const Token& t = peek();
        std::string got = t.kind == Tok::end ? "end of input" : "'" + t.text + "'";
        error_at(t.line, t.column, msg + " (found " + got + ")");
    }
    void expect(const char* s) {
        if (!accept(s)) fail(std::string("expected '") + s + "'");
    }
    void expect_word(const char* w) {
        if (!accept_word(w)) fail(std::string("expected '") + w + "'");
    }
    std::string identifier(const char* what) {
        if (peek().kind != Tok::ident || kReserved.count(peek().text)) fail(std::string("expected ") + what);
        return take().text;
    }

    ConstDecl constant() {
        ConstDecl c;
        c.line = peek().line;
        if (accept_word("bool")) c.is_bool = true;
        else expect_word("int");
        c.name = identifier("constant name");
        if (!is_sym("=")) fail("constant " + c.name + " needs a value");
        expect("=");
        c.value = expr();
        expect(";");
        return c;
    }

    FormulaDecl formula() {
        FormulaDecl f;
        f.line = peek().line;
        f.name = identifier("formula name");
        expect("=");
        f.body = expr();
        expect(";");
        return f;
    }

    LabelDecl label() {
        LabelDecl l;
        l.line = peek().line;
        if (peek().kind != Tok::string) fail("expected a quoted label name");
        l.name = take().text;
        expect("=");
        l.expr = expr();
        expect(";");
        return l;
    }

    ModuleDecl module() {
        ModuleDecl m;
        m.line = peek().line;
        m.name = identifier("module name");
        while (peek().kind == Tok::ident && !kReserved.count(peek().text) && peek(1).kind == Tok::symbol &&
               peek(1).text == ":") {
            VarDecl v;
            v.line = peek().line;
            v.name = take().text;
            expect(":");
            if (accept_word("bool")) {
                v.is_bool = true;
            } else {
                expect("[");
                v.low = expr();
                expect("..");
                v.high = expr();
                expect("]");
            }
            if (accept_word("init")) v.init = expr();
            expect(";");
            m.variables.push_back(std::move(v));
        }
        if (accept_word("owner")) {
            m.owner = expr();
            expect(";");
            if (is_word("owner")) fail("a module has at most one owner declaration");
        }
        while (is_sym("[")) m.commands.push_back(command());
        if (!accept_word("endmodule")) fail("expected a variable declaration, command or 'endmodule'");
        return m;
    }

    Command command() {
        Command c;
        c.line = peek().line;
        expect("[");
        if (!is_sym("]")) c.action = identifier("action name");
        expect("]");
        c.guard = expr();
        expect("->");
        if (peek().kind == Tok::number && peek(1).kind == Tok::symbol && peek(1).text == ":")
            fail("probabilistic updates are not supported");
        if (accept_word("true")) {
            expect(";");
            return c;
        }
        do {
            expect("(");
            Assignment a;
            a.variable = identifier("variable name");
            expect("'");
            expect("=");
            a.value = expr();
            expect(")");
            c.updates.push_back(std::move(a));
        } while (accept("&"));
        if (is_sym("+")) fail("probabilistic updates are not supported");
        expect(";");
        return c;
    }

    ExprPtr node(Op op, const Token& at, std::vector<ExprPtr> args) {
        auto e = std::make_shared<Expr>();
        e->op = op;
        e->args = std::move(args);
        e->line = at.line;
        e->column = at.column;
        return e;
    }

    ExprPtr expr() {
        Token at = peek();
        ExprPtr cond = implies();
        if (!accept("?")) return cond;
        ExprPtr a = expr();
        expect(":");
        ExprPtr b = expr();
        return node(Op::ite, at, {cond, a, b});
    }
    ExprPtr implies() {
        Token at = peek();
        ExprPtr l = disjunction();
        if (!accept("=>")) return l;
        return node(Op::implies, at, {l, implies()});
    }
    ExprPtr disjunction() {
        Token at = peek();
        ExprPtr l = conjunction();
        while (accept("|")) l = node(Op::lor, at, {l, conjunction()});
        return l;
    }
    ExprPtr conjunction() {
        Token at = peek();
        ExprPtr l = negation();
        while (accept("&")) l = node(Op::land, at, {l, negation()});
        return l;
    }
    ExprPtr negation() {
        Token at = peek();
        if (accept("!")) return node(Op::lnot, at, {negation()});
        return relation();
    }
    ExprPtr relation() {
        Token at = peek();
        ExprPtr l = additive();
        static const std::pair<const char*, Op> rels[] = {{"=", Op::eq}, {"!=", Op::ne}, {"<=", Op::le},
                                                          {">=", Op::ge}, {"<", Op::lt},  {">", Op::gt}};
        for (const auto& [s, op] : rels)
            if (accept(s)) {
                ExprPtr r = additive();
                for (const auto& [s2, op2] : rels)
                    if (is_sym(s2)) fail("comparisons do not chain; add parentheses");
                return node(op, at, {l, r});
            }
        return l;
    }
    ExprPtr additive() {
        Token at = peek();
        ExprPtr l = multiplicative();
        for (;;) {
            if (accept("+")) l = node(Op::add, at, {l, multiplicative()});
            else if (accept("-")) l = node(Op::sub, at, {l, multiplicative()});
            else return l;
        }
    }
    ExprPtr multiplicative() {
        Token at = peek();
        ExprPtr l = unary();
        while (accept("*")) l = node(Op::mul, at, {l, unary()});
        return l;
    }
    ExprPtr unary() {
        Token at = peek();
        if (accept("-")) return node(Op::neg, at, {unary()});
        return primary();
    }
    ExprPtr primary() {
        Token at = peek();
        if (at.kind == Tok::number) {
            if (at.text.find('.') != std::string::npos) fail("only integer literals are supported");
            take();
            auto e = node(Op::int_lit, at, {});
            try {
                std::const_pointer_cast<Expr>(e)->value = std::stoll(at.text);
            } catch (const std::out_of_range&) {
                error_at(at.line, at.column, "integer literal out of range");
            }
            return e;
        }
        if (accept_word("true") || accept_word("false")) {
            auto e = node(Op::bool_lit, at, {});
            std::const_pointer_cast<Expr>(e)->value = at.text == "true";
            return e;
        }
        if (is_word("min") || is_word("max")) {
            Op op = take().text == "min" ? Op::min : Op::max;
            expect("(");
            std::vector<ExprPtr> args{expr()};
            while (accept(",")) args.push_back(expr());
            expect(")");
            if (args.size() < 2) error_at(at.line, at.column, "min/max need at least two arguments");
            return node(op, at, std::move(args));
        }
        if (accept("(")) {
            ExprPtr e = expr();
            expect(")");
            return e;
        }
        if (at.kind == Tok::ident && !kReserved.count(at.text)) {
            take();
            auto e = node(Op::name, at, {});
            std::const_pointer_cast<Expr>(e)->name = at.text;
            return e;
        }
        fail("expected an expression");
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

int precedence(Op op) {
    switch (op) {
        case Op::ite: return 1;
        case Op::implies: return 2;
        case Op::lor: return 3;
        case Op::land: return 4;
        case Op::lnot: return 5;
        case Op::eq: case Op::ne: case Op::lt: case Op::le: case Op::gt: case Op::ge: return 6;
        case Op::add: case Op::sub: return 7;
        case Op::mul: return 8;
        case Op::neg: return 9;
        default: return 10;
    }
}

const char* symbol(Op op) {
    switch (op) {
        case Op::implies: return " => ";
        case Op::lor: return " | ";
        case Op::land: return " & ";
        case Op::eq: return " = ";
        case Op::ne: return " != ";
        case Op::lt: return " < ";
        case Op::le: return " <= ";
        case Op::gt: return " > ";
        case Op::ge: return " >= ";
        case Op::add: return " + ";
        case Op::sub: return " - ";
        case Op::mul: return " * ";
        default: return "";
    }
}

void print(const Expr& e, std::string& out, int min_prec) {
    const int p = precedence(e.op);
    const bool paren = p < min_prec;
    if (paren) out += "(";
    switch (e.op) {
        case Op::int_lit:
            if (e.value < 0) out += "(" + std::to_string(e.value) + ")";
            else out += std::to_string(e.value);
            break;
        case Op::bool_lit: out += e.value ? "true" : "false"; break;
        case Op::name: out += e.name; break;
        case Op::neg:
            out += "-";
            print(*e.args[0], out, p);
            break;
        case Op::lnot:
            out += "!";
            print(*e.args[0], out, p);
            break;
        case Op::ite:
            print(*e.args[0], out, p + 1);
            out += " ? ";
            print(*e.args[1], out, p);
            out += " : ";
            print(*e.args[2], out, p);
            break;
        case Op::min:
        case Op::max:
            out += e.op == Op::min ? "min(" : "max(";
            for (std::size_t i = 0; i < e.args.size(); ++i) {
                if (i) out += ", ";
                print(*e.args[i], out, 0);
            }
            out += ")";
            break;
        case Op::implies:
            print(*e.args[0], out, p + 1);
            out += symbol(e.op);
            print(*e.args[1], out, p);
            break;
        case Op::eq: case Op::ne: case Op::lt: case Op::le: case Op::gt: case Op::ge:
            print(*e.args[0], out, p + 1);
            out += symbol(e.op);
            print(*e.args[1], out, p + 1);
            break;
        default:  // left-associative binary
            print(*e.args[0], out, p);
            out += symbol(e.op);
            print(*e.args[1], out, p + 1);
            break;
    }
    if (paren) out += ")";
}

}  // namespace

Program parse_program(std::string_view text) { return Parser(lex(text)).program(); }

std::string serialize_expr(const Expr& e) {
    std::string out;
    print(e, out, 0);
    return out;
}

std::string serialize_program(const Program& p) {
    std::string out;
    auto section = [&] {
        if (!out.empty()) out += "\n";
    };
    if (!p.header.empty()) out += p.header + "\n";
    if (!p.constants.empty()) {
        section();
        for (const auto& c : p.constants)
            out += "const " + std::string(c.is_bool ? "bool " : "int ") + c.name + " = " + serialize_expr(*c.value) + ";\n";
    }
    if (!p.formulas.empty()) {
        section();
        for (const auto& f : p.formulas) out += "formula " + f.name + " = " + serialize_expr(*f.body) + ";\n";
    }
    for (const auto& m : p.modules) {
        section();
        out += "module " + m.name + "\n";
        for (const auto& v : m.variables) {
            out += "  " + v.name + " : ";
            out += v.is_bool ? "bool" : "[" + serialize_expr(*v.low) + ".." + serialize_expr(*v.high) + "]";
            if (v.init) out += " init " + serialize_expr(*v.init);
            out += ";\n";
        }
        if (m.owner) out += "  owner " + serialize_expr(*m.owner) + ";\n";
        for (const auto& c : m.commands) {
            out += "  [" + c.action + "] " + serialize_expr(*c.guard) + " -> ";
            if (c.updates.empty()) out += "true";
            for (std::size_t i = 0; i < c.updates.size(); ++i) {
                if (i) out += " & ";
                out += "(" + c.updates[i].variable + "'=" + serialize_expr(*c.updates[i].value) + ")";
            }
            out += ";\n";
        }
        out += "endmodule\n";
    }
    if (!p.labels.empty()) {
        section();
        for (const auto& l : p.labels) out += "label \"" + l.name + "\" = " + serialize_expr(*l.expr) + ";\n";
    }
    return out;
}

}  // namespace backresp::lang
