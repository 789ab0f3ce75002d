#include "videocot/dsl.hpp"

#include <algorithm>
#include <cassert>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>

#include "videocot/util.hpp"

namespace videocot {
namespace dsl {

std::string to_string(CompareOp op) {
    switch (op) {
        case CompareOp::eq: return "==";
        case CompareOp::ne: return "!=";
        case CompareOp::lt: return "<";
        case CompareOp::le: return "<=";
        case CompareOp::gt: return ">";
        case CompareOp::ge: return ">=";
    }
    return "?";
}

std::string to_string(BoolOp op) {
    switch (op) {
        case BoolOp::logical_and: return "and";
        case BoolOp::logical_or: return "or";
        case BoolOp::logical_not: return "not";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// AST constructors and structural equality

Expr Expr::literal(Literal v, SourcePos p) {
    Expr e;
    e.kind = Kind::literal;
    e.lit = std::move(v);
    e.pos = p;
    return e;
}

Expr Expr::var(std::string n, SourcePos p) {
    Expr e;
    e.kind = Kind::var;
    e.name = std::move(n);
    e.pos = p;
    return e;
}

Expr Expr::call(std::string api, std::vector<Expr> args, SourcePos p) {
    Expr e;
    e.kind = Kind::call;
    e.name = std::move(api);
    e.children = std::move(args);
    e.pos = p;
    return e;
}

Expr Expr::index(Expr base, Expr sub, SourcePos p) {
    Expr e;
    e.kind = Kind::index;
    e.children.push_back(std::move(base));
    e.children.push_back(std::move(sub));
    e.pos = p;
    return e;
}

Expr Expr::compare(CompareOp op, Expr lhs, Expr rhs, SourcePos p) {
    Expr e;
    e.kind = Kind::compare;
    e.cmp = op;
    e.children.push_back(std::move(lhs));
    e.children.push_back(std::move(rhs));
    e.pos = p;
    return e;
}

Expr Expr::bool_op(BoolOp op, std::vector<Expr> operands, SourcePos p) {
    Expr e;
    e.kind = Kind::bool_op;
    e.bop = op;
    e.children = std::move(operands);
    e.pos = p;
    return e;
}

Stmt Stmt::assign(std::string name, Expr value, SourcePos p) {
    Stmt s;
    s.kind = Kind::assign;
    s.target = std::move(name);
    s.exprs.push_back(std::move(value));
    s.pos = p;
    return s;
}

Stmt Stmt::expr_stmt(Expr e, SourcePos p) {
    Stmt s;
    s.kind = Kind::expr_stmt;
    s.exprs.push_back(std::move(e));
    s.pos = p;
    return s;
}

Stmt Stmt::if_stmt(Expr cond, std::vector<Stmt> then_block, std::vector<Stmt> else_block,
                   SourcePos p) {
    Stmt s;
    s.kind = Kind::if_stmt;
    s.exprs.push_back(std::move(cond));
    s.body = std::move(then_block);
    s.else_body = std::move(else_block);
    s.pos = p;
    return s;
}

Stmt Stmt::for_stmt(std::string var, Expr iterable, std::vector<Stmt> body, SourcePos p) {
    Stmt s;
    s.kind = Kind::for_stmt;
    s.target = std::move(var);
    s.exprs.push_back(std::move(iterable));
    s.body = std::move(body);
    s.pos = p;
    return s;
}

Stmt Stmt::answer(Expr e, SourcePos p) {
    Stmt s;
    s.kind = Kind::answer;
    s.exprs.push_back(std::move(e));
    s.pos = p;
    return s;
}

bool operator==(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Expr::Kind::literal:
            return a.lit == b.lit;
        case Expr::Kind::var:
            return a.name == b.name;
        case Expr::Kind::call:
            if (a.name != b.name) return false;
            break;
        case Expr::Kind::compare:
            if (a.cmp != b.cmp) return false;
            break;
        case Expr::Kind::bool_op:
            if (a.bop != b.bop) return false;
            break;
        case Expr::Kind::index:
            break;
    }
    return a.children == b.children;
}

bool operator==(const Stmt& a, const Stmt& b) {
    if (a.kind != b.kind || a.target != b.target) return false;
    return a.exprs == b.exprs && a.body == b.body && a.else_body == b.else_body;
}

bool operator==(const Ast& a, const Ast& b) { return a.statements == b.statements; }

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok {
    name, number, string, kw_if, kw_else, kw_for, kw_in, kw_and, kw_or, kw_not,
    kw_true, kw_false, kw_answer,
    assign, eq, ne, lt, le, gt, ge,
    lparen, rparen, lbracket, rbracket, comma, colon, dot, minus,
    newline, indent, dedent, end
};

struct Token {
    Tok kind;
    std::string text;     // name / raw string value / number text
    bool is_float = false;
    SourcePos pos;
};

const std::set<std::string> kForbiddenKeywords = {
    "import", "from", "while", "def", "return", "lambda", "class", "yield",
    "global", "nonlocal", "try", "except", "finally", "raise", "with",
    "assert", "del", "async", "await"};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) {}

    std::vector<Token> run() {
        indents_.push_back(0);
        while (pos_ < src_.size()) lex_line();
        // flush trailing NEWLINE + DEDENTs
        if (!tokens_.empty() && tokens_.back().kind != Tok::newline)
            push(Tok::newline, "");
        while (indents_.back() > 0) {
            indents_.pop_back();
            push(Tok::dedent, "");
        }
        push(Tok::end, "");
        return std::move(tokens_);
    }

private:
    void lex_line() {
        // indentation
        int indent = 0;
        size_t start = pos_;
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t')) {
            if (src_[pos_] == '\t')
                throw ParseError("tab character in indentation", here());
            ++indent;
            ++pos_;
        }
        if (pos_ >= src_.size()) return;
        if (src_[pos_] == '\n') {  // blank line
            ++pos_;
            ++line_;
            col_base_ = pos_;
            return;
        }
        if (src_[pos_] == '#') {  // comment-only line
            skip_to_eol();
            return;
        }
        (void)start;
        handle_indent(indent);
        // tokens until end of line
        while (pos_ < src_.size() && src_[pos_] != '\n') {
            const char c = src_[pos_];
            if (c == ' ' || c == '\t') {
                ++pos_;
                continue;
            }
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
                break;
            }
            lex_token();
        }
        push(Tok::newline, "");
        if (pos_ < src_.size()) {
            ++pos_;  // consume '\n'
            ++line_;
            col_base_ = pos_;
        }
    }

    void handle_indent(int indent) {
        if (indent > indents_.back()) {
            indents_.push_back(indent);
            push(Tok::indent, "");
        } else {
            while (indent < indents_.back()) {
                indents_.pop_back();
                push(Tok::dedent, "");
            }
            if (indent != indents_.back())
                throw ParseError("inconsistent indentation", here());
        }
    }

    void lex_token() {
        const SourcePos p = here();
        const char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string name;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                name.push_back(src_[pos_++]);
            if (kForbiddenKeywords.count(name))
                throw ForbiddenConstructError("forbidden construct '" + name + "'", p, name);
            if (name == "if") push_at(Tok::kw_if, name, p);
            else if (name == "else") push_at(Tok::kw_else, name, p);
            else if (name == "elif") throw ParseError("'elif' is not supported; nest an if under else", p);
            else if (name == "for") push_at(Tok::kw_for, name, p);
            else if (name == "in") push_at(Tok::kw_in, name, p);
            else if (name == "and") push_at(Tok::kw_and, name, p);
            else if (name == "or") push_at(Tok::kw_or, name, p);
            else if (name == "not") push_at(Tok::kw_not, name, p);
            else if (name == "True") push_at(Tok::kw_true, name, p);
            else if (name == "False") push_at(Tok::kw_false, name, p);
            else if (name == "answer") push_at(Tok::kw_answer, name, p);
            else push_at(Tok::name, name, p);
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            lex_number(p);
            return;
        }
        if (c == '"' || c == '\'') {
            lex_string(p);
            return;
        }
        ++pos_;
        switch (c) {
            case '=':
                if (peek() == '=') { ++pos_; push_at(Tok::eq, "==", p); }
                else push_at(Tok::assign, "=", p);
                return;
            case '!':
                if (peek() == '=') { ++pos_; push_at(Tok::ne, "!=", p); return; }
                throw ParseError("unexpected character '!'", p);
            case '<':
                if (peek() == '=') { ++pos_; push_at(Tok::le, "<=", p); }
                else push_at(Tok::lt, "<", p);
                return;
            case '>':
                if (peek() == '=') { ++pos_; push_at(Tok::ge, ">=", p); }
                else push_at(Tok::gt, ">", p);
                return;
            case '(': push_at(Tok::lparen, "(", p); return;
            case ')': push_at(Tok::rparen, ")", p); return;
            case '[': push_at(Tok::lbracket, "[", p); return;
            case ']': push_at(Tok::rbracket, "]", p); return;
            case ',': push_at(Tok::comma, ",", p); return;
            case ':': push_at(Tok::colon, ":", p); return;
            case '.': push_at(Tok::dot, ".", p); return;
            case '-': push_at(Tok::minus, "-", p); return;
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", p);
        }
    }

    void lex_number(SourcePos p) {
        std::string text;
        bool is_float = false;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
            text.push_back(src_[pos_++]);
        if (pos_ + 1 < src_.size() && src_[pos_] == '.' &&
            std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
            is_float = true;
            text.push_back(src_[pos_++]);
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                text.push_back(src_[pos_++]);
        }
        Token t{Tok::number, text, is_float, p};
        tokens_.push_back(std::move(t));
    }

    void lex_string(SourcePos p) {
        const char quote = src_[pos_++];
        std::string value;
        while (true) {
            if (pos_ >= src_.size() || src_[pos_] == '\n')
                throw ParseError("unterminated string literal", p);
            char c = src_[pos_++];
            if (c == quote) break;
            if (c == '\\') {
                if (pos_ >= src_.size()) throw ParseError("unterminated string literal", p);
                char esc = src_[pos_++];
                switch (esc) {
                    case 'n': value.push_back('\n'); break;
                    case 't': value.push_back('\t'); break;
                    case '\\': value.push_back('\\'); break;
                    case '\'': value.push_back('\''); break;
                    case '"': value.push_back('"'); break;
                    default:
                        throw ParseError(std::string("unsupported escape '\\") + esc + "'", p);
                }
            } else {
                value.push_back(c);
            }
        }
        Token t{Tok::string, value, false, p};
        tokens_.push_back(std::move(t));
    }

    void skip_to_eol() {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
        if (pos_ < src_.size()) {
            ++pos_;
            ++line_;
            col_base_ = pos_;
        }
    }

    char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }
    SourcePos here() const {
        return SourcePos{line_, static_cast<int>(pos_ - col_base_) + 1};
    }
    void push(Tok k, std::string text) { push_at(k, std::move(text), here()); }
    void push_at(Tok k, std::string text, SourcePos p) {
        tokens_.push_back(Token{k, std::move(text), false, p});
    }

    const std::string& src_;
    size_t pos_ = 0;
    size_t col_base_ = 0;
    int line_ = 1;
    std::vector<int> indents_;
    std::vector<Token> tokens_;
};

// ---------------------------------------------------------------------------
// Parser

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Ast parse() {
        Ast ast;
        skip_newlines();
        while (!at(Tok::end)) {
            ast.statements.push_back(parse_statement());
            skip_newlines();
        }
        if (ast.statements.empty())
            throw ParseError("empty program", SourcePos{1, 1});
        return ast;
    }

private:
    Stmt parse_statement() {
        const Token& t = cur();
        if (t.kind == Tok::kw_if) return parse_if();
        if (t.kind == Tok::kw_for) return parse_for();
        Stmt s = parse_simple_statement();
        expect(Tok::newline, "newline");
        return s;
    }

    Stmt parse_simple_statement() {
        const Token& t = cur();
        if (t.kind == Tok::kw_answer) {
            advance();
            expect(Tok::lparen, "'(' after answer");
            Expr e = parse_expr();
            expect(Tok::rparen, "')'");
            return Stmt::answer(std::move(e), t.pos);
        }
        if (t.kind == Tok::name && peek_kind(1) == Tok::assign) {
            std::string target = t.text;
            advance();
            advance();
            Expr value = parse_expr();
            return Stmt::assign(std::move(target), std::move(value), t.pos);
        }
        Expr e = parse_expr();
        return Stmt::expr_stmt(std::move(e), t.pos);
    }

    Stmt parse_if() {
        const SourcePos p = cur().pos;
        advance();
        Expr cond = parse_expr();
        expect(Tok::colon, "':'");
        std::vector<Stmt> then_block = parse_block();
        std::vector<Stmt> else_block;
        if (at(Tok::kw_else)) {
            advance();
            expect(Tok::colon, "':'");
            else_block = parse_block();
        }
        return Stmt::if_stmt(std::move(cond), std::move(then_block), std::move(else_block), p);
    }

    Stmt parse_for() {
        const SourcePos p = cur().pos;
        advance();
        if (!at(Tok::name))
            throw ParseError("expected loop variable name", cur().pos);
        std::string var = cur().text;
        advance();
        expect(Tok::kw_in, "'in'");
        Expr iterable = parse_expr();
        expect(Tok::colon, "':'");
        std::vector<Stmt> body = parse_block();
        return Stmt::for_stmt(std::move(var), std::move(iterable), std::move(body), p);
    }

    std::vector<Stmt> parse_block() {
        std::vector<Stmt> block;
        if (!at(Tok::newline)) {
            // single inline statement: `if cond: answer(x)`
            block.push_back(parse_simple_statement());
            expect(Tok::newline, "newline");
            return block;
        }
        advance();  // newline
        skip_newlines();
        expect(Tok::indent, "an indented block");
        skip_newlines();
        while (!at(Tok::dedent)) {
            block.push_back(parse_statement());
            skip_newlines();
        }
        advance();  // dedent
        return block;
    }

    Expr parse_expr() { return parse_or(); }

    Expr parse_or() {
        Expr first = parse_and();
        if (!at(Tok::kw_or)) return first;
        const SourcePos p = first.pos;
        std::vector<Expr> operands;
        operands.push_back(std::move(first));
        while (at(Tok::kw_or)) {
            advance();
            operands.push_back(parse_and());
        }
        return Expr::bool_op(BoolOp::logical_or, std::move(operands), p);
    }

    Expr parse_and() {
        Expr first = parse_not();
        if (!at(Tok::kw_and)) return first;
        const SourcePos p = first.pos;
        std::vector<Expr> operands;
        operands.push_back(std::move(first));
        while (at(Tok::kw_and)) {
            advance();
            operands.push_back(parse_not());
        }
        return Expr::bool_op(BoolOp::logical_and, std::move(operands), p);
    }

    Expr parse_not() {
        if (at(Tok::kw_not)) {
            const SourcePos p = cur().pos;
            advance();
            std::vector<Expr> operand;
            operand.push_back(parse_not());
            return Expr::bool_op(BoolOp::logical_not, std::move(operand), p);
        }
        return parse_comparison();
    }

    Expr parse_comparison() {
        Expr lhs = parse_postfix();
        std::optional<CompareOp> op = compare_op(cur().kind);
        if (!op) return lhs;
        const SourcePos p = cur().pos;
        advance();
        Expr rhs = parse_postfix();
        if (compare_op(cur().kind))
            throw ParseError("chained comparisons are not supported", cur().pos);
        return Expr::compare(*op, std::move(lhs), std::move(rhs), p);
    }

    static std::optional<CompareOp> compare_op(Tok k) {
        switch (k) {
            case Tok::eq: return CompareOp::eq;
            case Tok::ne: return CompareOp::ne;
            case Tok::lt: return CompareOp::lt;
            case Tok::le: return CompareOp::le;
            case Tok::gt: return CompareOp::gt;
            case Tok::ge: return CompareOp::ge;
            default: return std::nullopt;
        }
    }

    Expr parse_postfix() {
        Expr e = parse_atom();
        while (true) {
            if (at(Tok::dot))
                throw ForbiddenConstructError("forbidden construct: attribute access",
                                              cur().pos, "attribute");
            if (at(Tok::lparen)) {
                if (e.kind != Expr::Kind::var)
                    throw ParseError("only named API functions can be called", cur().pos);
                const SourcePos p = e.pos;
                advance();
                std::vector<Expr> args;
                if (!at(Tok::rparen)) {
                    args.push_back(parse_expr());
                    while (at(Tok::comma)) {
                        advance();
                        args.push_back(parse_expr());
                    }
                }
                expect(Tok::rparen, "')'");
                e = Expr::call(e.name, std::move(args), p);
                continue;
            }
            if (at(Tok::lbracket)) {
                const SourcePos p = cur().pos;
                advance();
                Expr sub = parse_expr();
                expect(Tok::rbracket, "']'");
                e = Expr::index(std::move(e), std::move(sub), p);
                continue;
            }
            break;
        }
        return e;
    }

    Expr parse_atom() {
        const Token& t = cur();
        switch (t.kind) {
            case Tok::name: {
                advance();
                return Expr::var(t.text, t.pos);
            }
            case Tok::kw_answer:
                throw ParseError("'answer' is a statement, not an expression", t.pos);
            case Tok::number: {
                advance();
                return number_literal(t, false);
            }
            case Tok::minus: {
                advance();
                if (!at(Tok::number))
                    throw ParseError("expected a number after '-'", t.pos);
                const Token num = cur();
                advance();
                return number_literal(num, true);
            }
            case Tok::string: {
                advance();
                return Expr::literal(Literal{t.text}, t.pos);
            }
            case Tok::kw_true:
                advance();
                return Expr::literal(Literal{true}, t.pos);
            case Tok::kw_false:
                advance();
                return Expr::literal(Literal{false}, t.pos);
            case Tok::lparen: {
                advance();
                Expr e = parse_expr();
                expect(Tok::rparen, "')'");
                return e;
            }
            default:
                throw ParseError("expected an expression, got '" + describe(t) + "'", t.pos);
        }
    }

    static Expr number_literal(const Token& t, bool negative) {
        if (t.is_float) {
            double v = std::strtod(t.text.c_str(), nullptr);
            return Expr::literal(Literal{negative ? -v : v}, t.pos);
        }
        long long v = std::strtoll(t.text.c_str(), nullptr, 10);
        return Expr::literal(Literal{negative ? -v : v}, t.pos);
    }

    static std::string describe(const Token& t) {
        switch (t.kind) {
            case Tok::newline: return "end of line";
            case Tok::indent: return "indent";
            case Tok::dedent: return "dedent";
            case Tok::end: return "end of input";
            default: return t.text;
        }
    }

    const Token& cur() const { return toks_[idx_]; }
    Tok peek_kind(size_t ahead) const {
        return idx_ + ahead < toks_.size() ? toks_[idx_ + ahead].kind : Tok::end;
    }
    bool at(Tok k) const { return cur().kind == k; }
    void advance() {
        if (idx_ + 1 < toks_.size()) ++idx_;
    }
    void expect(Tok k, const char* what) {
        if (!at(k))
            throw ParseError(std::string("expected ") + what + ", got '" + describe(cur()) + "'",
                             cur().pos);
        advance();
    }
    void skip_newlines() {
        while (at(Tok::newline)) advance();
    }

    std::vector<Token> toks_;
    size_t idx_ = 0;
};

}  // namespace

Ast parse_program(const std::string& code) {
    Lexer lexer(code);
    Parser parser(lexer.run());
    return parser.parse();
}

// ---------------------------------------------------------------------------
// Pretty printer

namespace {

// precedence: or=1, and=2, not=3, compare=4, postfix=5, atom=6
int expr_prec(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::bool_op:
            if (e.bop == BoolOp::logical_or) return 1;
            if (e.bop == BoolOp::logical_and) return 2;
            return 3;
        case Expr::Kind::compare: return 4;
        case Expr::Kind::call:
        case Expr::Kind::index: return 5;
        default: return 6;
    }
}

std::string escape_string(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out.push_back(c);
        }
    }
    out.push_back('"');
    return out;
}

// Shortest plain-decimal rendering that strtod parses back to the same bits.
std::string format_float_literal(double v) {
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*f", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17f", v);
    return buf;
}

std::string print_literal(const Literal& lit) {
    if (std::holds_alternative<std::string>(lit))
        return escape_string(std::get<std::string>(lit));
    if (std::holds_alternative<long long>(lit))
        return std::to_string(std::get<long long>(lit));
    if (std::holds_alternative<double>(lit))
        return format_float_literal(std::get<double>(lit));
    return std::get<bool>(lit) ? "True" : "False";
}

std::string print_expr(const Expr& e, int parent_prec) {
    std::string out;
    switch (e.kind) {
        case Expr::Kind::literal:
            out = print_literal(e.lit);
            break;
        case Expr::Kind::var:
            out = e.name;
            break;
        case Expr::Kind::call: {
            out = e.name + "(";
            for (size_t i = 0; i < e.children.size(); ++i) {
                if (i) out += ", ";
                out += print_expr(e.children[i], 0);
            }
            out += ")";
            break;
        }
        case Expr::Kind::index:
            out = print_expr(e.children[0], 5) + "[" + print_expr(e.children[1], 0) + "]";
            break;
        case Expr::Kind::compare:
            out = print_expr(e.children[0], 5) + " " + to_string(e.cmp) + " " +
                  print_expr(e.children[1], 5);
            break;
        case Expr::Kind::bool_op: {
            if (e.bop == BoolOp::logical_not) {
                out = "not " + print_expr(e.children[0], 3);
            } else {
                const std::string sep = e.bop == BoolOp::logical_and ? " and " : " or ";
                const int child_prec = expr_prec(e) + 1;
                for (size_t i = 0; i < e.children.size(); ++i) {
                    if (i) out += sep;
                    out += print_expr(e.children[i], child_prec);
                }
            }
            break;
        }
    }
    if (expr_prec(e) < parent_prec) return "(" + out + ")";
    return out;
}

void print_block(const std::vector<Stmt>& stmts, int depth, std::string& out);

void print_stmt(const Stmt& s, int depth, std::string& out) {
    const std::string pad(static_cast<size_t>(depth) * 4, ' ');
    switch (s.kind) {
        case Stmt::Kind::assign:
            out += pad + s.target + " = " + print_expr(s.exprs[0], 0) + "\n";
            break;
        case Stmt::Kind::expr_stmt:
            out += pad + print_expr(s.exprs[0], 0) + "\n";
            break;
        case Stmt::Kind::answer:
            out += pad + "answer(" + print_expr(s.exprs[0], 0) + ")\n";
            break;
        case Stmt::Kind::if_stmt:
            out += pad + "if " + print_expr(s.exprs[0], 0) + ":\n";
            print_block(s.body, depth + 1, out);
            if (!s.else_body.empty()) {
                out += pad + "else:\n";
                print_block(s.else_body, depth + 1, out);
            }
            break;
        case Stmt::Kind::for_stmt:
            out += pad + "for " + s.target + " in " + print_expr(s.exprs[0], 0) + ":\n";
            print_block(s.body, depth + 1, out);
            break;
    }
}

void print_block(const std::vector<Stmt>& stmts, int depth, std::string& out) {
    for (const auto& s : stmts) print_stmt(s, depth, out);
}

}  // namespace

std::string pretty_print(const Ast& ast) {
    std::string out;
    print_block(ast.statements, 0, out);
    return out;
}

// ---------------------------------------------------------------------------
// Code extraction

namespace {

bool line_starts_statement(const std::string& line) {
    const std::string t = trim(line);
    if (t.empty()) return false;
    if ((t.rfind("if ", 0) == 0 || t.rfind("for ", 0) == 0) && t.back() == ':') return true;
    try {
        parse_program(t);
        return true;
    } catch (const Error&) {
        return false;
    }
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    lines.push_back(std::move(cur));
    return lines;
}

}  // namespace

std::string extract_code(const std::string& raw) {
    const auto lines = split_lines(raw);

    // first fenced block wins
    for (size_t i = 0; i < lines.size(); ++i) {
        if (trim(lines[i]).rfind("```", 0) != 0) continue;
        std::string block;
        size_t j = i + 1;
        for (; j < lines.size() && trim(lines[j]).rfind("```", 0) != 0; ++j)
            block += lines[j] + "\n";
        if (trim(block).empty())
            throw ExtractionError("fenced block contains no code", raw);
        return block;
    }

    // otherwise: suffix starting at the first statement-shaped line
    for (size_t i = 0; i < lines.size(); ++i) {
        if (!line_starts_statement(lines[i])) continue;
        std::string suffix;
        for (size_t j = i; j < lines.size(); ++j) {
            suffix += lines[j];
            if (j + 1 < lines.size()) suffix += "\n";
        }
        return suffix;
    }
    throw ExtractionError("no extractable code region in completion", raw);
}

// ---------------------------------------------------------------------------
// Registry

const ApiEntry* ApiRegistry::find(const std::string& name) const {
    for (const auto& e : entries)
        if (e.name == name) return &e;
    return nullptr;
}

std::string to_string(ValueKind k) {
    switch (k) {
        case ValueKind::clip: return "clip";
        case ValueKind::text: return "text";
        case ValueKind::boxes: return "boxes";
        case ValueKind::texts: return "texts";
        case ValueKind::boolean: return "bool";
        case ValueKind::number: return "number";
        case ValueKind::any: return "any";
    }
    return "?";
}

ApiRegistry ApiRegistry::standard() {
    ApiRegistry r;
    r.entries = {
        {"trim",
         {ValueKind::clip, ValueKind::text},
         ValueKind::clip,
         SubTask::ground,
         "trim(clip, description) -> clip: restrict a clip to the time window "
         "where the described event happens."},
        {"find",
         {ValueKind::clip, ValueKind::text},
         ValueKind::boxes,
         SubTask::detect,
         "find(clip, object) -> boxes: detect the named object in the clip; "
         "returns bounding boxes sorted by confidence."},
        {"exists",
         {ValueKind::clip, ValueKind::text},
         ValueKind::boolean,
         SubTask::detect,
         "exists(clip, object) -> bool: True when the named object is visible "
         "in the clip."},
        {"recognize_actions",
         {ValueKind::clip},
         ValueKind::texts,
         SubTask::recognize,
         "recognize_actions(clip) -> list of text: up to five actions most "
         "relevant to the clip, most likely first."},
        {"query",
         {ValueKind::clip, ValueKind::text},
         ValueKind::text,
         SubTask::qa,
         "query(clip, question) -> text: answer a simple question about the "
         "clip, using information gathered so far."},
        {"best_text_match",
         {ValueKind::texts, ValueKind::text},
         ValueKind::text,
         SubTask::logic,
         "best_text_match(candidates, text) -> text: the candidate most "
         "similar to the text; no model call."},
    };
    return r;
}

json ApiRegistry::to_json() const {
    json out = json::array();
    for (const auto& e : entries) {
        json params = json::array();
        for (auto p : e.params) params.push_back(to_string(p));
        out.push_back(json{{"name", e.name},
                           {"params", std::move(params)},
                           {"returns", to_string(e.returns)},
                           {"sub_task", videocot::to_string(e.tag)},
                           {"doc", e.doc}});
    }
    return out;
}

std::string ApiRegistry::docs_text() const {
    std::string out;
    for (const auto& e : entries) out += "- " + e.doc + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Validation

const std::vector<std::string>& prebound_names() {
    static const std::vector<std::string> names = {"video", "question", "options"};
    return names;
}

namespace {

class Validator {
public:
    Validator(const ApiRegistry& registry) : registry_(registry) {}

    ValidatedProgram run(const Ast& ast) {
        std::set<std::string> env(prebound_names().begin(), prebound_names().end());
        check_block(ast.statements, env);
        if (!always_answers(ast.statements)) {
            const SourcePos p =
                ast.statements.empty() ? SourcePos{1, 1} : ast.statements.back().pos;
            throw ValidateError(ValidateError::Kind::missing_answer,
                                "not every execution path reaches an answer(...)", p);
        }
        ValidatedProgram vp;
        vp.ast = ast;
        vp.bindings = std::move(bindings_);
        vp.program_hash = fnv1a64_hex(pretty_print(ast));
        return vp;
    }

private:
    void check_block(const std::vector<Stmt>& stmts, std::set<std::string>& env) {
        for (const auto& s : stmts) check_stmt(s, env);
    }

    void check_stmt(const Stmt& s, std::set<std::string>& env) {
        switch (s.kind) {
            case Stmt::Kind::assign:
                check_expr(s.exprs[0], env);
                env.insert(s.target);
                break;
            case Stmt::Kind::expr_stmt:
            case Stmt::Kind::answer:
                check_expr(s.exprs[0], env);
                break;
            case Stmt::Kind::if_stmt: {
                check_expr(s.exprs[0], env);
                std::set<std::string> then_env = env;
                check_block(s.body, then_env);
                std::set<std::string> else_env = env;
                check_block(s.else_body, else_env);
                // only names bound on both paths survive
                std::set<std::string> merged;
                std::set_intersection(then_env.begin(), then_env.end(), else_env.begin(),
                                      else_env.end(), std::inserter(merged, merged.begin()));
                env = std::move(merged);
                break;
            }
            case Stmt::Kind::for_stmt: {
                check_expr(s.exprs[0], env);
                std::set<std::string> body_env = env;
                body_env.insert(s.target);
                check_block(s.body, body_env);
                // the loop may run zero times: nothing it binds survives
                break;
            }
        }
    }

    void check_expr(const Expr& e, const std::set<std::string>& env) {
        switch (e.kind) {
            case Expr::Kind::literal:
                break;
            case Expr::Kind::var:
                if (!env.count(e.name))
                    throw ValidateError(ValidateError::Kind::unbound_variable,
                                        "use of variable '" + e.name +
                                            "' before assignment", e.pos);
                break;
            case Expr::Kind::call: {
                for (const auto& arg : e.children) check_expr(arg, env);
                const ApiEntry* entry = registry_.find(e.name);
                if (!entry)
                    throw ValidateError(ValidateError::Kind::unknown_api,
                                        "unknown API '" + e.name + "'", e.pos);
                if (entry->params.size() != e.children.size())
                    throw ValidateError(
                        ValidateError::Kind::arity_mismatch,
                        "'" + e.name + "' expects " + std::to_string(entry->params.size()) +
                            " argument(s), got " + std::to_string(e.children.size()),
                        e.pos);
                bindings_.push_back(
                    CallBinding{e.pos, e.name, entry->tag, entry->params.size()});
                break;
            }
            default:
                for (const auto& c : e.children) check_expr(c, env);
        }
    }

    static bool always_answers(const std::vector<Stmt>& stmts) {
        for (const auto& s : stmts) {
            if (s.kind == Stmt::Kind::answer) return true;
            if (s.kind == Stmt::Kind::if_stmt && !s.else_body.empty() &&
                always_answers(s.body) && always_answers(s.else_body))
                return true;
            // for-loops may run zero times and never guarantee an answer
        }
        return false;
    }

    const ApiRegistry& registry_;
    std::vector<CallBinding> bindings_;
};

}  // namespace

ValidatedProgram validate_program(const Ast& ast, const ApiRegistry& registry) {
    return Validator(registry).run(ast);
}

}  // namespace dsl
}  // namespace videocot
