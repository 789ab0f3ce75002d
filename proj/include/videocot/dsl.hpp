#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "videocot/model.hpp"

namespace videocot {
namespace dsl {

// A restricted Python-like language: newline-separated statements,
// indentation blocks, `if`/`else`, `for ... in ...`, calls into a fixed API
// registry, indexing, comparisons and boolean operators. No imports, no
// attribute access, no `while`, no function definitions. The grammar
// reference lives in docs/dsl.md.

enum class CompareOp { eq, ne, lt, le, gt, ge };
enum class BoolOp { logical_and, logical_or, logical_not };

std::string to_string(CompareOp op);
std::string to_string(BoolOp op);

/// String, integer, float or boolean literal. Integer and float literals stay
/// distinct so pretty-printing round-trips.
using Literal = std::variant<std::string, long long, double, bool>;

struct Expr {
    enum class Kind { literal, var, call, index, compare, bool_op };

    Kind kind = Kind::literal;
    SourcePos pos;

    Literal lit;                // literal
    std::string name;           // var / call target
    std::vector<Expr> children; // call args | index {base, subscript} |
                                // compare {lhs, rhs} | bool_op operands
    CompareOp cmp = CompareOp::eq;
    BoolOp bop = BoolOp::logical_and;

    static Expr literal(Literal v, SourcePos p = {});
    static Expr var(std::string n, SourcePos p = {});
    static Expr call(std::string api, std::vector<Expr> args, SourcePos p = {});
    static Expr index(Expr base, Expr sub, SourcePos p = {});
    static Expr compare(CompareOp op, Expr lhs, Expr rhs, SourcePos p = {});
    static Expr bool_op(BoolOp op, std::vector<Expr> operands, SourcePos p = {});
};

/// Structural equality; source positions are ignored.
bool operator==(const Expr& a, const Expr& b);
inline bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

struct Stmt {
    enum class Kind { assign, expr_stmt, if_stmt, for_stmt, answer };

    Kind kind = Kind::expr_stmt;
    SourcePos pos;

    std::string target;          // assign name / for loop variable
    std::vector<Expr> exprs;     // assign value | expr | if condition |
                                 // for iterable | answer value
    std::vector<Stmt> body;      // if-then / for body
    std::vector<Stmt> else_body; // if-else

    static Stmt assign(std::string name, Expr value, SourcePos p = {});
    static Stmt expr_stmt(Expr e, SourcePos p = {});
    static Stmt if_stmt(Expr cond, std::vector<Stmt> then_block,
                        std::vector<Stmt> else_block, SourcePos p = {});
    static Stmt for_stmt(std::string var, Expr iterable, std::vector<Stmt> body,
                         SourcePos p = {});
    static Stmt answer(Expr e, SourcePos p = {});
};

bool operator==(const Stmt& a, const Stmt& b);
inline bool operator!=(const Stmt& a, const Stmt& b) { return !(a == b); }

struct Ast {
    std::vector<Stmt> statements;
};

bool operator==(const Ast& a, const Ast& b);
inline bool operator!=(const Ast& a, const Ast& b) { return !(a == b); }

// ---------------------------------------------------------------------------
// API registry

enum class ValueKind { clip, text, boxes, texts, boolean, number, any };

std::string to_string(ValueKind k);

struct ApiEntry {
    std::string name;
    std::vector<ValueKind> params;
    ValueKind returns = ValueKind::any;
    SubTask tag = SubTask::logic;
    std::string doc;
};

struct ApiRegistry {
    std::vector<ApiEntry> entries;

    const ApiEntry* find(const std::string& name) const;

    /// The fixed production surface: trim, find, exists, recognize_actions,
    /// query, best_text_match.
    static ApiRegistry standard();

    /// JSON form consumed by the decomposer prompt builder.
    json to_json() const;
    /// Plain-text API documentation injected into the program-generation prompt.
    std::string docs_text() const;
};

// ---------------------------------------------------------------------------
// Source handling

enum class ProgramOrigin { llm, handwritten };

struct SourceProgram {
    std::string raw_llm_output;
    std::string code;  // non-empty once extraction succeeded
    ProgramOrigin origin = ProgramOrigin::llm;
};

/// Pulls the program text out of an LLM completion: the first fenced code
/// block if any, otherwise the suffix starting at the first line that parses
/// as a statement. Pure function. Throws ExtractionError when no code region
/// exists.
std::string extract_code(const std::string& raw);

/// Throws ParseError (with line/column) or ForbiddenConstructError.
Ast parse_program(const std::string& code);

/// Canonical text form; parse_program(pretty_print(a)) is structurally equal
/// to a.
std::string pretty_print(const Ast& ast);

/// One call site bound to its registry entry, in evaluation order.
struct CallBinding {
    SourcePos pos;
    std::string api;
    SubTask tag;
    size_t arity = 0;
};

struct ValidatedProgram {
    Ast ast;
    std::vector<CallBinding> bindings;
    std::string program_hash;  // fnv1a64 of the canonical text
};

/// Names pre-bound by the executor before the first statement runs.
const std::vector<std::string>& prebound_names();

/// Static checks: every call targets a registry entry with matching arity,
/// every variable use is dominated by an assignment, and every execution path
/// terminates in an `answer`. Throws ValidateError.
ValidatedProgram validate_program(const Ast& ast, const ApiRegistry& registry);

}  // namespace dsl
}  // namespace videocot
