#include <doctest.h>

#include <random>

#include "ast_gen.hpp"
#include "videocot/dsl.hpp"

using namespace videocot;
using namespace videocot::dsl;

TEST_SUITE_BEGIN("dsl");

namespace {

const char* kFig3Chain =
    "clip = trim(video, \"after taking the food\")\n"
    "boxes = find(clip, \"container\")\n"
    "answer(query(clip, question))\n";

}  // namespace

TEST_CASE("parse a three-step chain with ground/detect/qa tags") {
    const Ast ast = parse_program(kFig3Chain);
    REQUIRE(ast.statements.size() == 3);
    CHECK(ast.statements[0].kind == Stmt::Kind::assign);
    CHECK(ast.statements[0].target == "clip");
    CHECK(ast.statements[2].kind == Stmt::Kind::answer);

    const ValidatedProgram vp = validate_program(ast, ApiRegistry::standard());
    REQUIRE(vp.bindings.size() == 3);
    CHECK(vp.bindings[0].tag == SubTask::ground);
    CHECK(vp.bindings[1].tag == SubTask::detect);
    CHECK(vp.bindings[2].tag == SubTask::qa);
}

TEST_CASE("parse answer of a literal") {
    const Ast ast = parse_program("answer(\"yes\")\n");
    REQUIRE(ast.statements.size() == 1);
    CHECK(ast.statements[0].kind == Stmt::Kind::answer);
    CHECK(std::get<std::string>(ast.statements[0].exprs[0].lit) == "yes");
}

TEST_CASE("forbidden constructs are a distinct error class") {
    CHECK_THROWS_AS(parse_program("import os\n"), ForbiddenConstructError);
    CHECK_THROWS_AS(parse_program("while True:\n    answer(\"x\")\n"),
                    ForbiddenConstructError);
    CHECK_THROWS_AS(parse_program("answer(video.frames)\n"), ForbiddenConstructError);
    CHECK_THROWS_AS(parse_program("def f():\n    answer(\"x\")\n"),
                    ForbiddenConstructError);
}

TEST_CASE("syntax errors carry line and column") {
    try {
        parse_program("clip = trim(video, \"x\")\nanswer(\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.pos.line == 2);
        CHECK(e.pos.col > 0);
    }
    CHECK_THROWS_AS(parse_program(""), ParseError);
    CHECK_THROWS_AS(parse_program("x = = 3\n"), ParseError);
    CHECK_THROWS_AS(parse_program("answer(1 + 2)\n"), ParseError);  // no arithmetic
    CHECK_THROWS_AS(parse_program("a < b < c\n"), ParseError);      // no chaining
}

TEST_CASE("validate_program rejects unknown APIs") {
    const Ast ast = parse_program("answer(segment(video, \"x\"))\n");
    CHECK_THROWS_AS(validate_program(ast, ApiRegistry::standard()), ValidateError);
    try {
        validate_program(ast, ApiRegistry::standard());
    } catch (const ValidateError& e) {
        CHECK(e.kind == ValidateError::Kind::unknown_api);
    }
}

TEST_CASE("validate_program rejects arity mismatch") {
    const Ast ast = parse_program("answer(trim(video))\n");
    try {
        validate_program(ast, ApiRegistry::standard());
        FAIL("expected ValidateError");
    } catch (const ValidateError& e) {
        CHECK(e.kind == ValidateError::Kind::arity_mismatch);
    }
}

TEST_CASE("validate_program rejects use before assignment") {
    const Ast ast = parse_program("answer(x)\n");
    try {
        validate_program(ast, ApiRegistry::standard());
        FAIL("expected ValidateError");
    } catch (const ValidateError& e) {
        CHECK(e.kind == ValidateError::Kind::unbound_variable);
    }
}

TEST_CASE("a name bound in only one branch does not survive the if") {
    const char* code =
        "if exists(video, \"cup\"):\n"
        "    x = \"a\"\n"
        "else:\n"
        "    y = \"b\"\n"
        "answer(x)\n";
    try {
        validate_program(parse_program(code), ApiRegistry::standard());
        FAIL("expected ValidateError");
    } catch (const ValidateError& e) {
        CHECK(e.kind == ValidateError::Kind::unbound_variable);
    }
}

TEST_CASE("validate_program requires an answer on every path") {
    try {
        validate_program(parse_program("x = recognize_actions(video)\n"),
                         ApiRegistry::standard());
        FAIL("expected ValidateError");
    } catch (const ValidateError& e) {
        CHECK(e.kind == ValidateError::Kind::missing_answer);
    }
    // an if with answers on both paths suffices
    const char* both =
        "if exists(video, \"cup\"):\n"
        "    answer(\"yes\")\n"
        "else:\n"
        "    answer(\"no\")\n";
    CHECK_NOTHROW(validate_program(parse_program(both), ApiRegistry::standard()));
    // a for-loop body may never run
    const char* loop_only =
        "for a in recognize_actions(video):\n"
        "    answer(a)\n";
    CHECK_THROWS_AS(validate_program(parse_program(loop_only), ApiRegistry::standard()),
                    ValidateError);
}

TEST_CASE("prebound names validate without assignment") {
    const char* code = "answer(best_text_match(options, question))\n";
    CHECK_NOTHROW(validate_program(parse_program(code), ApiRegistry::standard()));
}

TEST_CASE("pretty_print round-trips the chain and escapes strings") {
    const Ast ast = parse_program(kFig3Chain);
    CHECK(parse_program(pretty_print(ast)) == ast);

    const Ast quoted = parse_program("answer(\"he said \\\"hi\\\"\\n\")\n");
    CHECK(parse_program(pretty_print(quoted)) == quoted);

    const char* nested =
        "acts = recognize_actions(video)\n"
        "for a in acts:\n"
        "    if a == \"opening the door\" and not exists(video, \"cup\"):\n"
        "        answer(a)\n"
        "answer(acts[0])\n";
    const Ast n = parse_program(nested);
    CHECK(parse_program(pretty_print(n)) == n);
}

// ---------------------------------------------------------------------------
// Property-based round-trip with a random AST generator

TEST_CASE("round-trip holds for 2000 generated ASTs") {
    testsupport::AstGen gen(42);
    for (int iter = 0; iter < 2000; ++iter) {
        const Ast ast = gen.program();
        const std::string text = pretty_print(ast);
        CAPTURE(text);
        const Ast back = parse_program(text);
        REQUIRE(back == ast);
    }
}

TEST_CASE("extraction determinism and pretty_print purity") {
    testsupport::AstGen gen(43);
    const Ast ast = gen.program();
    CHECK(pretty_print(ast) == pretty_print(ast));
}

// ---------------------------------------------------------------------------
// extract_code

TEST_CASE("extract_code takes the first fenced block") {
    const std::string raw =
        "Here is the program:\n```python\nclip = trim(video, 'before')\n"
        "answer(query(clip, question))\n```\nHope that helps!";
    CHECK(extract_code(raw) ==
          "clip = trim(video, 'before')\nanswer(query(clip, question))\n");
}

TEST_CASE("extract_code is the identity on a bare program") {
    const std::string bare = "clip = trim(video, \"x\")\nanswer(query(clip, question))";
    CHECK(extract_code(bare) == bare);
}

TEST_CASE("extract_code drops a prose preamble") {
    const std::string raw =
        "Sure! The question needs grounding first.\n"
        "clip = trim(video, \"x\")\n"
        "answer(query(clip, question))";
    CHECK(extract_code(raw) ==
          "clip = trim(video, \"x\")\nanswer(query(clip, question))");
}

TEST_CASE("extract_code fails on pure prose, carrying the raw text") {
    try {
        extract_code("I cannot write a program for this question.");
        FAIL("expected ExtractionError");
    } catch (const ExtractionError& e) {
        CHECK(e.raw_text.find("cannot write") != std::string::npos);
    }
}

TEST_CASE("registry serialization lists every entry") {
    const ApiRegistry reg = ApiRegistry::standard();
    const json j = reg.to_json();
    CHECK(j.size() == reg.entries.size());
    CHECK(reg.docs_text().find("trim(") != std::string::npos);
    CHECK(reg.find("query") != nullptr);
    CHECK(reg.find("query")->tag == SubTask::qa);
    CHECK(reg.find("nonesuch") == nullptr);
}

TEST_SUITE_END();
