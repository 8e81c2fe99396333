#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/test_util.hpp"
#include "uvl2ivml/uvl/parser.hpp"
#include "uvl2ivml/uvl/validate.hpp"

using namespace uvl2ivml;

namespace {

std::vector<Diagnostic> check(const std::string& text) {
    return uvl::validate_uvl(uvl::parse_uvl(text, "t.uvl"));
}

int errors(const std::vector<Diagnostic>& diags) {
    int n = 0;
    for (const Diagnostic& d : diags)
        if (d.severity == Severity::error)
            ++n;
    return n;
}

} // namespace

TEST_CASE("onlineshop model is valid") {
    std::vector<Diagnostic> diags =
        uvl::validate_uvl(uvl::parse_uvl(testing::read_data("onlineshop.uvl")));
    CHECK(diags.empty());
}

TEST_CASE("duplicate feature names") {
    std::vector<Diagnostic> diags =
        uvl::validate_uvl(uvl::parse_uvl(testing::read_data("dup_names.uvl")));
    REQUIRE(errors(diags) == 1);
    CHECK(diags[0].message.find("duplicate") != std::string::npos);
}

TEST_CASE("unknown constraint reference") {
    std::vector<Diagnostic> diags = check("features\n  R\nconstraints\n  R => Ghost\n");
    REQUIRE(errors(diags) == 1);
    CHECK(diags[0].message.find("Ghost") != std::string::npos);
}

TEST_CASE("cardinality bounds") {
    CHECK(errors(check("features\n  R\n    [3..2]\n      A\n      B\n      C\n")) == 1);
    CHECK(errors(check("features\n  R\n    [1..4]\n      A\n      B\n")) == 1);
    CHECK(errors(check("features\n  R\n    [0..2]\n      A\n      B\n")) == 0);
}

TEST_CASE("single-child or/alternative groups warn but do not fail") {
    std::vector<Diagnostic> diags = check("features\n  R\n    or\n      A\n");
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].severity == Severity::warning);
    diags = check("features\n  R\n    alternative\n      A\n");
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].severity == Severity::warning);
}

TEST_CASE("len on a boolean feature is a type error") {
    std::vector<Diagnostic> diags =
        check("features\n  R\n    mandatory\n      Catalog\nconstraints\n  len(Catalog) > 1\n");
    REQUIRE(errors(diags) == 1);
    CHECK(diags[0].message.find("len") != std::string::npos);
}

TEST_CASE("arithmetic requires numeric operands") {
    CHECK(errors(check("features\n  R\n    optional\n      A\n      B\n"
                       "constraints\n  A + B > 1\n")) > 0);
    CHECK(errors(check("features\n  R\n    mandatory\n      Integer N\n"
                       "constraints\n  floor(N) >= 0\n")) == 0);
}

TEST_CASE("floor on a string feature is a type error") {
    CHECK(errors(check("features\n  R\n    mandatory\n      String S\n"
                       "constraints\n  floor(S) > 1\n")) > 0);
}

TEST_CASE("comparisons require matching operand categories") {
    CHECK(errors(check("features\n  R\n    mandatory\n      Integer N\n"
                       "constraints\n  N == 'text'\n")) > 0);
    CHECK(errors(check("features\n  R\n    mandatory\n      String S\n"
                       "constraints\n  S == 'text'\n")) == 0);
}

TEST_CASE("constraint must be boolean overall") {
    CHECK(errors(check("features\n  R\n    mandatory\n      Integer N\n"
                       "constraints\n  N + 1\n")) == 1);
}

TEST_CASE("typed features cannot join choice groups") {
    CHECK(errors(check("features\n  R\n    alternative\n      A\n      Integer N\n")) == 1);
    CHECK(errors(check("features\n  R\n    or\n      String S\n      B\n")) == 1);
}
