#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/model_gen.hpp"
#include "support/test_util.hpp"
#include "uvl2ivml/uvl/parser.hpp"
#include "uvl2ivml/uvl/printer.hpp"

#include <random>

using namespace uvl2ivml;
using uvl::ExprKind;
using uvl::GroupKind;

namespace {

int count_features(const uvl::FeatureNode& f) {
    int n = 1;
    for (const uvl::GroupNode& g : f.groups)
        for (const uvl::FeatureNode& c : g.children)
            n += count_features(c);
    return n;
}

const uvl::FeatureNode* find_feature(const uvl::FeatureNode& f, std::string_view name) {
    if (f.name == name)
        return &f;
    for (const uvl::GroupNode& g : f.groups)
        for (const uvl::FeatureNode& c : g.children)
            if (const uvl::FeatureNode* hit = find_feature(c, name))
                return hit;
    return nullptr;
}

} // namespace

TEST_CASE("minimal model: one root, no constraints") {
    uvl::UvlModel model = uvl::parse_uvl("features\n\tA");
    CHECK(model.root.name == "A");
    CHECK(model.root.groups.empty());
    CHECK(model.constraints.empty());
    CHECK(!model.namespace_name.has_value());
}

TEST_CASE("onlineshop model parses to 26 features and 4 constraints") {
    uvl::UvlModel model = uvl::parse_uvl(testing::read_data("onlineshop.uvl"), "onlineshop.uvl");
    CHECK(model.namespace_name == std::string("Onlineshop"));
    CHECK(model.root.name == "Onlineshop");
    CHECK(model.root.is_abstract);
    CHECK(count_features(model.root) == 26);
    CHECK(model.constraints.size() == 4);

    // Root groups in document order: mandatory, optional, mandatory.
    REQUIRE(model.root.groups.size() == 3);
    CHECK(model.root.groups[0].kind == GroupKind::mandatory);
    CHECK(model.root.groups[1].kind == GroupKind::optional);
    CHECK(model.root.groups[2].kind == GroupKind::mandatory);
    CHECK(model.root.groups[0].children[0].name == "Payment");
    CHECK(model.root.groups[1].children[0].name == "Newsletter");

    const uvl::FeatureNode* review = find_feature(model.root, "Review");
    REQUIRE(review != nullptr);
    REQUIRE(review->groups.size() == 1);
    CHECK(review->groups[0].kind == GroupKind::cardinality);
    CHECK(review->groups[0].lo == 2);
    CHECK(review->groups[0].hi == 3);
    CHECK(review->groups[0].children.size() == 3);

    const uvl::FeatureNode* payment = find_feature(model.root, "Payment");
    REQUIRE(payment != nullptr);
    CHECK(payment->is_abstract);
    CHECK(payment->groups[0].kind == GroupKind::alternative);

    CHECK(model.constraints[0]->kind == ExprKind::or_op);
    CHECK(model.constraints[1]->kind == ExprKind::implies);
    CHECK(model.constraints[2]->rhs->kind == ExprKind::not_op);
}

TEST_CASE("cardinality shorthand [n] means [n..n]") {
    uvl::UvlModel model =
        uvl::parse_uvl("features\n  R\n    [2]\n      A\n      B\n      C\n");
    REQUIRE(model.root.groups.size() == 1);
    CHECK(model.root.groups[0].kind == GroupKind::cardinality);
    CHECK(model.root.groups[0].lo == 2);
    CHECK(model.root.groups[0].hi == 2);
}

TEST_CASE("typed features use a type-keyword prefix") {
    uvl::UvlModel model = uvl::parse_uvl(
        "features\n  R\n    mandatory\n      String Name\n      Integer Count\n"
        "      Real Price\n      Plain\n");
    const uvl::GroupNode& g = model.root.groups[0];
    CHECK(g.children[0].type == uvl::FeatureType::string_type);
    CHECK(g.children[1].type == uvl::FeatureType::integer);
    CHECK(g.children[2].type == uvl::FeatureType::real);
    CHECK(g.children[3].type == uvl::FeatureType::boolean);
}

TEST_CASE("attribute blocks: abstract interpreted, others retained") {
    uvl::UvlModel model =
        uvl::parse_uvl("features\n  R {abstract true, vendor 'acme', weight 3}\n");
    CHECK(model.root.is_abstract);
    REQUIRE(model.root.attributes.size() == 3);
    CHECK(model.root.attributes[1].key == "vendor");
    CHECK(model.root.attributes[1].value == "'acme'");
    CHECK(model.root.attributes[2].value == "3");

    uvl::UvlModel plain = uvl::parse_uvl("features\n  R {abstract false}\n");
    CHECK(!plain.root.is_abstract);
}

TEST_CASE("mixed tabs and spaces are fine when blocks are consistent") {
    // Root indented with a tab, children with spaces; deeper counts win.
    uvl::UvlModel model = uvl::parse_uvl("features\n\tR\n      optional\n        A\n");
    CHECK(model.root.name == "R");
    CHECK(model.root.groups[0].children[0].name == "A");
}

TEST_CASE("inconsistent indentation is a located lex error") {
    try {
        uvl::parse_uvl("features\n    R\n        optional\n            A\n          B\n", "t.uvl");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.diagnostic().loc.line == 5);
        CHECK(e.diagnostic().message.find("indentation") != std::string::npos);
    }
}

TEST_CASE("two root features are rejected") {
    CHECK_THROWS_AS(uvl::parse_uvl("features\n  A\n  B\n"), ParseError);
}

TEST_CASE("reserved words cannot name features") {
    CHECK_THROWS_AS(uvl::parse_uvl("features\n  optional\n"), ParseError);
}

TEST_CASE("unexpected characters carry line and column") {
    try {
        uvl::parse_uvl(testing::read_data("garbage.uvl"), "garbage.uvl");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.diagnostic().loc.line > 0);
        CHECK(e.diagnostic().loc.column > 0);
        CHECK(e.diagnostic().source_name == "garbage.uvl");
    }
}

TEST_CASE("constraint operator precedence") {
    uvl::UvlModel model = uvl::parse_uvl(
        "features\n  R\n    optional\n      A\n      B\n      C\n"
        "constraints\n  A => B | C\n  !A & B\n  A <=> B => C\n  A => B => C\n");

    // A => (B | C)
    CHECK(model.constraints[0]->kind == ExprKind::implies);
    CHECK(model.constraints[0]->rhs->kind == ExprKind::or_op);
    // (!A) & B
    CHECK(model.constraints[1]->kind == ExprKind::and_op);
    CHECK(model.constraints[1]->lhs->kind == ExprKind::not_op);
    // A <=> (B => C)
    CHECK(model.constraints[2]->kind == ExprKind::iff);
    CHECK(model.constraints[2]->rhs->kind == ExprKind::implies);
    // right-associative: A => (B => C)
    CHECK(model.constraints[3]->kind == ExprKind::implies);
    CHECK(model.constraints[3]->rhs->kind == ExprKind::implies);
}

TEST_CASE("arithmetic and functions parse") {
    uvl::UvlModel model = uvl::parse_uvl(
        "features\n  R\n    mandatory\n      Integer N\n      String S\n"
        "constraints\n  len(S) > 2 + N * 3\n  floor(N / 2) == 1\n");
    const uvl::ConstraintExpr& c0 = *model.constraints[0];
    CHECK(c0.kind == ExprKind::gt);
    CHECK(c0.lhs->kind == ExprKind::len_fn);
    CHECK(c0.rhs->kind == ExprKind::add);
    CHECK(c0.rhs->rhs->kind == ExprKind::mul);
    const uvl::ConstraintExpr& c1 = *model.constraints[1];
    CHECK(c1.kind == ExprKind::eq);
    CHECK(c1.lhs->kind == ExprKind::floor_fn);
    CHECK(c1.lhs->lhs->kind == ExprKind::divide);
}

TEST_CASE("parse-print round trip on the onlineshop model") {
    uvl::UvlModel model = uvl::parse_uvl(testing::read_data("onlineshop.uvl"));
    std::string canonical = uvl::write_uvl(model);
    uvl::UvlModel again = uvl::parse_uvl(canonical);
    CHECK(uvl::equal(model, again));
    // Printing is a fixpoint once canonical.
    CHECK(uvl::write_uvl(again) == canonical);
}

TEST_CASE("parse-print round trip on random models") {
    std::mt19937 rng(20240817);
    for (int i = 0; i < 100; ++i) {
        uvl::UvlModel model = testing::random_model(rng);
        std::string text = uvl::write_uvl(model);
        uvl::UvlModel parsed = uvl::parse_uvl(text);
        if (!uvl::equal(model, parsed)) {
            CAPTURE(text);
            FAIL_CHECK("round trip changed the model");
        }
    }
}

TEST_CASE("constraint printing keeps structure under reparse") {
    uvl::UvlModel model = uvl::parse_uvl(
        "features\n  R\n    optional\n      A\n      B\n      C\n"
        "constraints\n  (A => B) => C\n  !(A & B)\n  A | (B | C)\n");
    std::string text = uvl::write_uvl(model);
    uvl::UvlModel again = uvl::parse_uvl(text);
    REQUIRE(uvl::equal(model, again));
    CHECK(uvl::write_constraint(*model.constraints[0]) == "(A => B) => C");
    CHECK(uvl::write_constraint(*model.constraints[1]) == "!(A & B)");
    CHECK(uvl::write_constraint(*model.constraints[2]) == "A | (B | C)");
}

TEST_CASE("comments and blank lines are ignored") {
    uvl::UvlModel model = uvl::parse_uvl(
        "// header comment\nfeatures\n\n  R // trailing\n    optional\n      A\n");
    CHECK(model.root.name == "R");
    CHECK(model.root.groups[0].children[0].name == "A");
}

TEST_CASE("parsing is total: random input returns a model or a located error") {
    std::mt19937 rng(987654);
    const std::string alphabet = "features\n\tconstraints mandatory or [].&|=><!()ABxyz01{}'\"";
    for (int i = 0; i < 500; ++i) {
        std::string text;
        int len = static_cast<int>(rng() % 160);
        for (int j = 0; j < len; ++j)
            text += alphabet[rng() % alphabet.size()];
        try {
            uvl::parse_uvl(text, "fuzz.uvl");
        } catch (const ParseError& e) {
            CHECK(e.diagnostic().loc.line >= 1);
        }
    }
}
