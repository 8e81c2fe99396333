#pragma once

#include "uvl2ivml/diagnostics.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace uvl2ivml::uvl {

enum class FeatureType { boolean, string_type, integer, real };

enum class GroupKind { mandatory, optional, alternative, or_group, cardinality };

/// Attribute as written in a `{key value, ...}` block. Only `abstract true`
/// is interpreted; everything else is retained verbatim.
struct Attribute {
    std::string key;
    std::string value; // raw token text, empty when the key stands alone
};

struct GroupNode;

struct FeatureNode {
    std::string name;
    FeatureType type = FeatureType::boolean;
    bool is_abstract = false;
    std::vector<Attribute> attributes;
    std::vector<GroupNode> groups; // document order
    SourceLoc loc;
};

struct GroupNode {
    GroupKind kind = GroupKind::mandatory;
    int lo = 0; // cardinality bounds, unused otherwise
    int hi = 0;
    std::vector<FeatureNode> children; // document order
    SourceLoc loc;
};

enum class ExprKind {
    feature_ref,
    bool_lit,
    int_lit,
    real_lit,
    string_lit,
    not_op,
    and_op,
    or_op,
    implies,
    iff,
    gt,
    ge,
    lt,
    le,
    eq,
    ne,
    add,
    sub,
    mul,
    divide,
    len_fn,
    floor_fn,
};

struct ConstraintExpr;
using ExprPtr = std::unique_ptr<ConstraintExpr>;

struct ConstraintExpr {
    ExprKind kind;
    SourceLoc loc;
    std::string text;     // feature name or string literal payload
    bool bool_value = false;
    long long int_value = 0;
    double real_value = 0.0;
    ExprPtr lhs; // unary operators and functions use lhs only
    ExprPtr rhs;
};

ExprPtr make_expr(ExprKind kind, SourceLoc loc = {});
ExprPtr clone(const ConstraintExpr& expr);

struct UvlModel {
    std::optional<std::string> namespace_name;
    FeatureNode root;
    std::vector<ExprPtr> constraints; // source order
    std::string source_name;
};

bool equal(const ConstraintExpr& a, const ConstraintExpr& b);
bool equal(const FeatureNode& a, const FeatureNode& b);
bool equal(const UvlModel& a, const UvlModel& b);

/// Flattened, non-owning view of a model: pre-order feature list with
/// parent/owning-group links. Pointers stay valid while the model is alive
/// and unmodified.
struct ModelIndex {
    std::vector<const FeatureNode*> features; // pre-order
    std::vector<int> parent;                  // index into features, -1 for root
    std::vector<const GroupNode*> owning_group; // group containing the feature, nullptr for root
    std::unordered_map<std::string_view, int> by_name; // first occurrence wins

    static ModelIndex build(const UvlModel& model);

    int index_of(std::string_view name) const {
        auto it = by_name.find(name);
        return it == by_name.end() ? -1 : it->second;
    }
};

} // namespace uvl2ivml::uvl
