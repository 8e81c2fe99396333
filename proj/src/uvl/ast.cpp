#include "uvl2ivml/uvl/ast.hpp"

namespace uvl2ivml::uvl {

ExprPtr make_expr(ExprKind kind, SourceLoc loc) {
    auto e = std::make_unique<ConstraintExpr>();
    e->kind = kind;
    e->loc = loc;
    return e;
}

ExprPtr clone(const ConstraintExpr& expr) {
    auto e = make_expr(expr.kind, expr.loc);
    e->text = expr.text;
    e->bool_value = expr.bool_value;
    e->int_value = expr.int_value;
    e->real_value = expr.real_value;
    if (expr.lhs)
        e->lhs = clone(*expr.lhs);
    if (expr.rhs)
        e->rhs = clone(*expr.rhs);
    return e;
}

bool equal(const ConstraintExpr& a, const ConstraintExpr& b) {
    if (a.kind != b.kind)
        return false;
    switch (a.kind) {
    case ExprKind::feature_ref:
    case ExprKind::string_lit:
        return a.text == b.text;
    case ExprKind::bool_lit:
        return a.bool_value == b.bool_value;
    case ExprKind::int_lit:
        return a.int_value == b.int_value;
    case ExprKind::real_lit:
        return a.real_value == b.real_value;
    default:
        break;
    }
    if (static_cast<bool>(a.lhs) != static_cast<bool>(b.lhs) ||
        static_cast<bool>(a.rhs) != static_cast<bool>(b.rhs))
        return false;
    if (a.lhs && !equal(*a.lhs, *b.lhs))
        return false;
    if (a.rhs && !equal(*a.rhs, *b.rhs))
        return false;
    return true;
}

bool equal(const FeatureNode& a, const FeatureNode& b) {
    if (a.name != b.name || a.type != b.type || a.is_abstract != b.is_abstract)
        return false;
    if (a.attributes.size() != b.attributes.size() || a.groups.size() != b.groups.size())
        return false;
    for (size_t i = 0; i < a.attributes.size(); ++i)
        if (a.attributes[i].key != b.attributes[i].key ||
            a.attributes[i].value != b.attributes[i].value)
            return false;
    for (size_t i = 0; i < a.groups.size(); ++i) {
        const GroupNode& ga = a.groups[i];
        const GroupNode& gb = b.groups[i];
        if (ga.kind != gb.kind || ga.lo != gb.lo || ga.hi != gb.hi ||
            ga.children.size() != gb.children.size())
            return false;
        for (size_t j = 0; j < ga.children.size(); ++j)
            if (!equal(ga.children[j], gb.children[j]))
                return false;
    }
    return true;
}

bool equal(const UvlModel& a, const UvlModel& b) {
    if (a.namespace_name != b.namespace_name)
        return false;
    if (a.constraints.size() != b.constraints.size())
        return false;
    for (size_t i = 0; i < a.constraints.size(); ++i)
        if (!equal(*a.constraints[i], *b.constraints[i]))
            return false;
    return equal(a.root, b.root);
}

namespace {

void index_feature(ModelIndex& index, const FeatureNode& feature, int parent,
                   const GroupNode* group) {
    int self = static_cast<int>(index.features.size());
    index.features.push_back(&feature);
    index.parent.push_back(parent);
    index.owning_group.push_back(group);
    index.by_name.emplace(feature.name, self);
    for (const GroupNode& g : feature.groups)
        for (const FeatureNode& child : g.children)
            index_feature(index, child, self, &g);
}

} // namespace

ModelIndex ModelIndex::build(const UvlModel& model) {
    ModelIndex index;
    index_feature(index, model.root, -1, nullptr);
    return index;
}

} // namespace uvl2ivml::uvl
