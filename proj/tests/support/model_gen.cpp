#include "support/model_gen.hpp"

namespace uvl2ivml::testing {

using uvl::ExprKind;
using uvl::ExprPtr;
using uvl::FeatureNode;
using uvl::GroupKind;
using uvl::GroupNode;
using uvl::UvlModel;

namespace {

struct ProtoGroup {
    GroupKind kind;
    int lo = 0;
    int hi = 0;
    std::vector<int> children;
};

struct ProtoFeature {
    std::string name;
    std::vector<ProtoGroup> groups;
};

FeatureNode materialize(const std::vector<ProtoFeature>& protos, int index) {
    const ProtoFeature& proto = protos[index];
    FeatureNode node;
    node.name = proto.name;
    for (const ProtoGroup& pg : proto.groups) {
        GroupNode group;
        group.kind = pg.kind;
        group.lo = pg.lo;
        group.hi = pg.hi;
        for (int child : pg.children)
            group.children.push_back(materialize(protos, child));
        node.groups.push_back(std::move(group));
    }
    return node;
}

ExprPtr feature_ref(const std::string& name) {
    ExprPtr e = uvl::make_expr(ExprKind::feature_ref);
    e->text = name;
    return e;
}

ExprPtr negate(ExprPtr operand) {
    ExprPtr e = uvl::make_expr(ExprKind::not_op);
    e->lhs = std::move(operand);
    return e;
}

ExprPtr combine(ExprKind kind, ExprPtr lhs, ExprPtr rhs) {
    ExprPtr e = uvl::make_expr(kind);
    e->lhs = std::move(lhs);
    e->rhs = std::move(rhs);
    return e;
}

} // namespace

UvlModel random_model(std::mt19937& rng, const GenOptions& opts) {
    auto pick = [&](int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(rng);
    };

    int target = pick(1, opts.max_features);
    std::vector<ProtoFeature> protos;
    protos.push_back({"R", {}});
    int budget = target - 1;

    while (budget > 0) {
        int parent = pick(0, static_cast<int>(protos.size()) - 1);
        int kind_roll = pick(0, 4);
        GroupKind kind = static_cast<GroupKind>(kind_roll);
        int want;
        if (kind == GroupKind::mandatory || kind == GroupKind::optional)
            want = pick(1, 3);
        else if (budget >= 2)
            want = pick(2, 4);
        else {
            kind = pick(0, 1) ? GroupKind::optional : GroupKind::mandatory;
            want = 1;
        }
        int count = std::min(want, budget);
        if (count < 1)
            break;
        if (count < 2 &&
            (kind == GroupKind::alternative || kind == GroupKind::or_group ||
             kind == GroupKind::cardinality))
            kind = GroupKind::optional;

        ProtoGroup group;
        group.kind = kind;
        if (kind == GroupKind::cardinality) {
            group.lo = pick(0, count);
            group.hi = pick(group.lo, count);
        }
        for (int i = 0; i < count; ++i) {
            int id = static_cast<int>(protos.size());
            protos.push_back({"F" + std::to_string(id), {}});
            group.children.push_back(id);
            --budget;
        }
        protos[parent].groups.push_back(std::move(group));
    }

    UvlModel model;
    model.source_name = "<generated>";
    model.root = materialize(protos, 0);

    int n_constraints = pick(0, opts.max_constraints);
    auto random_ref = [&] { return feature_ref(protos[pick(0, static_cast<int>(protos.size()) - 1)].name); };
    for (int i = 0; i < n_constraints; ++i) {
        ExprPtr expr;
        switch (pick(0, 5)) {
        case 0: expr = combine(ExprKind::implies, random_ref(), random_ref()); break;
        case 1: expr = combine(ExprKind::implies, random_ref(), negate(random_ref())); break;
        case 2: expr = combine(ExprKind::implies, negate(random_ref()), random_ref()); break;
        case 3: expr = combine(ExprKind::or_op, random_ref(), random_ref()); break;
        case 4: expr = combine(ExprKind::or_op, random_ref(), negate(random_ref())); break;
        default: expr = negate(random_ref()); break;
        }
        model.constraints.push_back(std::move(expr));
    }
    return model;
}

UvlModel wide_model(int or_children, int optionals) {
    UvlModel model;
    model.source_name = "<wide>";
    model.root.name = "Root";

    GroupNode or_group;
    or_group.kind = GroupKind::or_group;
    for (int i = 0; i < or_children; ++i) {
        FeatureNode child;
        child.name = "O" + std::to_string(i + 1);
        or_group.children.push_back(std::move(child));
    }
    model.root.groups.push_back(std::move(or_group));

    GroupNode opt_group;
    opt_group.kind = GroupKind::optional;
    for (int i = 0; i < optionals; ++i) {
        FeatureNode child;
        child.name = "P" + std::to_string(i + 1);
        opt_group.children.push_back(std::move(child));
    }
    if (optionals > 0)
        model.root.groups.push_back(std::move(opt_group));

    if (or_children >= 2 && optionals >= 2) {
        model.constraints.push_back(combine(ExprKind::implies, feature_ref("P1"), feature_ref("O1")));
        model.constraints.push_back(
            combine(ExprKind::or_op, feature_ref("P2"), negate(feature_ref("O2"))));
    }
    return model;
}

} // namespace uvl2ivml::testing
