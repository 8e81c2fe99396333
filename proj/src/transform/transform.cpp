#include "uvl2ivml/transform/transform.hpp"

#include "uvl2ivml/uvl/validate.hpp"

#include <cassert>

namespace uvl2ivml {

using ivml::ExprPtr;

namespace {

ivml::TypeRef var_type_for(uvl::FeatureType type) {
    switch (type) {
    case uvl::FeatureType::string_type: return {ivml::TypeKind::string, ""};
    case uvl::FeatureType::integer: return {ivml::TypeKind::integer, ""};
    case uvl::FeatureType::real: return {ivml::TypeKind::real, ""};
    default: return {ivml::TypeKind::boolean, ""};
    }
}

std::vector<std::string> child_names(const uvl::GroupNode& group) {
    std::vector<std::string> names;
    names.reserve(group.children.size());
    for (const uvl::FeatureNode& child : group.children)
        names.push_back(child.name);
    return names;
}

class Transformer {
public:
    Transformer(const uvl::UvlModel& model, const TransformOptions& opts)
        : model_(model), opts_(opts), pool_(collect_names(model)) {}

    TransformResult run() {
        TransformResult result;
        result.project.name = opts_.project_name.value_or(
            model_.namespace_name.value_or(model_.root.name));

        FeatureBinding root_binding;
        if (model_.root.type != uvl::FeatureType::boolean) {
            root_binding.kind = FeatureBinding::Kind::typed_var;
            root_binding.var_name = model_.root.name;
            root_binding.type = var_type_for(model_.root.type);
            root_binding.inclusion = ivml::bool_lit(true);
            result.project.decls.push_back(ivml::VarDecl{root_binding.type, model_.root.name});
        } else {
            root_binding.kind = FeatureBinding::Kind::always_included;
            root_binding.inclusion = ivml::bool_lit(true);
        }
        result.bindings.emplace(model_.root.name, root_binding);

        std::vector<ExprPtr> deferred;
        walk(model_.root, result, deferred);

        for (const uvl::ExprPtr& c : model_.constraints) {
            ExprPtr rewritten = simplify(rewrite_constraint(*c, result.bindings));
            if (!ivml::is_true(rewritten))
                result.project.decls.push_back(ivml::ConstraintDecl{rewritten});
        }
        if (opts_.mode == TransformMode::strict) {
            for (const ExprPtr& c : deferred) {
                ExprPtr simplified = simplify(c);
                if (!ivml::is_true(simplified))
                    result.project.decls.push_back(ivml::ConstraintDecl{simplified});
            }
        }
        return result;
    }

private:
    static std::set<std::string> collect_names(const uvl::UvlModel& model) {
        std::set<std::string> names;
        uvl::ModelIndex index = uvl::ModelIndex::build(model);
        for (const uvl::FeatureNode* f : index.features)
            names.insert(f->name);
        return names;
    }

    void walk(const uvl::FeatureNode& feature, TransformResult& result,
              std::vector<ExprPtr>& deferred) {
        const FeatureBinding& binding = result.bindings.at(feature.name);
        bool has_own_var = binding.kind == FeatureBinding::Kind::boolean_var ||
                           binding.kind == FeatureBinding::Kind::typed_var;
        for (const uvl::GroupNode& group : feature.groups) {
            GroupEmission emission =
                transform_group(feature, group, binding.inclusion, has_own_var, pool_, opts_);
            for (ivml::Decl& decl : emission.decls)
                result.project.decls.push_back(std::move(decl));
            for (ExprPtr& c : emission.strict_constraints)
                deferred.push_back(std::move(c));
            for (auto& [name, child_binding] : emission.child_bindings) {
                if (!result.bindings.emplace(name, std::move(child_binding)).second)
                    throw TransformError("duplicate feature name '" + name +
                                         "' while binding features");
            }
            for (const uvl::FeatureNode& child : group.children)
                walk(child, result, deferred);
        }
    }

    const uvl::UvlModel& model_;
    const TransformOptions& opts_;
    NamePool pool_;
};

} // namespace

GroupEmission transform_group(const uvl::FeatureNode& parent, const uvl::GroupNode& group,
                              const ExprPtr& parent_condition, bool parent_name_taken,
                              NamePool& pool, const TransformOptions& opts) {
    GroupEmission out;
    bool parent_always = ivml::is_true(parent_condition);
    bool strict = opts.mode == TransformMode::strict;

    auto bind_child = [&](const uvl::FeatureNode& child, FeatureBinding binding) {
        out.child_bindings.emplace_back(child.name, std::move(binding));
    };

    auto typed_child = [&](const uvl::FeatureNode& child) {
        FeatureBinding binding;
        binding.kind = FeatureBinding::Kind::typed_var;
        binding.var_name = child.name;
        binding.type = var_type_for(child.type);
        // Typed features carry a value, not a selection; they are present
        // whenever their parent is.
        binding.inclusion = parent_condition;
        out.decls.push_back(ivml::VarDecl{binding.type, child.name});
        bind_child(child, std::move(binding));
    };

    switch (group.kind) {
    case uvl::GroupKind::mandatory:
        for (const uvl::FeatureNode& child : group.children) {
            if (child.type != uvl::FeatureType::boolean) {
                typed_child(child);
                continue;
            }
            FeatureBinding binding;
            binding.kind = parent_always ? FeatureBinding::Kind::always_included
                                         : FeatureBinding::Kind::follows_parent;
            binding.inclusion = parent_condition;
            bind_child(child, std::move(binding));
        }
        break;

    case uvl::GroupKind::optional:
        for (const uvl::FeatureNode& child : group.children) {
            if (child.type != uvl::FeatureType::boolean) {
                typed_child(child);
                continue;
            }
            FeatureBinding binding;
            binding.kind = FeatureBinding::Kind::boolean_var;
            binding.var_name = child.name;
            binding.inclusion = ivml::var_ref(child.name);
            out.decls.push_back(ivml::VarDecl{{ivml::TypeKind::boolean, ""}, child.name});
            if (strict && !parent_always)
                out.strict_constraints.push_back(
                    ivml::implies(binding.inclusion, parent_condition));
            bind_child(child, std::move(binding));
        }
        break;

    case uvl::GroupKind::alternative: {
        NamePool::GroupNames names = pool.claim_alternative(parent.name, parent.is_abstract,
                                                            parent_name_taken, opts.naming);
        out.decls.push_back(ivml::EnumDef{names.enum_name, child_names(group)});
        out.decls.push_back(
            ivml::VarDecl{{ivml::TypeKind::enumeration, names.enum_name}, names.var_name});
        ExprPtr defined = ivml::is_defined(names.var_name);
        out.decls.push_back(
            ivml::ConstraintDecl{simplify(ivml::implies(parent_condition, defined))});
        if (strict && !parent_always)
            out.strict_constraints.push_back(ivml::implies(defined, parent_condition));
        for (const uvl::FeatureNode& child : group.children) {
            FeatureBinding binding;
            binding.kind = FeatureBinding::Kind::alt_member;
            binding.var_name = names.var_name;
            binding.enum_name = names.enum_name;
            binding.literal = child.name;
            ExprPtr selected = ivml::binary(ivml::ExprKind::eq, ivml::var_ref(names.var_name),
                                            ivml::enum_lit(names.enum_name, child.name));
            // When the instance can be undefined, reading it poisons the
            // constraint; guard membership tests with isDefined.
            binding.inclusion = parent_always ? selected : ivml::and_op(defined, selected);
            bind_child(child, std::move(binding));
        }
        break;
    }

    case uvl::GroupKind::or_group:
    case uvl::GroupKind::cardinality: {
        bool is_or = group.kind == uvl::GroupKind::or_group;
        NamePool::GroupNames names = pool.claim_set(parent.name, parent.is_abstract, is_or,
                                                    parent_name_taken, opts.naming);
        out.decls.push_back(ivml::EnumDef{names.enum_name, child_names(group)});
        out.decls.push_back(
            ivml::VarDecl{{ivml::TypeKind::set_of_enum, names.enum_name}, names.var_name});
        ExprPtr size = ivml::size_fn(names.var_name);
        ExprPtr nonempty = ivml::binary(ivml::ExprKind::ge, size, ivml::int_lit(1));
        if (is_or) {
            out.decls.push_back(
                ivml::ConstraintDecl{simplify(ivml::implies(parent_condition, nonempty))});
        } else {
            int child_count = static_cast<int>(group.children.size());
            if (group.lo > 0)
                out.decls.push_back(ivml::ConstraintDecl{simplify(ivml::implies(
                    parent_condition,
                    ivml::binary(ivml::ExprKind::ge, size, ivml::int_lit(group.lo))))});
            if (group.hi < child_count)
                out.decls.push_back(ivml::ConstraintDecl{simplify(ivml::implies(
                    parent_condition,
                    ivml::binary(ivml::ExprKind::le, size, ivml::int_lit(group.hi))))});
        }
        if (strict && !parent_always)
            out.strict_constraints.push_back(ivml::implies(nonempty, parent_condition));
        for (const uvl::FeatureNode& child : group.children) {
            FeatureBinding binding;
            binding.kind = FeatureBinding::Kind::or_member;
            binding.var_name = names.var_name;
            binding.enum_name = names.enum_name;
            binding.literal = child.name;
            binding.inclusion = ivml::includes_fn(names.var_name, names.enum_name, child.name);
            bind_child(child, std::move(binding));
        }
        break;
    }
    }
    return out;
}

ExprPtr rewrite_constraint(const uvl::ConstraintExpr& expr, const BindingMap& bindings) {
    switch (expr.kind) {
    case uvl::ExprKind::feature_ref: {
        auto it = bindings.find(expr.text);
        if (it == bindings.end())
            throw TransformError("unbound feature '" + expr.text + "' in constraint");
        const FeatureBinding& binding = it->second;
        if (binding.kind == FeatureBinding::Kind::typed_var)
            return ivml::var_ref(binding.var_name); // value reference
        return binding.inclusion;
    }
    case uvl::ExprKind::bool_lit:
        return ivml::bool_lit(expr.bool_value);
    case uvl::ExprKind::int_lit:
        return ivml::int_lit(expr.int_value);
    case uvl::ExprKind::real_lit:
        return ivml::real_lit(expr.real_value);
    case uvl::ExprKind::string_lit:
        return ivml::string_lit(expr.text);
    case uvl::ExprKind::not_op:
        return ivml::not_op(rewrite_constraint(*expr.lhs, bindings));
    case uvl::ExprKind::len_fn: {
        // Validation guarantees the operand is a string feature reference.
        const uvl::ConstraintExpr& arg = *expr.lhs;
        auto it = bindings.find(arg.text);
        if (arg.kind != uvl::ExprKind::feature_ref || it == bindings.end())
            throw TransformError("len applies only to bound string features");
        return ivml::size_fn(it->second.var_name);
    }
    case uvl::ExprKind::floor_fn:
        return ivml::floor_fn(rewrite_constraint(*expr.lhs, bindings));
    default:
        break;
    }
    static const std::map<uvl::ExprKind, ivml::ExprKind> kBinary = {
        {uvl::ExprKind::and_op, ivml::ExprKind::and_op},
        {uvl::ExprKind::or_op, ivml::ExprKind::or_op},
        {uvl::ExprKind::implies, ivml::ExprKind::implies},
        {uvl::ExprKind::iff, ivml::ExprKind::iff},
        {uvl::ExprKind::gt, ivml::ExprKind::gt},
        {uvl::ExprKind::ge, ivml::ExprKind::ge},
        {uvl::ExprKind::lt, ivml::ExprKind::lt},
        {uvl::ExprKind::le, ivml::ExprKind::le},
        {uvl::ExprKind::eq, ivml::ExprKind::eq},
        {uvl::ExprKind::ne, ivml::ExprKind::ne},
        {uvl::ExprKind::add, ivml::ExprKind::add},
        {uvl::ExprKind::sub, ivml::ExprKind::sub},
        {uvl::ExprKind::mul, ivml::ExprKind::mul},
        {uvl::ExprKind::divide, ivml::ExprKind::divide},
    };
    auto op = kBinary.find(expr.kind);
    assert(op != kBinary.end());
    return ivml::binary(op->second, rewrite_constraint(*expr.lhs, bindings),
                        rewrite_constraint(*expr.rhs, bindings));
}

namespace {

bool is_false(const ExprPtr& e) {
    return e && ivml::is_bool_literal(*e, false);
}

ExprPtr simplify_once(const ExprPtr& expr) {
    ExprPtr a = expr->a ? simplify_once(expr->a) : nullptr;
    ExprPtr b = expr->b ? simplify_once(expr->b) : nullptr;

    switch (expr->kind) {
    case ivml::ExprKind::not_op:
        if (ivml::is_true(a))
            return ivml::bool_lit(false);
        if (is_false(a))
            return ivml::bool_lit(true);
        if (a->kind == ivml::ExprKind::not_op)
            return a->a;
        break;
    case ivml::ExprKind::and_op:
        if (ivml::is_true(a))
            return b;
        if (ivml::is_true(b))
            return a;
        if (is_false(a) || is_false(b))
            return ivml::bool_lit(false);
        break;
    case ivml::ExprKind::or_op:
        if (is_false(a))
            return b;
        if (is_false(b))
            return a;
        if (ivml::is_true(a) || ivml::is_true(b))
            return ivml::bool_lit(true);
        break;
    case ivml::ExprKind::implies:
        if (ivml::is_true(a))
            return b;
        if (ivml::is_true(b) || is_false(a))
            return ivml::bool_lit(true);
        break;
    default:
        break;
    }
    if (a == expr->a && b == expr->b)
        return expr;
    auto e = std::make_shared<ivml::Expr>(*expr);
    e->a = a;
    e->b = b;
    return e;
}

} // namespace

ExprPtr simplify(const ExprPtr& expr) {
    ExprPtr current = expr;
    for (;;) {
        ExprPtr next = simplify_once(current);
        if (ivml::equal(next, current))
            return next;
        current = next;
    }
}

TransformResult transform(const uvl::UvlModel& model, const TransformOptions& opts) {
    for (const Diagnostic& d : uvl::validate_uvl(model))
        if (d.severity == Severity::error)
            throw TransformError("model is not valid: " + d.format());
    return Transformer(model, opts).run();
}

BindingMap classify_features(const uvl::UvlModel& model, const TransformOptions& opts) {
    return transform(model, opts).bindings;
}

} // namespace uvl2ivml
