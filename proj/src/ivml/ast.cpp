#include "uvl2ivml/ivml/ast.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace uvl2ivml::ivml {

namespace {

std::shared_ptr<Expr> node(ExprKind kind) {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    return e;
}

} // namespace

ExprPtr var_ref(std::string name) {
    auto e = node(ExprKind::var_ref);
    e->name = std::move(name);
    return e;
}

ExprPtr enum_lit(std::string enum_name, std::string literal) {
    auto e = node(ExprKind::enum_lit);
    e->name = std::move(enum_name);
    e->literal = std::move(literal);
    return e;
}

ExprPtr bool_lit(bool value) {
    auto e = node(ExprKind::bool_lit);
    e->bval = value;
    return e;
}

ExprPtr int_lit(long long value) {
    auto e = node(ExprKind::int_lit);
    e->ival = value;
    return e;
}

ExprPtr real_lit(double value) {
    auto e = node(ExprKind::real_lit);
    e->rval = value;
    return e;
}

ExprPtr string_lit(std::string value) {
    auto e = node(ExprKind::string_lit);
    e->literal = std::move(value);
    return e;
}

ExprPtr is_defined(std::string var) {
    auto e = node(ExprKind::is_defined);
    e->name = std::move(var);
    return e;
}

ExprPtr size_fn(std::string var) {
    auto e = node(ExprKind::size_fn);
    e->name = std::move(var);
    return e;
}

ExprPtr includes_fn(std::string set_var, std::string enum_name, std::string literal) {
    auto e = node(ExprKind::includes_fn);
    e->name = std::move(set_var);
    e->a = enum_lit(std::move(enum_name), std::move(literal));
    return e;
}

ExprPtr floor_fn(ExprPtr arg) {
    auto e = node(ExprKind::floor_fn);
    e->a = std::move(arg);
    return e;
}

ExprPtr not_op(ExprPtr operand) {
    auto e = node(ExprKind::not_op);
    e->a = std::move(operand);
    return e;
}

ExprPtr binary(ExprKind kind, ExprPtr lhs, ExprPtr rhs) {
    auto e = node(kind);
    e->a = std::move(lhs);
    e->b = std::move(rhs);
    return e;
}

ExprPtr and_op(ExprPtr lhs, ExprPtr rhs) { return binary(ExprKind::and_op, std::move(lhs), std::move(rhs)); }
ExprPtr or_op(ExprPtr lhs, ExprPtr rhs) { return binary(ExprKind::or_op, std::move(lhs), std::move(rhs)); }
ExprPtr implies(ExprPtr lhs, ExprPtr rhs) { return binary(ExprKind::implies, std::move(lhs), std::move(rhs)); }

bool equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind || a.name != b.name || a.literal != b.literal)
        return false;
    switch (a.kind) {
    case ExprKind::bool_lit:
        if (a.bval != b.bval)
            return false;
        break;
    case ExprKind::int_lit:
        if (a.ival != b.ival)
            return false;
        break;
    case ExprKind::real_lit:
        if (a.rval != b.rval)
            return false;
        break;
    default:
        break;
    }
    return equal(a.a, b.a) && equal(a.b, b.b);
}

bool equal(const ExprPtr& a, const ExprPtr& b) {
    if (a == b)
        return true;
    if (!a || !b)
        return false;
    return equal(*a, *b);
}

bool is_bool_literal(const Expr& e, bool value) {
    return e.kind == ExprKind::bool_lit && e.bval == value;
}

bool equal(const Project& a, const Project& b) {
    if (a.name != b.name || a.decls.size() != b.decls.size())
        return false;
    for (size_t i = 0; i < a.decls.size(); ++i) {
        const Decl& da = a.decls[i];
        const Decl& db = b.decls[i];
        if (da.index() != db.index())
            return false;
        bool same = std::visit(
            [&](const auto& lhs) {
                using T = std::decay_t<decltype(lhs)>;
                const T& rhs = std::get<T>(db);
                if constexpr (std::is_same_v<T, ConstraintDecl>)
                    return equal(lhs.expr, rhs.expr);
                else
                    return lhs == rhs;
            },
            da);
        if (!same)
            return false;
    }
    return true;
}

namespace {

class ProjectChecker {
public:
    explicit ProjectChecker(const Project& project) : project_(project) {}

    std::vector<std::string> run() {
        for (const Decl& decl : project_.decls) {
            if (const auto* en = std::get_if<EnumDef>(&decl)) {
                claim_name(en->name, "enum");
                if (en->literals.empty())
                    errors_.push_back("enum '" + en->name + "' has no literals");
                std::set<std::string> seen;
                for (const std::string& lit : en->literals)
                    if (!seen.insert(lit).second)
                        errors_.push_back("enum '" + en->name + "' repeats literal '" + lit + "'");
                enums_[en->name] = en;
            } else if (const auto* var = std::get_if<VarDecl>(&decl)) {
                claim_name(var->name, "variable");
                if (var->type.kind == TypeKind::enumeration ||
                    var->type.kind == TypeKind::set_of_enum)
                    require_enum(var->type.enum_name,
                                 "type of variable '" + var->name + "'");
                vars_[var->name] = var;
            }
        }
        for (const Decl& decl : project_.decls)
            if (const auto* c = std::get_if<ConstraintDecl>(&decl))
                check_expr(*c->expr);
        return std::move(errors_);
    }

private:
    void claim_name(const std::string& name, const char* what) {
        if (!names_.insert(name).second)
            errors_.push_back(std::string("duplicate ") + what + " name '" + name + "'");
    }

    const EnumDef* require_enum(const std::string& name, const std::string& context) {
        auto it = enums_.find(name);
        if (it == enums_.end()) {
            errors_.push_back("undeclared enum '" + name + "' referenced by " + context);
            return nullptr;
        }
        return it->second;
    }

    const VarDecl* require_var(const std::string& name, const std::string& context) {
        auto it = vars_.find(name);
        if (it == vars_.end()) {
            errors_.push_back("undeclared variable '" + name + "' referenced by " + context);
            return nullptr;
        }
        return it->second;
    }

    void check_expr(const Expr& e) {
        switch (e.kind) {
        case ExprKind::var_ref:
            require_var(e.name, "a constraint");
            break;
        case ExprKind::enum_lit: {
            const EnumDef* en = require_enum(e.name, "a constraint");
            if (en && std::find(en->literals.begin(), en->literals.end(), e.literal) ==
                          en->literals.end())
                errors_.push_back("enum '" + e.name + "' has no literal '" + e.literal + "'");
            break;
        }
        case ExprKind::is_defined:
            require_var(e.name, "isDefined");
            break;
        case ExprKind::size_fn: {
            const VarDecl* var = require_var(e.name, "size");
            if (var && var->type.kind != TypeKind::set_of_enum &&
                var->type.kind != TypeKind::string)
                errors_.push_back("size applies to set or string variables; '" + e.name +
                                  "' is neither");
            break;
        }
        case ExprKind::includes_fn: {
            const VarDecl* var = require_var(e.name, "includes");
            if (var && var->type.kind != TypeKind::set_of_enum)
                errors_.push_back("includes requires a set variable; '" + e.name + "' is not one");
            break;
        }
        default:
            break;
        }
        if (e.a)
            check_expr(*e.a);
        if (e.b)
            check_expr(*e.b);
    }

    const Project& project_;
    std::set<std::string> names_;
    std::map<std::string, const EnumDef*> enums_;
    std::map<std::string, const VarDecl*> vars_;
    std::vector<std::string> errors_;
};

} // namespace

std::vector<std::string> validate_project(const Project& project) {
    return ProjectChecker(project).run();
}

} // namespace uvl2ivml::ivml
