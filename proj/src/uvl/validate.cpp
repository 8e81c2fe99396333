#include "uvl2ivml/uvl/validate.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace uvl2ivml::uvl {

namespace {

enum class ValueType { boolean, numeric, string };

class Validator {
public:
    explicit Validator(const UvlModel& model) : model_(model) {}

    std::vector<Diagnostic> run() {
        check_features(model_.root);
        for (const ExprPtr& c : model_.constraints) {
            std::optional<ValueType> t = type_of(*c);
            if (t && *t != ValueType::boolean)
                error(c->loc, "constraint must be a boolean expression");
        }
        return std::move(diags_);
    }

private:
    void check_features(const FeatureNode& feature) {
        auto [it, inserted] = features_.emplace(feature.name, &feature);
        if (!inserted)
            error(feature.loc, "duplicate feature name '" + feature.name + "'");
        for (const GroupNode& group : feature.groups) {
            int n = static_cast<int>(group.children.size());
            if (group.kind == GroupKind::cardinality) {
                if (group.lo > group.hi)
                    error(group.loc, "cardinality lower bound exceeds upper bound");
                else if (group.hi > n)
                    error(group.loc, "cardinality upper bound exceeds the number of children");
                if (group.lo < 0)
                    error(group.loc, "cardinality lower bound must be non-negative");
            }
            if ((group.kind == GroupKind::or_group || group.kind == GroupKind::alternative) &&
                n < 2)
                warn(group.loc,
                     std::string(group.kind == GroupKind::or_group ? "or" : "alternative") +
                         " group has a single child");
            bool choice_group = group.kind == GroupKind::alternative ||
                                group.kind == GroupKind::or_group ||
                                group.kind == GroupKind::cardinality;
            for (const FeatureNode& child : group.children) {
                if (choice_group && child.type != FeatureType::boolean)
                    error(child.loc, "typed feature '" + child.name +
                                         "' cannot be a member of a choice group");
                check_features(child);
            }
        }
    }

    // Returns nullopt when a sub-error was already reported.
    std::optional<ValueType> type_of(const ConstraintExpr& e) {
        switch (e.kind) {
        case ExprKind::feature_ref: {
            auto it = features_.find(e.text);
            if (it == features_.end()) {
                error(e.loc, "unknown feature '" + e.text + "' in constraint");
                return std::nullopt;
            }
            switch (it->second->type) {
            case FeatureType::boolean: return ValueType::boolean;
            case FeatureType::string_type: return ValueType::string;
            default: return ValueType::numeric;
            }
        }
        case ExprKind::bool_lit: return ValueType::boolean;
        case ExprKind::int_lit:
        case ExprKind::real_lit: return ValueType::numeric;
        case ExprKind::string_lit: return ValueType::string;
        case ExprKind::not_op:
            return expect(*e.lhs, ValueType::boolean, "'!'") ? std::optional(ValueType::boolean)
                                                             : std::nullopt;
        case ExprKind::and_op:
        case ExprKind::or_op:
        case ExprKind::implies:
        case ExprKind::iff: {
            bool ok = expect(*e.lhs, ValueType::boolean, "logical operator");
            ok &= expect(*e.rhs, ValueType::boolean, "logical operator");
            return ok ? std::optional(ValueType::boolean) : std::nullopt;
        }
        case ExprKind::gt:
        case ExprKind::ge:
        case ExprKind::lt:
        case ExprKind::le: {
            bool ok = expect(*e.lhs, ValueType::numeric, "comparison");
            ok &= expect(*e.rhs, ValueType::numeric, "comparison");
            return ok ? std::optional(ValueType::boolean) : std::nullopt;
        }
        case ExprKind::eq:
        case ExprKind::ne: {
            std::optional<ValueType> lt = type_of(*e.lhs);
            std::optional<ValueType> rt = type_of(*e.rhs);
            if (!lt || !rt)
                return std::nullopt;
            if (*lt != *rt) {
                error(e.loc, "equality operands have mismatched types");
                return std::nullopt;
            }
            return ValueType::boolean;
        }
        case ExprKind::add:
        case ExprKind::sub:
        case ExprKind::mul:
        case ExprKind::divide: {
            bool ok = expect(*e.lhs, ValueType::numeric, "arithmetic");
            ok &= expect(*e.rhs, ValueType::numeric, "arithmetic");
            return ok ? std::optional(ValueType::numeric) : std::nullopt;
        }
        case ExprKind::len_fn: {
            if (e.lhs->kind != ExprKind::feature_ref) {
                error(e.loc, "len applies only to string feature references");
                return std::nullopt;
            }
            std::optional<ValueType> t = type_of(*e.lhs);
            if (!t)
                return std::nullopt;
            if (*t != ValueType::string) {
                error(e.loc, "len applies only to string features; '" + e.lhs->text +
                                 "' is not a string");
                return std::nullopt;
            }
            return ValueType::numeric;
        }
        case ExprKind::floor_fn:
            return expect(*e.lhs, ValueType::numeric, "floor") ? std::optional(ValueType::numeric)
                                                               : std::nullopt;
        }
        return std::nullopt;
    }

    bool expect(const ConstraintExpr& e, ValueType want, const std::string& context) {
        std::optional<ValueType> t = type_of(e);
        if (!t)
            return false;
        if (*t != want) {
            error(e.loc, context + " requires a " +
                             (want == ValueType::boolean ? "boolean" : "numeric") + " operand");
            return false;
        }
        return true;
    }

    void error(SourceLoc loc, std::string msg) {
        diags_.push_back({Severity::error, loc, std::move(msg), model_.source_name});
    }

    void warn(SourceLoc loc, std::string msg) {
        diags_.push_back({Severity::warning, loc, std::move(msg), model_.source_name});
    }

    const UvlModel& model_;
    std::map<std::string, const FeatureNode*, std::less<>> features_;
    std::vector<Diagnostic> diags_;
};

} // namespace

std::vector<Diagnostic> validate_uvl(const UvlModel& model) {
    return Validator(model).run();
}

bool only_warnings(const std::vector<Diagnostic>& diags) {
    return std::all_of(diags.begin(), diags.end(),
                       [](const Diagnostic& d) { return d.severity != Severity::error; });
}

} // namespace uvl2ivml::uvl
