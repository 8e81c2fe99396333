#include "uvl2ivml/uvl/printer.hpp"

#include <ostream>
#include <sstream>

namespace uvl2ivml::uvl {

namespace {

// Binding strength, higher binds tighter. Mirrors the expression parser.
int precedence(ExprKind kind) {
    switch (kind) {
    case ExprKind::iff: return 1;
    case ExprKind::implies: return 2;
    case ExprKind::or_op: return 3;
    case ExprKind::and_op: return 4;
    case ExprKind::gt:
    case ExprKind::ge:
    case ExprKind::lt:
    case ExprKind::le:
    case ExprKind::eq:
    case ExprKind::ne: return 5;
    case ExprKind::add:
    case ExprKind::sub: return 6;
    case ExprKind::mul:
    case ExprKind::divide: return 7;
    case ExprKind::not_op: return 8;
    default: return 9;
    }
}

const char* op_text(ExprKind kind) {
    switch (kind) {
    case ExprKind::and_op: return "&";
    case ExprKind::or_op: return "|";
    case ExprKind::implies: return "=>";
    case ExprKind::iff: return "<=>";
    case ExprKind::gt: return ">";
    case ExprKind::ge: return ">=";
    case ExprKind::lt: return "<";
    case ExprKind::le: return "<=";
    case ExprKind::eq: return "==";
    case ExprKind::ne: return "!=";
    case ExprKind::add: return "+";
    case ExprKind::sub: return "-";
    case ExprKind::mul: return "*";
    case ExprKind::divide: return "/";
    default: return "?";
    }
}

std::string format_real(double value) {
    std::ostringstream os;
    os.precision(15);
    os << value;
    std::string s = os.str();
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos)
        s += ".0";
    return s;
}

void print_expr(std::ostream& os, const ConstraintExpr& e, int parent_prec, bool right_side) {
    int prec = precedence(e.kind);
    switch (e.kind) {
    case ExprKind::feature_ref:
        os << e.text;
        return;
    case ExprKind::bool_lit:
        os << (e.bool_value ? "true" : "false");
        return;
    case ExprKind::int_lit:
        os << e.int_value;
        return;
    case ExprKind::real_lit:
        os << format_real(e.real_value);
        return;
    case ExprKind::string_lit:
        os << '\'' << e.text << '\'';
        return;
    case ExprKind::len_fn:
    case ExprKind::floor_fn:
        os << (e.kind == ExprKind::len_fn ? "len(" : "floor(");
        print_expr(os, *e.lhs, 0, false);
        os << ')';
        return;
    case ExprKind::not_op: {
        os << '!';
        print_expr(os, *e.lhs, prec, false);
        return;
    }
    default:
        break;
    }
    // Binary operator. `=>` is right-associative, the rest left-associative;
    // parenthesize when the child binds no tighter than required.
    bool need_parens = prec < parent_prec ||
                       (prec == parent_prec && (e.kind == ExprKind::implies ? !right_side : right_side));
    if (need_parens)
        os << '(';
    bool right_assoc = e.kind == ExprKind::implies;
    print_expr(os, *e.lhs, right_assoc ? prec + 1 : prec, false);
    os << ' ' << op_text(e.kind) << ' ';
    print_expr(os, *e.rhs, right_assoc ? prec : prec + 1, true);
    if (need_parens)
        os << ')';
}

const char* type_keyword(FeatureType type) {
    switch (type) {
    case FeatureType::string_type: return "String ";
    case FeatureType::integer: return "Integer ";
    case FeatureType::real: return "Real ";
    default: return "";
    }
}

void indent_to(std::ostream& os, int depth) {
    for (int i = 0; i < depth; ++i)
        os << "    ";
}

void print_feature(std::ostream& os, const FeatureNode& feature, int depth) {
    indent_to(os, depth);
    os << type_keyword(feature.type) << feature.name;
    if (!feature.attributes.empty()) {
        os << " {";
        bool first = true;
        for (const Attribute& attr : feature.attributes) {
            if (!first)
                os << ", ";
            first = false;
            os << attr.key;
            if (!attr.value.empty())
                os << ' ' << attr.value;
        }
        os << '}';
    }
    os << '\n';
    for (const GroupNode& group : feature.groups) {
        indent_to(os, depth + 1);
        switch (group.kind) {
        case GroupKind::mandatory: os << "mandatory"; break;
        case GroupKind::optional: os << "optional"; break;
        case GroupKind::alternative: os << "alternative"; break;
        case GroupKind::or_group: os << "or"; break;
        case GroupKind::cardinality: os << '[' << group.lo << ".." << group.hi << ']'; break;
        }
        os << '\n';
        for (const FeatureNode& child : group.children)
            print_feature(os, child, depth + 2);
    }
}

} // namespace

std::string write_constraint(const ConstraintExpr& expr) {
    std::ostringstream os;
    print_expr(os, expr, 0, false);
    return os.str();
}

std::string write_uvl(const UvlModel& model) {
    std::ostringstream os;
    if (model.namespace_name) {
        os << "namespace " << *model.namespace_name << "\n\n";
    }
    os << "features\n";
    print_feature(os, model.root, 1);
    if (!model.constraints.empty()) {
        os << "constraints\n";
        for (const ExprPtr& c : model.constraints) {
            os << "    ";
            print_expr(os, *c, 0, false);
            os << '\n';
        }
    }
    return os.str();
}

} // namespace uvl2ivml::uvl
