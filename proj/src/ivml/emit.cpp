#include "uvl2ivml/ivml/emit.hpp"

#include <ostream>
#include <sstream>

namespace uvl2ivml::ivml {

namespace {

int precedence(ExprKind kind) {
    switch (kind) {
    case ExprKind::iff: return 1;
    case ExprKind::implies: return 2;
    case ExprKind::or_op: return 3;
    case ExprKind::and_op: return 4;
    case ExprKind::eq:
    case ExprKind::ne:
    case ExprKind::gt:
    case ExprKind::ge:
    case ExprKind::lt:
    case ExprKind::le: return 5;
    case ExprKind::add:
    case ExprKind::sub: return 6;
    case ExprKind::mul:
    case ExprKind::divide: return 7;
    default: return 9;
    }
}

bool is_binary(ExprKind kind) {
    return precedence(kind) < 9;
}

const char* op_text(ExprKind kind) {
    switch (kind) {
    case ExprKind::and_op: return "and";
    case ExprKind::or_op: return "or";
    case ExprKind::implies: return "implies";
    case ExprKind::iff: return "iff";
    case ExprKind::eq: return "==";
    case ExprKind::ne: return "<>";
    case ExprKind::gt: return ">";
    case ExprKind::ge: return ">=";
    case ExprKind::lt: return "<";
    case ExprKind::le: return "<=";
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

void print_expr(std::ostream& os, const Expr& e, int parent_prec) {
    switch (e.kind) {
    case ExprKind::var_ref:
        os << e.name;
        return;
    case ExprKind::enum_lit:
        os << e.name << '.' << e.literal;
        return;
    case ExprKind::bool_lit:
        os << (e.bval ? "true" : "false");
        return;
    case ExprKind::int_lit:
        os << e.ival;
        return;
    case ExprKind::real_lit:
        os << format_real(e.rval);
        return;
    case ExprKind::string_lit:
        os << '"' << e.literal << '"';
        return;
    case ExprKind::is_defined:
        os << "isDefined(" << e.name << ')';
        return;
    case ExprKind::size_fn:
        os << "size(" << e.name << ')';
        return;
    case ExprKind::includes_fn:
        os << "includes(" << e.name << ", ";
        print_expr(os, *e.a, 0);
        os << ')';
        return;
    case ExprKind::floor_fn:
        os << "floor(";
        print_expr(os, *e.a, 0);
        os << ')';
        return;
    case ExprKind::not_op:
        // A negated set-membership test renders as `(includes(...) <> true)`;
        // every other negation as `not (...)`. The subset parser folds both
        // spellings back into the same node.
        if (e.a->kind == ExprKind::includes_fn) {
            os << '(';
            print_expr(os, *e.a, 0);
            os << " <> true)";
        } else {
            os << "not (";
            print_expr(os, *e.a, 0);
            os << ')';
        }
        return;
    default:
        break;
    }
    int prec = precedence(e.kind);
    bool need_parens = prec < parent_prec;
    if (need_parens)
        os << '(';
    // `implies` associates to the right, so a left operand at the same
    // precedence must keep its parentheses.
    print_expr(os, *e.a, e.kind == ExprKind::implies ? prec + 1 : prec);
    os << ' ' << op_text(e.kind) << ' ';
    // The right operand of `implies` is parenthesized whenever it is itself
    // a binary expression; other operators only parenthesize by precedence.
    if (e.kind == ExprKind::implies && is_binary(e.b->kind)) {
        os << '(';
        print_expr(os, *e.b, 0);
        os << ')';
    } else {
        print_expr(os, *e.b, prec + 1);
    }
    if (need_parens)
        os << ')';
}

void print_type(std::ostream& os, const TypeRef& type) {
    switch (type.kind) {
    case TypeKind::boolean: os << "Boolean"; break;
    case TypeKind::integer: os << "Integer"; break;
    case TypeKind::real: os << "Real"; break;
    case TypeKind::string: os << "String"; break;
    case TypeKind::enumeration: os << type.enum_name; break;
    case TypeKind::set_of_enum: os << "setOf(" << type.enum_name << ')'; break;
    }
}

} // namespace

std::string emit_expr(const ExprPtr& expr) {
    std::ostringstream os;
    print_expr(os, *expr, 0);
    return os.str();
}

std::string emit_ivml(const Project& project) {
    std::vector<std::string> problems = validate_project(project);
    if (!problems.empty())
        throw EmitError("cannot emit project '" + project.name + "': " + problems.front());

    std::ostringstream os;
    os << "project " << project.name << " {\n";
    for (const Decl& decl : project.decls) {
        os << "    ";
        if (const auto* en = std::get_if<EnumDef>(&decl)) {
            os << "enum " << en->name << " {";
            for (size_t i = 0; i < en->literals.size(); ++i) {
                if (i)
                    os << ", ";
                os << en->literals[i];
            }
            os << "}";
        } else if (const auto* var = std::get_if<VarDecl>(&decl)) {
            print_type(os, var->type);
            os << ' ' << var->name;
        } else {
            print_expr(os, *std::get<ConstraintDecl>(decl).expr, 0);
        }
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace uvl2ivml::ivml
