#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace uvl2ivml::ivml {

enum class TypeKind { boolean, integer, real, string, enumeration, set_of_enum };

struct TypeRef {
    TypeKind kind = TypeKind::boolean;
    std::string enum_name; // enumeration / set_of_enum

    friend bool operator==(const TypeRef&, const TypeRef&) = default;
};

enum class ExprKind {
    var_ref,
    enum_lit, // qualified Enum.Literal
    bool_lit,
    int_lit,
    real_lit,
    string_lit,
    is_defined,
    size_fn,
    includes_fn,
    floor_fn,
    not_op,
    and_op,
    or_op,
    implies,
    iff,
    eq,
    ne,
    gt,
    ge,
    lt,
    le,
    add,
    sub,
    mul,
    divide,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression node. Subtrees are shared freely; the transformer
/// reuses inclusion conditions across many constraints.
struct Expr {
    ExprKind kind;
    std::string name;    // var_ref/is_defined/size_fn/includes_fn: variable; enum_lit: enum name
    std::string literal; // enum_lit member; string_lit payload
    bool bval = false;
    long long ival = 0;
    double rval = 0.0;
    ExprPtr a; // unary operand / lhs / includes literal
    ExprPtr b; // rhs
};

ExprPtr var_ref(std::string name);
ExprPtr enum_lit(std::string enum_name, std::string literal);
ExprPtr bool_lit(bool value);
ExprPtr int_lit(long long value);
ExprPtr real_lit(double value);
ExprPtr string_lit(std::string value);
ExprPtr is_defined(std::string var);
ExprPtr size_fn(std::string var);
ExprPtr includes_fn(std::string set_var, std::string enum_name, std::string literal);
ExprPtr floor_fn(ExprPtr arg);
ExprPtr not_op(ExprPtr operand);
ExprPtr binary(ExprKind kind, ExprPtr lhs, ExprPtr rhs);
ExprPtr and_op(ExprPtr lhs, ExprPtr rhs);
ExprPtr or_op(ExprPtr lhs, ExprPtr rhs);
ExprPtr implies(ExprPtr lhs, ExprPtr rhs);

bool equal(const Expr& a, const Expr& b);
bool equal(const ExprPtr& a, const ExprPtr& b);
bool is_bool_literal(const Expr& e, bool value);
inline bool is_true(const ExprPtr& e) { return e && is_bool_literal(*e, true); }

struct EnumDef {
    std::string name;
    std::vector<std::string> literals;

    friend bool operator==(const EnumDef&, const EnumDef&) = default;
};

struct VarDecl {
    TypeRef type;
    std::string name;

    friend bool operator==(const VarDecl&, const VarDecl&) = default;
};

struct ConstraintDecl {
    ExprPtr expr;
};

using Decl = std::variant<EnumDef, VarDecl, ConstraintDecl>;

struct Project {
    std::string name;
    std::vector<Decl> decls;
};

bool equal(const Project& a, const Project& b);

/// Project invariant check: unique declaration names, enum literals unique,
/// every enum referenced by a type or constraint declared, includes/size
/// applied to set variables. Returns one message per violation.
std::vector<std::string> validate_project(const Project& project);

} // namespace uvl2ivml::ivml
