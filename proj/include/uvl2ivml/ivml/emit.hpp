#pragma once

#include "uvl2ivml/ivml/ast.hpp"

#include <stdexcept>
#include <string>

namespace uvl2ivml::ivml {

class EmitError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Serializes a project to IVML text: one declaration per line, four-space
/// indentation, `;` terminators, LF line endings, trailing newline. Output
/// is byte-stable for structurally equal projects. Throws EmitError when
/// the project violates its invariants; nothing is produced in that case.
std::string emit_ivml(const Project& project);

/// Renders a single expression the way emit_ivml would.
std::string emit_expr(const ExprPtr& expr);

} // namespace uvl2ivml::ivml
