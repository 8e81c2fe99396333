#pragma once

#include "uvl2ivml/uvl/ast.hpp"

#include <string>

namespace uvl2ivml::uvl {

/// Serializes a model back to UVL with canonical four-space indentation.
/// Re-parsing the result yields a structurally identical model.
std::string write_uvl(const UvlModel& model);

/// Renders one constraint expression with minimal parentheses.
std::string write_constraint(const ConstraintExpr& expr);

} // namespace uvl2ivml::uvl
