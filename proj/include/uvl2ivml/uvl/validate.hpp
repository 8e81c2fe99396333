#pragma once

#include "uvl2ivml/uvl/ast.hpp"

#include <vector>

namespace uvl2ivml::uvl {

/// Checks a parsed model: duplicate feature names, unresolved constraint
/// references, cardinality bounds, type misuse in constraints, degenerate
/// groups. Errors and warnings come back as diagnostics; an empty list
/// means the model is valid.
std::vector<Diagnostic> validate_uvl(const UvlModel& model);

/// True when no diagnostic in the list is an error.
bool only_warnings(const std::vector<Diagnostic>& diags);

} // namespace uvl2ivml::uvl
