#pragma once

#include "uvl2ivml/diagnostics.hpp"
#include "uvl2ivml/ivml/ast.hpp"

#include <string_view>

namespace uvl2ivml::ivml {

/// Raised when the input uses an IVML construct outside the emitted subset
/// (compounds, typedefs, imports, ...). Names the offending construct.
class UnsupportedConstructError : public ParseError {
public:
    UnsupportedConstructError(Diagnostic diag, std::string construct)
        : ParseError(std::move(diag)), construct_(std::move(construct)) {}

    const std::string& construct() const { return construct_; }

private:
    std::string construct_;
};

/// Parses the IVML subset this toolchain emits: a single project containing
/// enum definitions, typed variable declarations, and constraints. Both
/// `not (x)` and `(x <> true)` parse to the same negation node, so emit/parse
/// round trips are structural identities.
Project parse_ivml_subset(std::string_view text, std::string source_name = "<ivml>");

} // namespace uvl2ivml::ivml
