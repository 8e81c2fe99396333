#pragma once

#include "uvl2ivml/uvl/ast.hpp"

#include <string_view>

namespace uvl2ivml::uvl {

/// Parses UVL text into a model. Accepts the Boolean, Arithmetic, and Type
/// language levels. Throws ParseError (with line/column) on lex or parse
/// failure; name resolution and typing issues are left to validate_uvl.
UvlModel parse_uvl(std::string_view text, std::string source_name = "<uvl>");

} // namespace uvl2ivml::uvl
