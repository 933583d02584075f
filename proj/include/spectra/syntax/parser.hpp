#pragma once

#include "spectra/syntax/ast.hpp"

#include <string>
#include <string_view>

namespace spectra::syntax {

/// Parses a complete specification (imports, header, elements).
///
/// Binary operators associate to the left. From strongest to weakest:
/// unary operators; `* / mod`; `+ -`; `= != < > <= >= S`; `&`; `|`; `<->`;
/// `->`.
///
/// On syntax errors the parser resynchronizes at the next element keyword
/// and keeps going; all diagnostics are thrown together in a SpecError.
SpecAst parse(std::string_view text, const std::string& file_name = "<input>");

/// Parses a single expression (used by tests and tools).
ExprPtr parse_expression(std::string_view text, const std::string& file_name = "<input>");

} // namespace spectra::syntax
