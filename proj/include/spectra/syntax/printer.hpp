#pragma once

#include "spectra/syntax/ast.hpp"

#include <string>

namespace spectra::syntax {

/// Renders an AST back to Spectra source using the short keywords and the
/// fewest parentheses that re-parse to the same tree. `next` always prints
/// as `next(...)`.
std::string print(const SpecAst& spec);
std::string print(const Expr& expr);
std::string print(const TypeExpr& type);
std::string print(const TempConstraint& constraint);

const char* spelling(BinaryOp op);
const char* spelling(UnaryOp op);

} // namespace spectra::syntax
