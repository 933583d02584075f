#pragma once

#include "spectra/sema/symbols.hpp"
#include "spectra/syntax/ast.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>

namespace spectra::sema {

struct CheckedSpec {
    syntax::SpecAst ast;
    SymbolTable symbols;
    /// Type of every expression node reachable from the specification's
    /// elements (nodes inside predicate/pattern bodies typed in their scope).
    std::unordered_map<const syntax::Expr*, SemType> types;
};

/// Resolves names, computes types, and enforces every well-formedness rule
/// of the language (kernel rules on `next` and system variables in
/// assumptions, enum comparison, integer ranges and arithmetic, past-time
/// operands, predicate recursion and arity, pattern and monitor bodies).
/// Imports must already be resolved. Throws SpecError listing all
/// violations.
CheckedSpec check(syntax::SpecAst ast);

/// Type of an expression over an already checked symbol table. `scope`
/// names a predicate or pattern whose parameters are visible. Throws
/// SpecError on type errors.
SemType type_of(const syntax::Expr& expr, const SymbolTable& symbols,
                const std::string& scope = {});

/// Value of a constant integer expression (literals, unary minus,
/// arithmetic, and defines of such), if it is one.
std::optional<std::int64_t> constant_value(const syntax::Expr& expr, const SymbolTable& symbols);

} // namespace spectra::sema
