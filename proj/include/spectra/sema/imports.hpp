#pragma once

#include "spectra/syntax/ast.hpp"

#include <functional>
#include <optional>
#include <string>

namespace spectra::sema {

/// Reads a file; returns nullopt when it does not exist.
using FileLoader = std::function<std::optional<std::string>(const std::string& path)>;

FileLoader filesystem_loader();

/// Parses `entry_path` and every file it (transitively) imports. Patterns
/// and predicates that the entry specification references, directly or
/// through other copied elements, are appended to it; the import clauses are
/// removed. Import paths are relative to the importing file's directory.
///
/// Errors (thrown as SpecError): missing files, import cycles, duplicate
/// pattern/predicate names across files, imported predicates referring to
/// anything other than predicates and their own parameters.
syntax::SpecAst resolve_imports(const std::string& entry_path, const FileLoader& loader);

/// Same, for an entry specification that is already parsed.
syntax::SpecAst resolve_imports(syntax::SpecAst entry, const std::string& entry_path,
                                const FileLoader& loader);

} // namespace spectra::sema
