#pragma once

#include "spectra/syntax/ast.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace spectra::sema {

/// Semantic type of an expression or variable.
struct SemType {
    enum class Kind { Boolean, Enum, Int };

    Kind kind = Kind::Boolean;
    std::size_t enum_id = 0; // index into SymbolTable::enums
    std::int64_t lower = 0;
    std::int64_t upper = 0;

    static SemType boolean() { return {}; }
    static SemType enumeration(std::size_t id) { return {Kind::Enum, id, 0, 0}; }
    static SemType integer(std::int64_t lo, std::int64_t hi) { return {Kind::Int, 0, lo, hi}; }

    bool is_bool() const { return kind == Kind::Boolean; }
    bool is_enum() const { return kind == Kind::Enum; }
    bool is_int() const { return kind == Kind::Int; }

    friend bool operator==(const SemType&, const SemType&) = default;
};

enum class SymbolKind {
    EnvVar,
    SysVar,
    Define,
    TypeDef,
    EnumValue,
    Predicate,
    Pattern,
    Monitor,
    Assumption,
    Guarantee,
};

struct Symbol {
    SymbolKind kind;
    std::size_t element = 0; // index of the declaring element
    SemType type;            // variables, monitors, defines, typedefs, enum values
    Span span;
    std::size_t value_index = 0; // enum values: position in the enum
    syntax::ExprPtr definition;  // defines
};

struct EnumInfo {
    std::vector<std::string> values;
};

/// Parameters of a predicate, or parameters plus variables of a pattern.
struct LocalScope {
    std::map<std::string, SemType> names;
    std::vector<std::string> params; // declaration order
    std::vector<std::string> pattern_vars;
};

struct SymbolTable {
    std::map<std::string, Symbol> globals;
    std::vector<EnumInfo> enums;
    std::map<std::string, LocalScope> locals; // keyed by predicate/pattern name

    const Symbol* find(const std::string& name) const {
        auto it = globals.find(name);
        return it == globals.end() ? nullptr : &it->second;
    }
};

std::string describe(const SemType& t, const SymbolTable& symbols);

} // namespace spectra::sema
