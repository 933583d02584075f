#pragma once

#include "spectra/syntax/ast.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace spectra::lowering {

using syntax::ConstraintKind;
using syntax::ExprPtr;
using syntax::Origin;
using syntax::OriginKind;
using syntax::Role;
using syntax::VarKind;

/// Value of a source-level variable: boolean, enum literal, or integer.
using Value = std::variant<bool, std::string, std::int64_t>;

std::string to_string(const Value& v);

/// How one source-level variable (or monitor, or generated auxiliary) is
/// represented by kernel booleans.
struct VarInfo {
    enum class Type { Boolean, Enum, Int };
    enum class Source { User, Monitor, PatternAux, PastAux };

    std::string name;
    VarKind kind = VarKind::Sys;
    Type type = Type::Boolean;
    std::vector<std::string> values; // enum literals in declaration order
    std::int64_t lower = 0, upper = 1; // int range (booleans: 0..1)
    /// Kernel boolean names, least significant bit first.
    std::vector<std::string> bits;
    Source source = Source::User;
    Origin origin;

    /// Number of values of the declared type.
    std::uint64_t cardinality() const;
    /// Bits of the declared value; nullopt when the value is not of this
    /// variable's type.
    std::optional<std::vector<bool>> encode(const Value& v) const;
    /// Declared value represented by the bits, or nullopt for an invalid
    /// encoding (enum index >= n, integer offset > upper - lower).
    std::optional<Value> decode(const std::vector<bool>& bits) const;
};

struct KernelConstraint {
    Role role = Role::Guarantee;
    std::string name; // empty for unnamed
    ConstraintKind kind = ConstraintKind::Ini; // Ini, Trans or AlwEv
    ExprPtr expr;
    Origin origin;
    Span span;
};

/// A specification in the kernel language: boolean variables and
/// ini/trans/alwEv assumptions and guarantees.
struct KernelSpec {
    std::string name;
    std::vector<std::string> env_vars;
    std::vector<std::string> sys_vars;
    std::vector<KernelConstraint> assumptions;
    std::vector<KernelConstraint> guarantees;
    /// One entry per variable of the spec after the structural passes
    /// (user variables, monitors, pattern and past-time auxiliaries).
    std::vector<VarInfo> variables;

    const VarInfo* find_variable(const std::string& name) const;
};

/// Renders the kernel as a Spectra specification that parses and checks.
std::string print(const KernelSpec& kernel);

} // namespace spectra::lowering
