#pragma once

#include "spectra/lowering/kernel.hpp"
#include "spectra/sema/check.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace spectra::analysis {

/// An asm/gar element of the source specification.
struct SourceConstraint {
    std::size_t element = 0; // index into the checked specification
    syntax::Role role = syntax::Role::Guarantee;
    std::string name;  // empty when unnamed
    std::string label; // name, or the printed constraint when unnamed
    Span span;
};

/// Every asm/gar element in source order.
std::vector<SourceConstraint> source_constraints(const syntax::SpecAst& spec);

struct CoreReport {
    std::vector<SourceConstraint> core;
    std::size_t checks = 0; // realizability checks performed
    bool minimal = false;   // every single removal was verified realizable
};

/// Thrown by unrealizable_core on a realizable specification.
class Realizable : public std::invalid_argument {
public:
    Realizable() : std::invalid_argument("specification is realizable") {}
};

/// DDmin over the guarantee elements (assumptions, monitors and validity
/// constraints always kept); removing a guarantee drops everything lowering
/// generated from it. The result is checked for 1-minimality.
CoreReport unrealizable_core(const sema::CheckedSpec& checked);

enum class Triviality { TriviallyTrue, TriviallyFalse };

struct TrivialFinding {
    SourceConstraint constraint;
    Triviality verdict;
};

/// Constraints whose lowered diagram is constant on the valid encodings of
/// their variables. Pattern instances are not examined.
std::vector<TrivialFinding> find_trivial(const sema::CheckedSpec& checked);

struct MonitorVerdict {
    bool deterministic = true;
    bool complete = true;
    /// The constraints fail for some value of another variable's next
    /// value (step constraints) or of another variable (initial ones).
    bool restricts_others = false;
    /// Which condition the witness violates ("initial completeness", ...).
    std::string violation;
    /// Assignment showing the violation; kernel bit names, "next(v)" for
    /// primed values, "v'" for the second monitor value of a
    /// non-determinism witness.
    std::map<std::string, bool> witness;
};

/// Semantic checks of one monitor: at most one (deterministic) and at least
/// one (complete) monitor value initially and in every step, for every value
/// of the other variables. Throws std::invalid_argument for an unknown
/// monitor.
MonitorVerdict check_monitor(const sema::CheckedSpec& checked, const std::string& monitor);

/// Names of all monitors in source order.
std::vector<std::string> monitor_names(const syntax::SpecAst& spec);

} // namespace spectra::analysis
