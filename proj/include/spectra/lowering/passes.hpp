#pragma once

#include "spectra/lowering/kernel.hpp"
#include "spectra/sema/check.hpp"

namespace spectra::lowering {

// Each pass takes a specification that passed sema::check (imports
// resolved) and removes one language feature. The output of every pass
// checks again. Constraint origins are preserved; constraints created by a
// pass carry the origin of the construct they came from.

/// Marks every asm/gar as originating from its own element index.
syntax::SpecAst assign_origins(syntax::SpecAst spec);

/// Inlines defines (transitively) and replaces type references by the
/// aliased type; removes Define and TypeDef elements.
syntax::SpecAst expand_defines_and_typedefs(syntax::SpecAst spec);

/// Replaces predicate instances by their bodies with parameters substituted
/// by the argument expressions; removes Predicate elements.
syntax::SpecAst expand_predicates(syntax::SpecAst spec);

/// Replaces each pattern instance by fresh system variables for the pattern
/// variables, ini/trans guarantees, and one justice constraint that keeps
/// the polarity of the instance; removes Pattern elements.
syntax::SpecAst expand_patterns(syntax::SpecAst spec);

/// Turns each monitor into a system variable plus guarantees.
syntax::SpecAst expand_monitors(syntax::SpecAst spec);

/// Splits `alw e` into `ini e` and `trans next(e)`; named constraints get
/// the suffixes `_ini` and `_trans`.
syntax::SpecAst expand_state_invariants(syntax::SpecAst spec);

/// Replaces past-time operators by auxiliary system variables defined by
/// guarantees (O and H are first rewritten in terms of S).
syntax::SpecAst expand_pastltl(syntax::SpecAst spec);

/// Encodes enum and integer variables in booleans, adds validity
/// constraints, and bit-blasts comparisons and arithmetic.
KernelSpec expand_enums_and_ints(const syntax::SpecAst& spec);

/// Every pass in order.
KernelSpec lower(const sema::CheckedSpec& checked);

/// Prefix of every name the passes invent.
inline constexpr const char* fresh_prefix = "__aux";

} // namespace spectra::lowering
