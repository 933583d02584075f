#pragma once

#include "spectra/bdd/bdd.hpp"
#include "spectra/lowering/kernel.hpp"

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace spectra::gr1 {

using bdd::Bdd;

/// Raised when the node cap of the manager is hit during solving or
/// synthesis; the message says how far the computation got.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One kernel constraint translated to a decision diagram.
struct ConstraintBdd {
    lowering::KernelConstraint source;
    Bdd bdd;
};

/// Symbolic GR(1) game. Kernel variable k (env variables first, then sys
/// variables, in declaration order) sits at level 2k and its primed copy at
/// 2k + 1. Levels from 2 * (|X| + |Y|) on are free for memory bits.
struct Game {
    std::shared_ptr<bdd::Manager> manager;
    std::vector<std::string> env_vars, sys_vars;
    std::vector<std::uint32_t> x, y, xp, yp; // levels
    Bdd x_cube, y_cube, xp_cube, yp_cube;

    Bdd theta_e, theta_s, rho_e, rho_s;
    std::vector<Bdd> je, js; // never empty

    std::vector<ConstraintBdd> assumptions, guarantees;

    std::uint32_t level(const std::string& name) const; // unprimed level
    std::uint32_t first_free_level() const {
        return 2 * static_cast<std::uint32_t>(env_vars.size() + sys_vars.size());
    }
};

/// Translates a kernel boolean expression; names resolve through `levels`
/// (unprimed level; next(v) uses level + 1).
Bdd translate(bdd::Manager& manager, const syntax::Expr& e,
              const std::function<std::uint32_t(const std::string&)>& levels);

/// Builds the game of a kernel specification. A fresh manager is created
/// when none is passed.
Game to_gr1(const lowering::KernelSpec& kernel, std::shared_ptr<bdd::Manager> manager = nullptr);

/// Recomputes theta/rho/J from the per-constraint diagrams, keeping only
/// the constraints whose flag is set.
void assemble(Game& game, const std::vector<bool>& keep_assumptions,
              const std::vector<bool>& keep_guarantees);

/// { s | for all X': rho_e(s, X') -> exists Y': rho_s(s, X', Y') & V(X', Y') }.
/// V may mention memory levels; they are primed along with X and Y and
/// quantified together with Y'.
Bdd controllable_pre(const Game& game, const Bdd& v, const Bdd& extra_primed_cube = Bdd());

/// Intermediate sets of the winning-region computation for justice
/// guarantee j: the increasing chain y[j][0..] and, for every chain step,
/// the X fixpoints x[j][r][i].
struct SynthesisMemo {
    Bdd z;
    std::vector<std::vector<Bdd>> y;
    std::vector<std::vector<std::vector<Bdd>>> x;
};

struct Solution {
    bool realizable = false;
    SynthesisMemo memo;
};

/// Three nested fixpoints; outer Z iterates over the justice guarantees
/// round-robin until nothing changes. Throws ResourceError.
Solution solve(const Game& game);

/// Strict realizability check on a computed winning region.
bool initially_winning(const Game& game, const Bdd& z);

/// Named assumption kept in the controller so that runtime violations can
/// be reported against the source.
struct AssumptionInfo {
    std::string name;
    syntax::ConstraintKind kind = syntax::ConstraintKind::Ini;
    std::uint32_t line = 0, column = 0;
    Bdd bdd;
};

/// Memoryful symbolic strategy. Memory bit b sits at level
/// game.first_free_level() + 2b (primed + 1); memory value j is the
/// binary encoding of the justice index (first justice = 0).
struct SymbolicController {
    std::shared_ptr<bdd::Manager> manager;
    std::vector<std::string> env_vars, sys_vars;
    std::vector<lowering::VarInfo> variables;
    std::uint32_t memory_bits = 0;
    Bdd init;  // over X, Y, M: theta_e, theta_s, winning, first memory value
    Bdd trans; // over X, Y, M, X', Y', M'
    Bdd env_init, env_trans;
    std::vector<AssumptionInfo> assumptions;

    std::vector<std::uint32_t> x_levels() const;
    std::vector<std::uint32_t> y_levels() const;
    std::vector<std::uint32_t> m_levels() const;
    std::uint32_t level(const std::string& kernel_var) const;
};

/// Strategy from the memo: advance the memory at Js_j states, otherwise
/// descend the Y_j chain, otherwise stay inside the X fixpoint of the least
/// violated env justice. Per (state, input) the first applicable rule wins.
/// The game must be realizable.
SymbolicController synthesize_symbolic(const Game& game, const SynthesisMemo& memo,
                                       const lowering::KernelSpec& kernel);

/// Explicit automaton obtained by breadth-first search from the initial
/// states; system choices resolved by sat_one.
struct ConcreteController {
    /// Assignment of every state: env bits, sys bits, memory bits.
    std::vector<std::vector<bool>> states;
    /// Initial env assignment -> state.
    std::vector<std::pair<std::vector<bool>, std::uint32_t>> initial;
    /// Per state: input assignment X' -> successor.
    std::vector<std::vector<std::pair<std::vector<bool>, std::uint32_t>>> successors;
};

class StateLimitExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t default_max_states = 50000;

ConcreteController enumerate_concrete(const SymbolicController& ctrl,
                                      std::size_t max_states = default_max_states);

/// Every satisfying assignment of f over `levels` (which must cover the
/// support), in lexicographic order with 0 before 1 on the first level;
/// stops after `cap` entries.
std::vector<std::vector<bool>> all_sat(bdd::Manager& manager, const Bdd& f,
                                       const std::vector<std::uint32_t>& levels, std::size_t cap);

} // namespace spectra::gr1
