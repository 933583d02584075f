#pragma once

// Explicit-state reference implementations for differential testing. Shares
// no code with the decision-diagram engine or the symbolic solver.

#include "spectra/lowering/kernel.hpp"
#include "spectra/syntax/ast.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace spectra::oracle {

/// Value of a kernel variable, `primed` for next(name).
using Lookup = std::function<bool(const std::string& name, bool primed)>;

/// Evaluates a boolean expression built from constants, names, next, !, &,
/// |, ->, <->, = and != (on booleans).
bool eval(const syntax::Expr& e, const Lookup& lookup);

/// Finite trace over boolean variables; `loop` optionally marks a lasso.
struct Trace {
    std::vector<std::map<std::string, bool>> states;
    std::optional<std::size_t> loop;
};

/// Past-time semantics evaluated directly on the trace: Y, S, O (true S),
/// H (not O not), plus the boolean connectives.
bool eval_pastltl(const syntax::Expr& formula, const Trace& trace, std::size_t i);

/// Dense bit set.
class Bits {
public:
    Bits() = default;
    explicit Bits(std::size_t n, bool value = false);
    std::size_t size() const { return n_; }
    bool operator[](std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool v = true);
    /// `len` <= 64 bits starting at `offset`.
    std::uint64_t block(std::size_t offset, unsigned len) const;
    bool any() const;
    bool all() const;
    Bits operator&(const Bits& o) const;
    Bits operator|(const Bits& o) const;
    Bits operator~() const;
    friend bool operator==(const Bits& a, const Bits& b) { return a.n_ == b.n_ && a.w_ == b.w_; }

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
    void trim();
};

inline constexpr unsigned max_bits = 12;

/// GR(1) game over all assignments of a kernel's variables. A state packs
/// env bits (positions 0..nx-1) and sys bits (nx..nx+ny-1) in declaration
/// order.
class ExplicitGame {
public:
    /// Throws std::length_error above max_bits variables.
    explicit ExplicitGame(const lowering::KernelSpec& kernel);

    unsigned nx() const { return nx_; }
    unsigned ny() const { return ny_; }
    std::size_t states() const { return std::size_t{1} << (nx_ + ny_); }
    std::uint32_t state(std::uint32_t x, std::uint32_t y) const { return x | (y << nx_); }
    std::uint32_t env_part(std::uint32_t s) const { return s & ((1u << nx_) - 1); }
    std::uint32_t sys_part(std::uint32_t s) const { return s >> nx_; }
    const std::vector<std::string>& names() const { return names_; }

    bool env_init(std::uint32_t x) const { return theta_e_[x]; }
    bool sys_init(std::uint32_t s) const { return theta_s_[s]; }
    bool env_trans(std::uint32_t s, std::uint32_t x2) const {
        return rho_e_[(std::size_t(s) << nx_) | x2];
    }
    bool sys_trans(std::uint32_t s, std::uint32_t x2, std::uint32_t y2) const {
        return rho_s_[(((std::size_t(s) << nx_) | x2) << ny_) | y2];
    }
    const std::vector<Bits>& env_justice() const { return je_; }
    const std::vector<Bits>& sys_justice() const { return js_; }

    /// { s | for all x' with rho_e: exists y' with rho_s and V(x', y') }
    Bits cpre(const Bits& v) const;

private:
    unsigned nx_ = 0, ny_ = 0;
    std::vector<std::string> names_;
    Bits theta_e_, theta_s_, rho_e_, rho_s_;
    std::vector<Bits> je_, js_;
};

/// System winning region by the nested fixpoint
/// nu Z. and_j mu Y. or_i nu X. (Js_j & cpre Z) | cpre Y | (!Je_i & cpre X).
Bits winning_region(const ExplicitGame& game);

/// Strict realizability: every initial input admits an initial output in
/// the winning region that satisfies the initial guarantees.
bool solve_explicit(const ExplicitGame& game);
bool solve_explicit(const lowering::KernelSpec& kernel);

/// Explicit closed-loop graph for fairness checks.
struct Graph {
    std::vector<std::vector<std::uint32_t>> succ;
    std::vector<std::uint32_t> initial;
    std::vector<std::vector<bool>> env_justice; // per i, per node
    std::vector<std::vector<bool>> sys_justice; // per j, per node
};

/// A reachable cycle on which every env justice holds infinitely often but
/// some sys justice j never holds. Returns the nodes of a strongly connected
/// component witnessing it and the index j.
struct UnfairCycle {
    std::size_t justice;
    std::vector<std::uint32_t> component;
};
std::optional<UnfairCycle> find_unfair_cycle(const Graph& graph);

} // namespace spectra::oracle
