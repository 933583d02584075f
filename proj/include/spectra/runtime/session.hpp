#pragma once

#include "spectra/gr1/game.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace spectra::runtime {

/// Source-level values keyed by variable name.
using Assignment = std::map<std::string, lowering::Value>;

struct ViolatedAssumption {
    std::string name;
    std::uint32_t line = 0, column = 0;
};

/// The inputs break an initial (initial) or safety (step) assumption; the
/// session is left unchanged.
class AssumptionViolation : public std::runtime_error {
public:
    explicit AssumptionViolation(std::vector<ViolatedAssumption> violated);
    const std::vector<ViolatedAssumption>& violated() const { return violated_; }

private:
    std::vector<ViolatedAssumption> violated_;
};

/// Missing, unknown or ill-typed inputs, or an operation out of order.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct EnvOptions {
    std::vector<Assignment> options;
    bool truncated = false;
};

inline constexpr std::size_t default_option_cap = 256;

/// Step-by-step execution of a symbolic controller with a history that can
/// be walked backward. Output choices use the deterministic sat_one of the
/// controller relation, so equal input sequences give equal runs.
class WalkSession {
public:
    explicit WalkSession(std::shared_ptr<const gr1::SymbolicController> ctrl);

    const gr1::SymbolicController& controller() const { return *ctrl_; }

    /// Variables shown to the user: env variables, then system variables and
    /// monitors (generated auxiliaries are hidden).
    const std::vector<const lowering::VarInfo*>& inputs() const { return inputs_; }
    const std::vector<const lowering::VarInfo*>& outputs() const { return outputs_; }

    /// First state for the given env values; returns the system values.
    Assignment initial(const Assignment& env);
    /// Next state; a step from an earlier cursor discards the later history.
    Assignment step(const Assignment& env);
    /// Moves the cursor one state back.
    void back();

    bool started() const { return !history_.empty(); }
    std::size_t cursor() const { return cursor_; }
    std::size_t history_length() const { return history_.size(); }
    /// Env and system values of history entry i (default: the cursor).
    Assignment state(std::size_t i) const;
    Assignment state() const { return state(cursor_); }
    /// Full kernel assignment of history entry i: env, sys, memory bits.
    const std::vector<bool>& raw_state(std::size_t i) const { return history_.at(i); }

    /// Env values allowed next: by the initial assumptions before the first
    /// state, by the safety assumptions afterwards.
    EnvOptions env_options(std::size_t cap = default_option_cap) const;

    /// History up to its end as CSV: header of variable names, one row per
    /// state.
    std::string trace_csv() const;

private:
    std::shared_ptr<const gr1::SymbolicController> ctrl_;
    std::vector<const lowering::VarInfo*> inputs_, outputs_;
    std::vector<std::uint32_t> x_, y_, m_;
    std::map<std::string, std::size_t> position_; // kernel bit -> state index
    std::vector<std::vector<bool>> history_;
    std::size_t cursor_ = 0;

    std::vector<bool> encode_inputs(const Assignment& env) const;
    Assignment decode(const std::vector<bool>& state, const std::vector<const lowering::VarInfo*>& vars) const;
    std::vector<bool> by_level(const std::vector<bool>& state, const std::vector<bool>& next_inputs) const;
    std::vector<ViolatedAssumption> violated(syntax::ConstraintKind kind, const std::vector<bool>& a) const;
};

} // namespace spectra::runtime
