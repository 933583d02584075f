#include "spectra/runtime/session.hpp"

#include <set>
#include <sstream>

namespace spectra::runtime {

using gr1::Bdd;
using lowering::VarInfo;

namespace {

std::string describe(const std::vector<ViolatedAssumption>& v) {
    std::string s = "assumption violated:";
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? ", " : " ") + v[i].name;
    return s;
}

std::vector<std::pair<std::uint32_t, bool>> literals(const std::vector<std::uint32_t>& levels,
                                                     const std::vector<bool>& values, std::size_t offset,
                                                     std::uint32_t shift = 0) {
    std::vector<std::pair<std::uint32_t, bool>> out;
    for (std::size_t i = 0; i < levels.size(); ++i)
        out.emplace_back(levels[i] + shift, values[offset + i]);
    return out;
}

} // namespace

AssumptionViolation::AssumptionViolation(std::vector<ViolatedAssumption> violated)
    : std::runtime_error(describe(violated)), violated_(std::move(violated)) {}

WalkSession::WalkSession(std::shared_ptr<const gr1::SymbolicController> ctrl) : ctrl_(std::move(ctrl)) {
    const auto& c = *ctrl_;
    x_ = c.x_levels();
    y_ = c.y_levels();
    m_ = c.m_levels();
    for (std::size_t k = 0; k < c.env_vars.size(); ++k)
        position_[c.env_vars[k]] = k;
    for (std::size_t k = 0; k < c.sys_vars.size(); ++k)
        position_[c.sys_vars[k]] = c.env_vars.size() + k;
    for (const auto& v : c.variables) {
        if (v.kind == syntax::VarKind::Env)
            inputs_.push_back(&v);
        else if (v.source == VarInfo::Source::User || v.source == VarInfo::Source::Monitor)
            outputs_.push_back(&v);
    }
    c.manager->ensure_vars(static_cast<std::uint32_t>(2 * (x_.size() + y_.size() + m_.size())));
}

std::vector<bool> WalkSession::encode_inputs(const Assignment& env) const {
    std::set<std::string> known;
    std::vector<bool> x(x_.size(), false);
    for (const auto* v : inputs_) {
        known.insert(v->name);
        auto it = env.find(v->name);
        if (it == env.end())
            throw InputError("missing input '" + v->name + "'");
        auto bits = v->encode(it->second);
        if (!bits)
            throw InputError("value " + lowering::to_string(it->second) + " is not of the type of '" + v->name + "'");
        for (std::size_t i = 0; i < bits->size(); ++i)
            x[position_.at(v->bits[i])] = (*bits)[i];
    }
    for (const auto& [name, value] : env)
        if (!known.count(name))
            throw InputError("'" + name + "' is not an environment variable");
    return x;
}

Assignment WalkSession::decode(const std::vector<bool>& state, const std::vector<const VarInfo*>& vars) const {
    Assignment out;
    for (const auto* v : vars) {
        std::vector<bool> bits;
        for (const auto& b : v->bits)
            bits.push_back(state[position_.at(b)]);
        auto value = v->decode(bits);
        if (!value)
            throw std::logic_error("invalid encoding of '" + v->name + "' in a controller state");
        out[v->name] = *value;
    }
    return out;
}

std::vector<bool> WalkSession::by_level(const std::vector<bool>& state, const std::vector<bool>& next_inputs) const {
    std::vector<bool> a(ctrl_->manager->var_count(), false);
    for (std::size_t i = 0; i < state.size(); ++i)
        a[2 * i] = state[i];
    for (std::size_t i = 0; i < next_inputs.size(); ++i)
        a[x_[i] + 1] = next_inputs[i];
    return a;
}

std::vector<ViolatedAssumption> WalkSession::violated(syntax::ConstraintKind kind, const std::vector<bool>& a) const {
    std::vector<ViolatedAssumption> out;
    for (const auto& info : ctrl_->assumptions)
        if (info.kind == kind && !ctrl_->manager->eval(info.bdd, a))
            out.push_back({info.name, info.line, info.column});
    return out;
}

Assignment WalkSession::initial(const Assignment& env) {
    if (started())
        throw InputError("session already has an initial state");
    auto& m = *ctrl_->manager;
    const auto x = encode_inputs(env);
    std::vector<bool> state = x;
    state.resize(x_.size() + y_.size() + m_.size(), false);
    const auto a = by_level(state, {});
    if (!m.eval(ctrl_->env_init, a))
        throw AssumptionViolation(violated(syntax::ConstraintKind::Ini, a));
    Bdd choices = m.restrict(ctrl_->init, m.literal_cube(literals(x_, x, 0)));
    std::vector<std::uint32_t> out_levels = y_;
    out_levels.insert(out_levels.end(), m_.begin(), m_.end());
    auto pick = m.sat_one(choices, out_levels);
    if (!pick)
        throw std::logic_error("controller has no initial state for these inputs");
    for (std::size_t i = 0; i < pick->size(); ++i)
        state[x_.size() + i] = (*pick)[i];
    history_ = {state};
    cursor_ = 0;
    return decode(state, outputs_);
}

Assignment WalkSession::step(const Assignment& env) {
    if (!started())
        throw InputError("session has no initial state yet");
    auto& m = *ctrl_->manager;
    const auto x2 = encode_inputs(env);
    const auto& current = history_[cursor_];
    const auto a = by_level(current, x2);
    if (!m.eval(ctrl_->env_trans, a))
        throw AssumptionViolation(violated(syntax::ConstraintKind::Trans, a));

    std::vector<std::uint32_t> here = x_;
    here.insert(here.end(), y_.begin(), y_.end());
    here.insert(here.end(), m_.begin(), m_.end());
    auto lits = literals(here, current, 0);
    auto next_lits = literals(x_, x2, 0, 1);
    lits.insert(lits.end(), next_lits.begin(), next_lits.end());
    Bdd choices = m.restrict(ctrl_->trans, m.literal_cube(lits));
    std::vector<std::uint32_t> out_levels;
    for (auto l : y_)
        out_levels.push_back(l + 1);
    for (auto l : m_)
        out_levels.push_back(l + 1);
    auto pick = m.sat_one(choices, out_levels);
    if (!pick)
        throw std::logic_error("controller has no move for these inputs");

    std::vector<bool> next = x2;
    next.insert(next.end(), pick->begin(), pick->end());
    history_.resize(cursor_ + 1);
    history_.push_back(std::move(next));
    ++cursor_;
    return decode(history_.back(), outputs_);
}

void WalkSession::back() {
    if (cursor_ == 0)
        throw InputError("already at the first state");
    --cursor_;
}

Assignment WalkSession::state(std::size_t i) const {
    if (i >= history_.size())
        throw InputError("no state " + std::to_string(i));
    Assignment a = decode(history_[i], inputs_);
    a.merge(decode(history_[i], outputs_));
    return a;
}

EnvOptions WalkSession::env_options(std::size_t cap) const {
    auto& m = *ctrl_->manager;
    std::vector<std::vector<bool>> raw;
    if (!started()) {
        raw = gr1::all_sat(m, ctrl_->env_init, x_, cap + 1);
    } else {
        std::vector<std::uint32_t> here = x_;
        here.insert(here.end(), y_.begin(), y_.end());
        here.insert(here.end(), m_.begin(), m_.end());
        Bdd allowed = m.restrict(ctrl_->env_trans, m.literal_cube(literals(here, history_[cursor_], 0)));
        std::vector<std::uint32_t> xp;
        for (auto l : x_)
            xp.push_back(l + 1);
        raw = gr1::all_sat(m, allowed, xp, cap + 1);
    }
    EnvOptions out;
    out.truncated = raw.size() > cap;
    raw.resize(std::min(raw.size(), cap));
    for (auto& bits : raw) {
        bits.resize(x_.size() + y_.size() + m_.size(), false);
        out.options.push_back(decode(bits, inputs_));
    }
    return out;
}

std::string WalkSession::trace_csv() const {
    std::ostringstream out;
    std::vector<const VarInfo*> columns = inputs_;
    columns.insert(columns.end(), outputs_.begin(), outputs_.end());
    for (std::size_t i = 0; i < columns.size(); ++i)
        out << (i ? "," : "") << columns[i]->name;
    out << "\n";
    for (std::size_t s = 0; s < history_.size(); ++s) {
        auto values = state(s);
        for (std::size_t i = 0; i < columns.size(); ++i)
            out << (i ? "," : "") << lowering::to_string(values.at(columns[i]->name));
        out << "\n";
    }
    return out.str();
}

} // namespace spectra::runtime
