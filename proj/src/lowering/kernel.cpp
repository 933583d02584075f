#include "spectra/lowering/kernel.hpp"

#include "spectra/syntax/printer.hpp"

#include <algorithm>
#include <sstream>

namespace spectra::lowering {

std::string to_string(const Value& v) {
    if (const auto* b = std::get_if<bool>(&v))
        return *b ? "true" : "false";
    if (const auto* s = std::get_if<std::string>(&v))
        return *s;
    return std::to_string(std::get<std::int64_t>(v));
}

std::uint64_t VarInfo::cardinality() const {
    switch (type) {
    case Type::Boolean: return 2;
    case Type::Enum: return values.size();
    case Type::Int: return static_cast<std::uint64_t>(upper - lower) + 1;
    }
    return 0;
}

std::optional<std::vector<bool>> VarInfo::encode(const Value& v) const {
    std::uint64_t code = 0;
    switch (type) {
    case Type::Boolean: {
        const auto* b = std::get_if<bool>(&v);
        if (!b)
            return std::nullopt;
        code = *b;
        break;
    }
    case Type::Enum: {
        const auto* s = std::get_if<std::string>(&v);
        if (!s)
            return std::nullopt;
        auto it = std::find(values.begin(), values.end(), *s);
        if (it == values.end())
            return std::nullopt;
        code = static_cast<std::uint64_t>(it - values.begin());
        break;
    }
    case Type::Int: {
        const auto* i = std::get_if<std::int64_t>(&v);
        if (!i || *i < lower || *i > upper)
            return std::nullopt;
        code = static_cast<std::uint64_t>(*i - lower);
        break;
    }
    }
    std::vector<bool> out(bits.size());
    for (std::size_t k = 0; k < bits.size(); ++k)
        out[k] = (code >> k) & 1u;
    return out;
}

std::optional<Value> VarInfo::decode(const std::vector<bool>& b) const {
    if (b.size() != bits.size())
        return std::nullopt;
    std::uint64_t code = 0;
    for (std::size_t k = 0; k < b.size(); ++k)
        if (b[k])
            code |= std::uint64_t{1} << k;
    switch (type) {
    case Type::Boolean: return Value{code == 1};
    case Type::Enum:
        if (code >= values.size())
            return std::nullopt;
        return Value{values[code]};
    case Type::Int:
        if (code > static_cast<std::uint64_t>(upper - lower))
            return std::nullopt;
        return Value{lower + static_cast<std::int64_t>(code)};
    }
    return std::nullopt;
}

const VarInfo* KernelSpec::find_variable(const std::string& n) const {
    for (const auto& v : variables)
        if (v.name == n)
            return &v;
    return nullptr;
}

std::string print(const KernelSpec& kernel) {
    std::ostringstream out;
    out << "spec " << kernel.name << "\n\n";
    for (const auto& v : kernel.env_vars)
        out << "env boolean " << v << ";\n";
    for (const auto& v : kernel.sys_vars)
        out << "sys boolean " << v << ";\n";
    auto emit = [&](const char* role, const KernelConstraint& c) {
        out << role << ' ';
        if (!c.name.empty())
            out << c.name << ": ";
        out << syntax::print(syntax::TempConstraint{c.kind, c.expr, {}}) << ";\n";
    };
    if (!kernel.assumptions.empty())
        out << "\n";
    for (const auto& c : kernel.assumptions)
        emit("asm", c);
    if (!kernel.guarantees.empty())
        out << "\n";
    for (const auto& c : kernel.guarantees)
        emit("gar", c);
    return out.str();
}

} // namespace spectra::lowering
