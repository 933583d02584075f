// Final lowering pass: enum and integer variables become vectors of kernel
// booleans, and every comparison or arithmetic expression becomes a circuit
// over those bits.
//
// Integer-valued subexpressions are two's-complement bit vectors whose width
// is exactly what their value interval needs, so every operation can be
// computed modulo 2^width without losing information.

#include "spectra/lowering/passes.hpp"
#include "spectra/lowering/rewrite.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace spectra::lowering {

using namespace syntax;

namespace {

using i128 = __int128;

unsigned ceil_log2(std::uint64_t n) {
    unsigned w = 0;
    while (w < 64 && (std::uint64_t{1} << w) < n)
        ++w;
    return w;
}

unsigned signed_width(i128 lo, i128 hi) {
    unsigned w = 1;
    while (!(-(i128{1} << (w - 1)) <= lo && hi <= (i128{1} << (w - 1)) - 1))
        ++w;
    return w;
}

// ---------------------------------------------------- kernel builders

const ExprPtr k_true = make_bool(true);
const ExprPtr k_false = make_bool(false);

bool is_const(const ExprPtr& e, bool v) {
    const auto* b = std::get_if<BoolConst>(&e->node);
    return b && b->value == v;
}

ExprPtr k_not(const ExprPtr& a) {
    if (is_const(a, true))
        return k_false;
    if (is_const(a, false))
        return k_true;
    if (const auto* u = std::get_if<Unary>(&a->node); u && u->op == UnaryOp::Not)
        return u->operand;
    return make_unary(UnaryOp::Not, a);
}

ExprPtr k_and(const ExprPtr& a, const ExprPtr& b) {
    if (is_const(a, false) || is_const(b, false))
        return k_false;
    if (is_const(a, true))
        return b;
    if (is_const(b, true) || a == b)
        return a;
    return make_binary(BinaryOp::And, a, b);
}

ExprPtr k_or(const ExprPtr& a, const ExprPtr& b) {
    if (is_const(a, true) || is_const(b, true))
        return k_true;
    if (is_const(a, false))
        return b;
    if (is_const(b, false) || a == b)
        return a;
    return make_binary(BinaryOp::Or, a, b);
}

ExprPtr k_iff(const ExprPtr& a, const ExprPtr& b) {
    if (a == b)
        return k_true;
    if (is_const(a, true))
        return b;
    if (is_const(b, true))
        return a;
    if (is_const(a, false))
        return k_not(b);
    if (is_const(b, false))
        return k_not(a);
    return make_binary(BinaryOp::Iff, a, b);
}

ExprPtr k_xor(const ExprPtr& a, const ExprPtr& b) { return k_not(k_iff(a, b)); }

ExprPtr k_implies(const ExprPtr& a, const ExprPtr& b) {
    if (is_const(a, false) || is_const(b, true))
        return k_true;
    if (is_const(a, true))
        return b;
    if (is_const(b, false))
        return k_not(a);
    return make_binary(BinaryOp::Implies, a, b);
}

// -------------------------------------------------------- bit vectors

struct BV {
    std::vector<ExprPtr> bits; // two's complement, LSB first
    i128 lo = 0, hi = 0;
};

BV constant(i128 k) {
    BV v;
    v.lo = v.hi = k;
    unsigned w = signed_width(k, k);
    for (unsigned i = 0; i < w; ++i)
        v.bits.push_back(((k >> i) & 1) ? k_true : k_false);
    return v;
}

std::vector<ExprPtr> resize(const std::vector<ExprPtr>& bits, unsigned w) {
    std::vector<ExprPtr> out(bits.begin(), bits.begin() + std::min<std::size_t>(w, bits.size()));
    while (out.size() < w)
        out.push_back(bits.back());
    return out;
}

std::vector<ExprPtr> add_bits(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b,
                              ExprPtr carry) {
    std::vector<ExprPtr> out;
    for (std::size_t i = 0; i < a.size(); ++i) {
        out.push_back(k_xor(k_xor(a[i], b[i]), carry));
        carry = k_or(k_and(a[i], b[i]), k_and(carry, k_or(a[i], b[i])));
    }
    return out;
}

BV add(const BV& a, const BV& b) {
    BV r;
    r.lo = a.lo + b.lo;
    r.hi = a.hi + b.hi;
    unsigned w = signed_width(r.lo, r.hi);
    r.bits = add_bits(resize(a.bits, w), resize(b.bits, w), k_false);
    return r;
}

BV sub(const BV& a, const BV& b) {
    BV r;
    r.lo = a.lo - b.hi;
    r.hi = a.hi - b.lo;
    unsigned w = signed_width(r.lo, r.hi);
    std::vector<ExprPtr> nb;
    for (const auto& bit : resize(b.bits, w))
        nb.push_back(k_not(bit));
    r.bits = add_bits(resize(a.bits, w), nb, k_true);
    return r;
}

BV mul(const BV& a, const BV& b) {
    BV r;
    i128 c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    r.lo = *std::min_element(c, c + 4);
    r.hi = *std::max_element(c, c + 4);
    unsigned w = signed_width(r.lo, r.hi);
    auto x = resize(a.bits, w), y = resize(b.bits, w);
    std::vector<ExprPtr> acc(w, k_false);
    for (unsigned i = 0; i < w; ++i) {
        if (is_const(y[i], false))
            continue;
        std::vector<ExprPtr> partial(w, k_false);
        for (unsigned j = 0; i + j < w; ++j)
            partial[i + j] = k_and(x[j], y[i]);
        acc = add_bits(acc, partial, k_false);
    }
    r.bits = std::move(acc);
    return r;
}

// a < b as the sign of a - b.
ExprPtr less(const BV& a, const BV& b) {
    if (a.hi < b.lo)
        return k_true;
    if (a.lo >= b.hi)
        return k_false;
    BV d = sub(a, b);
    return d.bits.back();
}

ExprPtr equal_bits(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
    ExprPtr r = k_true;
    for (std::size_t i = 0; i < a.size(); ++i)
        r = k_and(r, k_iff(a[i], b[i]));
    return r;
}

ExprPtr equal(const BV& a, const BV& b) {
    if (a.hi < b.lo || b.hi < a.lo)
        return k_false;
    unsigned w = std::max(a.bits.size(), b.bits.size());
    return equal_bits(resize(a.bits, w), resize(b.bits, w));
}

i128 floor_div(i128 a, i128 k) {
    i128 q = a / k;
    if (a % k != 0 && ((a < 0) != (k < 0)))
        --q;
    return q;
}

BV divide(const BV& a, i128 k) {
    BV r;
    r.lo = k > 0 ? floor_div(a.lo, k) : floor_div(a.hi, k);
    r.hi = k > 0 ? floor_div(a.hi, k) : floor_div(a.lo, k);
    if (r.hi - r.lo > (1 << 16))
        throw std::runtime_error("quotient range too large to encode");
    unsigned w = signed_width(r.lo, r.hi);
    r.bits.assign(w, k_false);
    for (i128 q = r.lo; q <= r.hi; ++q) {
        // floor(a / k) = q  iff  a lies in [k*q, k*q + k - 1] (k > 0)
        //                    or  [k*q + k + 1, k*q]            (k < 0)
        i128 lo = k > 0 ? k * q : k * q + k + 1;
        i128 hi = k > 0 ? k * q + k - 1 : k * q;
        ExprPtr in = k_and(k_not(less(a, constant(lo))), k_not(less(constant(hi), a)));
        for (unsigned i = 0; i < w; ++i)
            if ((q >> i) & 1)
                r.bits[i] = k_or(r.bits[i], in);
    }
    return r;
}

BV modulo(const BV& a, i128 k) {
    BV q = divide(a, k);
    BV d = sub(a, mul(constant(k), q));
    BV r;
    if (floor_div(a.lo, k) == floor_div(a.hi, k)) {
        r.lo = a.lo - k * floor_div(a.lo, k);
        r.hi = a.hi - k * floor_div(a.hi, k);
    } else if (k > 0) {
        r.lo = 0;
        r.hi = k - 1;
    } else {
        r.lo = k + 1;
        r.hi = 0;
    }
    r.bits = resize(d.bits, signed_width(r.lo, r.hi));
    return r;
}

// Unsigned `bits < n` for a constant n.
ExprPtr unsigned_less(const std::vector<ExprPtr>& bits, std::uint64_t n) {
    if (bits.size() < 64 && n >= (std::uint64_t{1} << bits.size()))
        return k_true;
    // from the most significant bit down
    ExprPtr lt = k_false;
    ExprPtr eq = k_true;
    for (std::size_t i = bits.size(); i-- > 0;) {
        bool nb = (n >> i) & 1;
        if (nb)
            lt = k_or(lt, k_and(eq, k_not(bits[i])));
        eq = k_and(eq, nb ? bits[i] : k_not(bits[i]));
    }
    return lt;
}

// --------------------------------------------------------------- blasting

struct Blasted {
    enum class Kind { Bool, Enum, Int } kind = Kind::Bool;
    ExprPtr b;
    std::vector<ExprPtr> code; // enum: unsigned index bits
    BV value;                  // int
};

class Blaster {
public:
    explicit Blaster(const SpecAst& spec) : spec_(spec), names_(spec) {}

    KernelSpec run() {
        KernelSpec k;
        k.name = spec_.name;
        for (const auto& el : spec_.elements)
            if (const auto* v = std::get_if<VarDecl>(&el.node))
                declare(*v, el, k);
        for (std::size_t i = 0, vi = 0; i < spec_.elements.size(); ++i) {
            const Element& el = spec_.elements[i];
            if (std::holds_alternative<VarDecl>(el.node)) {
                validity(k.variables[vi++], el, k);
                continue;
            }
            const auto& c = std::get<Constraint>(el.node);
            Blasted r = blast(c.body.expr, false);
            KernelConstraint kc{c.role, c.name.value_or(""), c.body.kind, r.b, el.origin, el.span};
            (c.role == Role::Assumption ? k.assumptions : k.guarantees).push_back(std::move(kc));
        }
        return k;
    }

private:
    const SpecAst& spec_;
    NameSupply names_;
    std::map<std::string, std::size_t> var_index_;
    std::vector<VarInfo> vars_;
    // enum literal -> (values of its enumeration, index)
    std::map<std::string, std::pair<const std::vector<std::string>*, std::size_t>> literals_;

    void declare(const VarDecl& v, const Element& el, KernelSpec& k) {
        VarInfo info;
        info.name = v.name;
        info.kind = v.kind;
        info.origin = el.origin;
        switch (el.origin.kind) {
        case OriginKind::Monitor: info.source = VarInfo::Source::Monitor; break;
        case OriginKind::PatternAux: info.source = VarInfo::Source::PatternAux; break;
        case OriginKind::PastAux: info.source = VarInfo::Source::PastAux; break;
        default: info.source = VarInfo::Source::User; break;
        }
        unsigned width = 1;
        if (const auto* e = std::get_if<EnumType>(&v.type.node)) {
            info.type = VarInfo::Type::Enum;
            info.values = e->values;
            info.lower = 0;
            info.upper = static_cast<std::int64_t>(e->values.size()) - 1;
            width = ceil_log2(e->values.size());
            for (std::size_t i = 0; i < e->values.size(); ++i)
                literals_.emplace(e->values[i], std::make_pair(&e->values, i));
        } else if (const auto* r = std::get_if<IntRange>(&v.type.node)) {
            info.type = VarInfo::Type::Int;
            info.lower = r->lower;
            info.upper = r->upper;
            width = ceil_log2(static_cast<std::uint64_t>(r->upper - r->lower) + 1);
        } else if (!std::holds_alternative<BooleanType>(v.type.node)) {
            throw std::logic_error("type reference survived lowering");
        }
        if (info.type == VarInfo::Type::Boolean)
            info.bits.push_back(v.name);
        else
            for (unsigned i = 0; i < width; ++i)
                info.bits.push_back(names_.prefer(v.name + "_" + std::to_string(i)));
        auto& list = v.kind == VarKind::Env ? k.env_vars : k.sys_vars;
        list.insert(list.end(), info.bits.begin(), info.bits.end());
        var_index_[v.name] = vars_.size();
        vars_.push_back(info);
        k.variables.push_back(std::move(info));
    }

    void validity(const VarInfo& v, const Element& el, KernelSpec& k) {
        if (v.type == VarInfo::Type::Boolean)
            return;
        std::uint64_t n = v.cardinality();
        if (v.bits.size() < 64 && n == (std::uint64_t{1} << v.bits.size()))
            return;
        std::vector<ExprPtr> cur, next;
        for (const auto& b : v.bits) {
            cur.push_back(make_name(b));
            next.push_back(make_unary(UnaryOp::Next, make_name(b)));
        }
        Role role = v.kind == VarKind::Env ? Role::Assumption : Role::Guarantee;
        Origin origin{el.origin.element, OriginKind::Validity};
        std::string base = std::string(fresh_prefix) + "_valid_" + v.name;
        auto& list = role == Role::Assumption ? k.assumptions : k.guarantees;
        list.push_back(KernelConstraint{role, names_.prefer(base + "_ini"), ConstraintKind::Ini,
                                        unsigned_less(cur, n), origin, el.span});
        list.push_back(KernelConstraint{role, names_.prefer(base + "_trans"),
                                        ConstraintKind::Trans, unsigned_less(next, n), origin,
                                        el.span});
    }

    static Blasted boolean(ExprPtr e) { return Blasted{Blasted::Kind::Bool, std::move(e), {}, {}}; }

    Blasted blast(const ExprPtr& e, bool primed) {
        return std::visit(
            [&](const auto& x) -> Blasted {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, BoolConst>) {
                    return boolean(x.value ? k_true : k_false);
                } else if constexpr (std::is_same_v<T, IntLit>) {
                    return Blasted{Blasted::Kind::Int, nullptr, {}, constant(x.value)};
                } else if constexpr (std::is_same_v<T, NameRef>) {
                    return name(x.name, primed);
                } else if constexpr (std::is_same_v<T, Instance>) {
                    throw std::logic_error("instance '" + x.name + "' survived lowering");
                } else if constexpr (std::is_same_v<T, Unary>) {
                    switch (x.op) {
                    case UnaryOp::Next: return blast(x.operand, true);
                    case UnaryOp::Not: return boolean(k_not(blast(x.operand, primed).b));
                    case UnaryOp::Neg: {
                        BV v = blast(x.operand, primed).value;
                        return Blasted{Blasted::Kind::Int, nullptr, {}, sub(constant(0), v)};
                    }
                    default: throw std::logic_error("past-time operator survived lowering");
                    }
                } else {
                    return binary(x, primed);
                }
            },
            e->node);
    }

    Blasted name(const std::string& n, bool primed) {
        auto bit = [&](const std::string& b) {
            ExprPtr r = make_name(b);
            return primed ? make_unary(UnaryOp::Next, r) : r;
        };
        if (auto it = var_index_.find(n); it != var_index_.end()) {
            const VarInfo& v = vars_[it->second];
            std::vector<ExprPtr> bits;
            for (const auto& b : v.bits)
                bits.push_back(bit(b));
            switch (v.type) {
            case VarInfo::Type::Boolean: return boolean(bits[0]);
            case VarInfo::Type::Enum: return Blasted{Blasted::Kind::Enum, nullptr, bits, {}};
            case VarInfo::Type::Int: {
                BV offset;
                offset.lo = 0;
                offset.hi = v.upper - v.lower;
                offset.bits = bits;
                offset.bits.push_back(k_false); // unsigned -> signed
                return Blasted{Blasted::Kind::Int, nullptr, {}, add(offset, constant(v.lower))};
            }
            }
        }
        auto lit = literals_.find(n);
        if (lit == literals_.end())
            throw std::logic_error("unresolved name '" + n + "' during lowering");
        unsigned w = ceil_log2(lit->second.first->size());
        std::vector<ExprPtr> code;
        for (unsigned i = 0; i < w; ++i)
            code.push_back(((lit->second.second >> i) & 1) ? k_true : k_false);
        return Blasted{Blasted::Kind::Enum, nullptr, code, {}};
    }

    std::int64_t constant_of(const BV& v) {
        if (v.lo != v.hi)
            throw std::logic_error("divisor is not constant");
        return static_cast<std::int64_t>(v.lo);
    }

    Blasted binary(const Binary& x, bool primed) {
        Blasted l = blast(x.lhs, primed);
        Blasted r = blast(x.rhs, primed);
        auto as_int = [](BV v) { return Blasted{Blasted::Kind::Int, nullptr, {}, std::move(v)}; };
        switch (x.op) {
        case BinaryOp::And: return boolean(k_and(l.b, r.b));
        case BinaryOp::Or: return boolean(k_or(l.b, r.b));
        case BinaryOp::Implies: return boolean(k_implies(l.b, r.b));
        case BinaryOp::Iff: return boolean(k_iff(l.b, r.b));
        case BinaryOp::Eq:
        case BinaryOp::Neq: {
            ExprPtr eq;
            if (l.kind == Blasted::Kind::Bool)
                eq = k_iff(l.b, r.b);
            else if (l.kind == Blasted::Kind::Enum)
                eq = equal_bits(l.code, r.code);
            else
                eq = equal(l.value, r.value);
            return boolean(x.op == BinaryOp::Eq ? eq : k_not(eq));
        }
        case BinaryOp::Lt: return boolean(less(l.value, r.value));
        case BinaryOp::Gt: return boolean(less(r.value, l.value));
        case BinaryOp::Le: return boolean(k_not(less(r.value, l.value)));
        case BinaryOp::Ge: return boolean(k_not(less(l.value, r.value)));
        case BinaryOp::Add: return as_int(add(l.value, r.value));
        case BinaryOp::Sub: return as_int(sub(l.value, r.value));
        case BinaryOp::Mul: return as_int(mul(l.value, r.value));
        case BinaryOp::Div: return as_int(divide(l.value, constant_of(r.value)));
        case BinaryOp::Mod: return as_int(modulo(l.value, constant_of(r.value)));
        case BinaryOp::Since: throw std::logic_error("past-time operator survived lowering");
        }
        throw std::logic_error("unknown operator");
    }
};

} // namespace

KernelSpec expand_enums_and_ints(const SpecAst& spec) { return Blaster(spec).run(); }

} // namespace spectra::lowering
