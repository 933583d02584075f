#include "spectra/sema/check.hpp"

#include "spectra/syntax/printer.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <tuple>

namespace spectra::sema {

using namespace syntax;

std::string describe(const SemType& t, const SymbolTable& symbols) {
    switch (t.kind) {
    case SemType::Kind::Boolean: return "boolean";
    case SemType::Kind::Int:
        return "Int(" + std::to_string(t.lower) + ".." + std::to_string(t.upper) + ")";
    case SemType::Kind::Enum: {
        std::string s = "{";
        if (t.enum_id < symbols.enums.size()) {
            const auto& vals = symbols.enums[t.enum_id].values;
            for (std::size_t i = 0; i < vals.size(); ++i)
                s += (i ? ", " : "") + vals[i];
        }
        return s + "}";
    }
    }
    return "?";
}

namespace {

// Bounds beyond this are rejected; keeps interval arithmetic and the bit
// blasting in lowering far away from 64-bit overflow.
constexpr std::int64_t int_limit = std::int64_t{1} << 40;

std::int64_t floor_div(std::int64_t a, std::int64_t k) {
    std::int64_t q = a / k;
    if (a % k != 0 && ((a < 0) != (k < 0)))
        --q;
    return q;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t k) { return a - k * floor_div(a, k); }

bool compatible(const SemType& a, const SemType& b) {
    if (a.kind != b.kind)
        return false;
    return a.kind != SemType::Kind::Enum || a.enum_id == b.enum_id;
}

struct Scope {
    const LocalScope* locals = nullptr;
    bool pattern_body = false;
    const Expr* pattern_instance_ok = nullptr;
};

class Typer {
public:
    using DefineTyper = std::function<std::optional<SemType>(const std::string&, const Span&)>;

    Typer(const SymbolTable& symbols, std::vector<Diagnostic>& diags,
          std::unordered_map<const Expr*, SemType>* types, DefineTyper define_type)
        : symbols_(symbols), diags_(diags), types_(types), define_type_(std::move(define_type)) {}

    std::optional<SemType> type(const Expr& e, const Scope& scope) {
        auto t = compute(e, scope);
        if (t && types_)
            (*types_)[&e] = *t;
        return t;
    }

private:
    const SymbolTable& symbols_;
    std::vector<Diagnostic>& diags_;
    std::unordered_map<const Expr*, SemType>* types_;
    DefineTyper define_type_;

    std::nullopt_t error(const Span& span, std::string message) {
        diags_.push_back(Diagnostic{span, Severity::Error, std::move(message), {}});
        return std::nullopt;
    }

    std::optional<SemType> expect_bool(const Expr& e, const Scope& scope, const char* what) {
        auto t = type(e, scope);
        if (t && !t->is_bool())
            return error(e.span, std::string(what) + " must be boolean, found " +
                                     describe(*t, symbols_));
        return t;
    }

    std::optional<SemType> expect_int(const Expr& e, const Scope& scope, const char* op) {
        auto t = type(e, scope);
        if (t && !t->is_int())
            return error(e.span, std::string("operator '") + op +
                                     "' needs integer operands, found " + describe(*t, symbols_));
        return t;
    }

    std::optional<SemType> checked_range(const Span& span, std::int64_t lo, std::int64_t hi) {
        if (lo < -int_limit || hi > int_limit)
            return error(span, "integer expression range exceeds supported bounds");
        return SemType::integer(lo, hi);
    }

    std::optional<SemType> resolve_name(const std::string& name, const Span& span,
                                        const Scope& scope) {
        if (scope.locals) {
            if (auto it = scope.locals->names.find(name); it != scope.locals->names.end())
                return it->second;
        }
        const Symbol* sym = symbols_.find(name);
        if (!sym)
            return error(span, "unknown name '" + name + "'");
        if (scope.pattern_body && sym->kind != SymbolKind::EnumValue)
            return error(span, "pattern bodies may only reference the pattern's parameters and "
                               "variables, not '" + name + "'");
        switch (sym->kind) {
        case SymbolKind::EnvVar:
        case SymbolKind::SysVar:
        case SymbolKind::Monitor:
        case SymbolKind::EnumValue: return sym->type;
        case SymbolKind::Define: return define_type_(name, span);
        case SymbolKind::Predicate:
        case SymbolKind::Pattern: return error(span, "'" + name + "' needs arguments");
        case SymbolKind::TypeDef: return error(span, "'" + name + "' is a type, not a value");
        case SymbolKind::Assumption:
        case SymbolKind::Guarantee:
            return error(span, "assumption and guarantee names cannot be referenced ('" + name +
                                   "')");
        }
        return std::nullopt;
    }

    std::optional<SemType> instance(const Expr& e, const Instance& inst, const Scope& scope) {
        if (scope.pattern_body)
            return error(e.span, "pattern bodies cannot instantiate predicates or patterns");
        const Symbol* sym = symbols_.find(inst.name);
        if (!sym || (sym->kind != SymbolKind::Predicate && sym->kind != SymbolKind::Pattern))
            return error(e.span, "'" + inst.name + "' is not a predicate or pattern");
        auto lit = symbols_.locals.find(inst.name);
        if (lit == symbols_.locals.end())
            return std::nullopt;
        const LocalScope& callee = lit->second;
        if (sym->kind == SymbolKind::Pattern && &e != scope.pattern_instance_ok)
            error(e.span, "pattern instance '" + inst.name +
                              "' may only appear as the entire expression of an assumption or "
                              "guarantee");
        if (inst.args.size() != callee.params.size())
            return error(e.span, "'" + inst.name + "' expects " +
                                     std::to_string(callee.params.size()) + " argument(s), got " +
                                     std::to_string(inst.args.size()));
        bool ok = true;
        for (std::size_t i = 0; i < inst.args.size(); ++i) {
            auto at = type(*inst.args[i], Scope{scope.locals, false, nullptr});
            const SemType& want = callee.names.at(callee.params[i]);
            if (at && !compatible(want, *at)) {
                error(inst.args[i]->span, "argument " + std::to_string(i + 1) + " of '" +
                                              inst.name + "' must be " +
                                              describe(want, symbols_) + ", found " +
                                              describe(*at, symbols_));
                ok = false;
            }
            ok = ok && at.has_value();
        }
        if (!ok)
            return std::nullopt;
        return SemType::boolean();
    }

    std::optional<SemType> compute(const Expr& e, const Scope& scope) {
        Scope inner{scope.locals, scope.pattern_body, nullptr};
        if (const auto* b = std::get_if<BoolConst>(&e.node)) {
            (void)b;
            return SemType::boolean();
        }
        if (const auto* i = std::get_if<IntLit>(&e.node))
            return checked_range(e.span, i->value, i->value);
        if (const auto* n = std::get_if<NameRef>(&e.node))
            return resolve_name(n->name, e.span, scope);
        if (const auto* inst = std::get_if<Instance>(&e.node))
            return instance(e, *inst, scope);
        if (const auto* u = std::get_if<Unary>(&e.node)) {
            switch (u->op) {
            case UnaryOp::Not:
                if (!expect_bool(*u->operand, inner, "operand of '!'"))
                    return std::nullopt;
                return SemType::boolean();
            case UnaryOp::Neg: {
                auto t = expect_int(*u->operand, inner, "-");
                if (!t || !t->is_int())
                    return std::nullopt;
                return SemType::integer(-t->upper, -t->lower);
            }
            case UnaryOp::Next: return type(*u->operand, inner);
            case UnaryOp::Prev:
            case UnaryOp::Historically:
            case UnaryOp::Once:
                if (!expect_bool(*u->operand, inner, "operand of a past-time operator"))
                    return std::nullopt;
                return SemType::boolean();
            }
        }
        const auto& bin = std::get<Binary>(e.node);
        switch (bin.op) {
        case BinaryOp::And:
        case BinaryOp::Or:
        case BinaryOp::Implies:
        case BinaryOp::Iff:
        case BinaryOp::Since: {
            const char* what = bin.op == BinaryOp::Since ? "operand of a past-time operator"
                                                         : "operand of a logical operator";
            auto l = expect_bool(*bin.lhs, inner, what);
            auto r = expect_bool(*bin.rhs, inner, what);
            if (!l || !r || !l->is_bool() || !r->is_bool())
                return std::nullopt;
            return SemType::boolean();
        }
        case BinaryOp::Eq:
        case BinaryOp::Neq: {
            auto l = type(*bin.lhs, inner);
            auto r = type(*bin.rhs, inner);
            if (!l || !r)
                return std::nullopt;
            if (!compatible(*l, *r))
                return error(e.span, "cannot compare " + describe(*l, symbols_) + " with " +
                                         describe(*r, symbols_));
            return SemType::boolean();
        }
        case BinaryOp::Lt:
        case BinaryOp::Gt:
        case BinaryOp::Le:
        case BinaryOp::Ge: {
            auto l = type(*bin.lhs, inner);
            auto r = type(*bin.rhs, inner);
            if (!l || !r)
                return std::nullopt;
            if (!l->is_int() || !r->is_int()) {
                const SemType& bad = l->is_int() ? *r : *l;
                if (bad.is_enum())
                    return error(e.span, "enumeration values can only be compared with '=' "
                                         "or '!='");
                return error(e.span, std::string("operator '") + spelling(bin.op) +
                                         "' needs integer operands, found " +
                                         describe(bad, symbols_));
            }
            return SemType::boolean();
        }
        case BinaryOp::Add:
        case BinaryOp::Sub:
        case BinaryOp::Mul: {
            auto l = expect_int(*bin.lhs, inner, spelling(bin.op));
            auto r = expect_int(*bin.rhs, inner, spelling(bin.op));
            if (!l || !r || !l->is_int() || !r->is_int())
                return std::nullopt;
            if (bin.op == BinaryOp::Add)
                return checked_range(e.span, l->lower + r->lower, l->upper + r->upper);
            if (bin.op == BinaryOp::Sub)
                return checked_range(e.span, l->lower - r->upper, l->upper - r->lower);
            // |bounds| <= 2^40 each, so products need the wider type
            __int128 c[4] = {static_cast<__int128>(l->lower) * r->lower,
                             static_cast<__int128>(l->lower) * r->upper,
                             static_cast<__int128>(l->upper) * r->lower,
                             static_cast<__int128>(l->upper) * r->upper};
            __int128 lo = *std::min_element(c, c + 4), hi = *std::max_element(c, c + 4);
            if (lo < -int_limit || hi > int_limit)
                return error(e.span, "integer expression range exceeds supported bounds");
            return SemType::integer(static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi));
        }
        case BinaryOp::Div:
        case BinaryOp::Mod: {
            auto l = expect_int(*bin.lhs, inner, spelling(bin.op));
            auto r = expect_int(*bin.rhs, inner, spelling(bin.op));
            if (!l || !r || !l->is_int() || !r->is_int())
                return std::nullopt;
            auto k = constant_value(*bin.rhs, symbols_);
            if (!k)
                return error(bin.rhs->span, std::string("divisor of '") + spelling(bin.op) +
                                                "' must be a constant expression");
            if (*k == 0)
                return error(bin.rhs->span, "division by zero");
            std::int64_t lo = l->lower, hi = l->upper;
            if (bin.op == BinaryOp::Div) {
                if (*k > 0)
                    return SemType::integer(floor_div(lo, *k), floor_div(hi, *k));
                return SemType::integer(floor_div(hi, *k), floor_div(lo, *k));
            }
            if (floor_div(lo, *k) == floor_div(hi, *k))
                return SemType::integer(floor_mod(lo, *k), floor_mod(hi, *k));
            if (*k > 0)
                return SemType::integer(0, *k - 1);
            return SemType::integer(*k + 1, 0);
        }
        }
        return std::nullopt;
    }
};

// Substitution environment for walking predicate bodies in the context of an
// instance: parameter name -> argument expression, evaluated in `outer`.
struct Env {
    std::map<std::string, const Expr*> args;
    const Env* outer = nullptr;
};

struct RuleContext {
    std::optional<Role> role;
    ConstraintKind kind = ConstraintKind::Trans;
    const char* next_forbidden = nullptr;
    const LocalScope* pattern = nullptr; // set while walking a pattern body
    bool pattern_safety = false;
};

class Checker {
public:
    explicit Checker(SpecAst ast) : ast_(std::move(ast)) {}

    CheckedSpec run() {
        if (!ast_.imports.empty())
            error(ast_.imports.front().span, "imports must be resolved before checking");
        declare_globals();
        declare_enums();
        resolve_declared_types();
        build_local_scopes();
        type_defines();
        check_predicates();
        check_patterns();
        check_monitors();
        check_constraints();

        dedupe();
        if (has_errors(diags_))
            throw SpecError(std::move(diags_));
        return CheckedSpec{std::move(ast_), std::move(symbols_), std::move(types_)};
    }

private:
    SpecAst ast_;
    SymbolTable symbols_;
    std::unordered_map<const Expr*, SemType> types_;
    std::vector<Diagnostic> diags_;
    std::map<const EnumType*, std::size_t> enum_ids_;

    enum class Visit { None, Active, Done };
    std::map<std::string, Visit> typedef_state_;
    std::map<std::string, Visit> define_state_;
    std::set<std::string> failed_defines_;

    void error(const Span& span, std::string message) {
        diags_.push_back(Diagnostic{span, Severity::Error, std::move(message), {}});
    }

    void dedupe() {
        std::set<std::tuple<std::string, std::uint32_t, std::uint32_t, std::string>> seen;
        std::vector<Diagnostic> out;
        for (auto& d : diags_) {
            auto key = std::make_tuple(d.span.file_name(), d.span.line, d.span.column, d.message);
            if (seen.insert(key).second)
                out.push_back(std::move(d));
        }
        diags_ = std::move(out);
    }

    static std::string where(const Span& s) {
        return std::to_string(s.line) + ":" + std::to_string(s.column);
    }

    void declare(const std::string& name, SymbolKind kind, std::size_t element, const Span& span) {
        auto [it, inserted] = symbols_.globals.emplace(name, Symbol{kind, element, {}, span, 0, {}});
        if (!inserted)
            error(span, "duplicate name '" + name + "' (previously declared at " +
                            where(it->second.span) + ")");
    }

    // ------------------------------------------------------------ declare

    void declare_globals() {
        for (std::size_t i = 0; i < ast_.elements.size(); ++i) {
            const Element& el = ast_.elements[i];
            std::visit(
                [&](const auto& x) {
                    using T = std::decay_t<decltype(x)>;
                    if constexpr (std::is_same_v<T, VarDecl>) {
                        declare(x.name, x.kind == VarKind::Env ? SymbolKind::EnvVar
                                                               : SymbolKind::SysVar,
                                i, el.span);
                    } else if constexpr (std::is_same_v<T, Constraint>) {
                        if (x.name)
                            declare(*x.name, x.role == Role::Assumption ? SymbolKind::Assumption
                                                                        : SymbolKind::Guarantee,
                                    i, el.span);
                    } else if constexpr (std::is_same_v<T, Define>) {
                        declare(x.name, SymbolKind::Define, i, el.span);
                        symbols_.globals[x.name].definition = x.expr;
                    } else if constexpr (std::is_same_v<T, TypeDef>) {
                        declare(x.name, SymbolKind::TypeDef, i, el.span);
                    } else if constexpr (std::is_same_v<T, Predicate>) {
                        declare(x.name, SymbolKind::Predicate, i, el.span);
                    } else if constexpr (std::is_same_v<T, Monitor>) {
                        declare(x.name, SymbolKind::Monitor, i, el.span);
                    } else {
                        declare(x.name, SymbolKind::Pattern, i, el.span);
                    }
                },
                el.node);
        }
    }

    void declare_enum(const TypeExpr& type) {
        const auto* e = std::get_if<EnumType>(&type.node);
        if (!e)
            return;
        // An identical value list declared again denotes the same enumeration.
        if (const Symbol* first = symbols_.find(e->values.front());
            first && first->kind == SymbolKind::EnumValue) {
            std::size_t id = first->type.enum_id;
            if (symbols_.enums[id].values == e->values) {
                enum_ids_[e] = id;
                return;
            }
        }
        std::set<std::string> local;
        for (const auto& v : e->values)
            if (!local.insert(v).second)
                error(type.span, "enumeration value '" + v + "' listed twice");
        std::size_t id = symbols_.enums.size();
        symbols_.enums.push_back(EnumInfo{e->values});
        enum_ids_[e] = id;
        for (std::size_t k = 0; k < e->values.size(); ++k) {
            auto [it, inserted] = symbols_.globals.emplace(
                e->values[k],
                Symbol{SymbolKind::EnumValue, 0, SemType::enumeration(id), type.span, k, {}});
            if (!inserted)
                error(type.span, "enumeration value '" + e->values[k] +
                                     "' clashes with an existing name (declared at " +
                                     where(it->second.span) + ")");
        }
    }

    void declare_enums() {
        for (const Element& el : ast_.elements) {
            std::visit(
                [&](const auto& x) {
                    using T = std::decay_t<decltype(x)>;
                    if constexpr (std::is_same_v<T, VarDecl> || std::is_same_v<T, TypeDef> ||
                                  std::is_same_v<T, Monitor>) {
                        declare_enum(x.type);
                    } else if constexpr (std::is_same_v<T, Predicate>) {
                        for (const auto& p : x.params)
                            declare_enum(p.type);
                    } else if constexpr (std::is_same_v<T, Pattern>) {
                        for (const auto& v : x.vars)
                            declare_enum(v.type);
                    }
                },
                el.node);
        }
    }

    // -------------------------------------------------------------- types

    std::optional<SemType> resolve_type(const TypeExpr& type) {
        return std::visit(
            [&](const auto& x) -> std::optional<SemType> {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, BooleanType>) {
                    return SemType::boolean();
                } else if constexpr (std::is_same_v<T, EnumType>) {
                    auto it = enum_ids_.find(&x);
                    if (it == enum_ids_.end())
                        return std::nullopt;
                    return SemType::enumeration(it->second);
                } else if constexpr (std::is_same_v<T, IntRange>) {
                    if (x.upper <= x.lower) {
                        error(type.span, "upper bound of Int(" + std::to_string(x.lower) + ".." +
                                             std::to_string(x.upper) +
                                             ") must be greater than its lower bound");
                        return std::nullopt;
                    }
                    if (x.lower < -int_limit || x.upper > int_limit) {
                        error(type.span, "integer range exceeds supported bounds");
                        return std::nullopt;
                    }
                    return SemType::integer(x.lower, x.upper);
                } else {
                    return typedef_type(x.name, type.span);
                }
            },
            type.node);
    }

    std::optional<SemType> typedef_type(const std::string& name, const Span& use) {
        auto it = symbols_.globals.find(name);
        if (it == symbols_.globals.end() || it->second.kind != SymbolKind::TypeDef) {
            error(use, "unknown type '" + name + "'");
            return std::nullopt;
        }
        Visit& state = typedef_state_[name];
        if (state == Visit::Done)
            return it->second.type;
        if (state == Visit::Active) {
            error(use, "type '" + name + "' is defined in terms of itself");
            return std::nullopt;
        }
        state = Visit::Active;
        const auto& td = std::get<TypeDef>(ast_.elements[it->second.element].node);
        auto t = resolve_type(td.type);
        state = Visit::Done;
        if (t)
            symbols_.globals[name].type = *t;
        return t;
    }

    void resolve_declared_types() {
        for (const Element& el : ast_.elements) {
            if (const auto* v = std::get_if<VarDecl>(&el.node)) {
                if (auto t = resolve_type(v->type))
                    symbols_.globals[v->name].type = *t;
            } else if (const auto* m = std::get_if<Monitor>(&el.node)) {
                if (auto t = resolve_type(m->type))
                    symbols_.globals[m->name].type = *t;
            } else if (const auto* td = std::get_if<TypeDef>(&el.node)) {
                typedef_type(td->name, el.span);
            }
        }
    }

    void build_local_scopes() {
        for (const Element& el : ast_.elements) {
            if (const auto* p = std::get_if<Predicate>(&el.node)) {
                LocalScope scope;
                for (const auto& param : p->params) {
                    auto t = resolve_type(param.type);
                    if (!scope.names.emplace(param.name, t.value_or(SemType::boolean())).second)
                        error(param.span, "duplicate parameter '" + param.name + "'");
                    scope.params.push_back(param.name);
                }
                symbols_.locals[p->name] = std::move(scope);
            } else if (const auto* p = std::get_if<Pattern>(&el.node)) {
                LocalScope scope;
                // pattern parameters are untyped in the grammar; they stand for
                // boolean expressions
                for (const auto& param : p->params) {
                    if (!scope.names.emplace(param, SemType::boolean()).second)
                        error(el.span, "duplicate parameter '" + param + "' of pattern '" +
                                           p->name + "'");
                    scope.params.push_back(param);
                }
                for (const auto& v : p->vars) {
                    auto t = resolve_type(v.type);
                    if (!scope.names.emplace(v.name, t.value_or(SemType::boolean())).second)
                        error(v.span, "duplicate pattern variable '" + v.name + "'");
                    scope.pattern_vars.push_back(v.name);
                }
                symbols_.locals[p->name] = std::move(scope);
            }
        }
    }

    Typer typer() {
        return Typer(symbols_, diags_, &types_,
                     [this](const std::string& n, const Span& s) { return define_type(n, s); });
    }

    std::optional<SemType> define_type(const std::string& name, const Span& use) {
        Symbol& sym = symbols_.globals.at(name);
        Visit& state = define_state_[name];
        if (state == Visit::Done)
            return failed_defines_.count(name) ? std::nullopt : std::optional<SemType>(sym.type);
        if (state == Visit::Active) {
            failed_defines_.insert(name);
            error(use, "define '" + name + "' is defined in terms of itself");
            return std::nullopt;
        }
        state = Visit::Active;
        auto t = typer().type(*sym.definition, Scope{});
        define_state_[name] = Visit::Done;
        if (t && !failed_defines_.count(name))
            symbols_.globals.at(name).type = *t;
        else
            failed_defines_.insert(name);
        return t;
    }

    void type_defines() {
        for (const Element& el : ast_.elements)
            if (const auto* d = std::get_if<Define>(&el.node)) {
                define_type(d->name, el.span);
                RuleContext ctx;
                walk(*d->expr, ctx, nullptr, false, false, nullptr);
            }
    }

    // --------------------------------------------------------- predicates

    void collect_predicate_refs(const Expr& e, std::set<std::string>& out,
                                std::set<std::string>& seen_defines) const {
        std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, NameRef>) {
                    const Symbol* s = symbols_.find(x.name);
                    if (s && s->kind == SymbolKind::Define && seen_defines.insert(x.name).second)
                        collect_predicate_refs(*s->definition, out, seen_defines);
                } else if constexpr (std::is_same_v<T, Instance>) {
                    out.insert(x.name);
                    for (const auto& a : x.args)
                        collect_predicate_refs(*a, out, seen_defines);
                } else if constexpr (std::is_same_v<T, Unary>) {
                    collect_predicate_refs(*x.operand, out, seen_defines);
                } else if constexpr (std::is_same_v<T, Binary>) {
                    collect_predicate_refs(*x.lhs, out, seen_defines);
                    collect_predicate_refs(*x.rhs, out, seen_defines);
                }
            },
            e.node);
    }

    void check_predicates() {
        std::map<std::string, std::set<std::string>> calls;
        std::map<std::string, Span> spans;
        for (const Element& el : ast_.elements) {
            const auto* p = std::get_if<Predicate>(&el.node);
            if (!p)
                continue;
            spans[p->name] = el.span;
            const LocalScope& scope = symbols_.locals.at(p->name);
            auto t = typer().type(*p->body, Scope{&scope, false, nullptr});
            if (t && !t->is_bool())
                error(p->body->span, "body of predicate '" + p->name + "' must be boolean, found " +
                                         describe(*t, symbols_));
            std::set<std::string> seen;
            collect_predicate_refs(*p->body, calls[p->name], seen);
            RuleContext ctx;
            walk(*p->body, ctx, nullptr, false, false, nullptr);
        }
        // recursion through any chain of predicate instances or defines
        for (const auto& [name, _] : calls) {
            std::set<std::string> visited;
            std::vector<std::string> stack(calls[name].begin(), calls[name].end());
            bool recursive = false;
            while (!stack.empty() && !recursive) {
                std::string cur = stack.back();
                stack.pop_back();
                if (cur == name) {
                    recursive = true;
                    break;
                }
                if (!visited.insert(cur).second)
                    continue;
                if (auto it = calls.find(cur); it != calls.end())
                    stack.insert(stack.end(), it->second.begin(), it->second.end());
            }
            if (recursive)
                error(spans[name], "predicate '" + name + "' instantiates itself (directly or "
                                                          "transitively)");
        }
    }

    // ----------------------------------------------------------- patterns

    void check_patterns() {
        for (const Element& el : ast_.elements) {
            const auto* p = std::get_if<Pattern>(&el.node);
            if (!p)
                continue;
            const LocalScope& scope = symbols_.locals.at(p->name);
            int justice = 0;
            for (const auto& c : p->constraints) {
                if (c.kind == ConstraintKind::AlwEv)
                    ++justice;
                auto t = typer().type(*c.expr, Scope{&scope, true, nullptr});
                if (t && !t->is_bool())
                    error(c.expr->span, "pattern constraint must be boolean, found " +
                                            describe(*t, symbols_));
                RuleContext ctx;
                ctx.role = Role::Guarantee;
                ctx.kind = c.kind;
                ctx.pattern = &scope;
                ctx.pattern_safety = c.kind == ConstraintKind::Trans;
                ctx.next_forbidden = next_message(c.kind);
                walk(*c.expr, ctx, nullptr, false, false, nullptr);
            }
            if (justice != 1)
                error(el.span, "pattern '" + p->name + "' must contain exactly one justice "
                               "constraint (found " + std::to_string(justice) + ")");
        }
    }

    // ----------------------------------------------------------- monitors

    void check_monitors() {
        for (const Element& el : ast_.elements) {
            const auto* m = std::get_if<Monitor>(&el.node);
            if (!m)
                continue;
            for (const auto& c : m->constraints) {
                if (c.kind == ConstraintKind::AlwEv)
                    error(c.span, "monitor '" + m->name + "' cannot contain justice constraints");
                auto t = typer().type(*c.expr, Scope{});
                if (t && !t->is_bool())
                    error(c.expr->span, "monitor constraint must be boolean, found " +
                                            describe(*t, symbols_));
                RuleContext ctx;
                ctx.role = Role::Guarantee;
                ctx.kind = c.kind;
                ctx.next_forbidden = next_message(c.kind);
                walk(*c.expr, ctx, nullptr, false, false, nullptr);
            }
        }
    }

    // -------------------------------------------------------- constraints

    static const char* next_message(ConstraintKind kind) {
        switch (kind) {
        case ConstraintKind::Ini: return "next is not allowed in initial constraints";
        case ConstraintKind::Alw: return "state invariants (alw) cannot contain next";
        case ConstraintKind::AlwEv: return "next is not allowed in justice constraints";
        default: return nullptr;
        }
    }

    void check_constraints() {
        for (const Element& el : ast_.elements) {
            const auto* c = std::get_if<Constraint>(&el.node);
            if (!c)
                continue;
            const Expr& e = *c->body.expr;
            const auto* inst = std::get_if<Instance>(&e.node);
            const Symbol* sym = inst ? symbols_.find(inst->name) : nullptr;
            if (sym && sym->kind == SymbolKind::Pattern) {
                // the temporal keyword, if any, is irrelevant for pattern instances
                typer().type(e, Scope{nullptr, false, &e});
                RuleContext ctx;
                ctx.role = Role::Guarantee;
                ctx.kind = ConstraintKind::Ini;
                ctx.next_forbidden = "pattern arguments cannot contain next";
                for (const auto& a : inst->args)
                    walk(*a, ctx, nullptr, false, false, nullptr);
                continue;
            }
            if (c->body.kind == ConstraintKind::None) {
                error(c->body.span, "missing temporal operator (ini, trans, alw, or alwEv)");
                continue;
            }
            auto t = typer().type(e, Scope{});
            if (t && !t->is_bool()) {
                error(e.span, "constraint must be boolean, found " + describe(*t, symbols_));
                continue;
            }
            RuleContext ctx;
            ctx.role = c->role;
            ctx.kind = c->body.kind;
            ctx.next_forbidden = next_message(c->body.kind);
            walk(e, ctx, nullptr, false, false, nullptr);
        }
    }

    // --------------------------------------------------------- rule walk

    void rule_error(const Span& at, const Span* anchor, const std::string& message,
                    const std::string& via) {
        if (anchor)
            error(*anchor, message + " (via '" + via + "')");
        else
            error(at, message);
    }

    void system_reference(const RuleContext& ctx, const std::string& what, const Span& at,
                          const Span* anchor, bool under_next, const std::string& via) {
        if (ctx.role != Role::Assumption)
            return;
        switch (ctx.kind) {
        case ConstraintKind::Ini:
            rule_error(at, anchor, "initial assumption cannot reference " + what, via);
            break;
        case ConstraintKind::Alw:
            rule_error(at, anchor, "state invariant of an assumption cannot reference " + what,
                       via);
            break;
        case ConstraintKind::Trans:
            if (under_next)
                rule_error(at, anchor,
                           "safety assumption cannot reference " + what + " inside next", via);
            break;
        default: break;
        }
    }

    void walk(const Expr& e, const RuleContext& ctx, const Env* env, bool under_next,
              bool in_past, const Span* anchor, const std::string& via = {}) {
        std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, NameRef>) {
                    if (env) {
                        if (auto it = env->args.find(x.name); it != env->args.end()) {
                            walk(*it->second, ctx, env->outer, under_next, in_past, anchor, via);
                            return;
                        }
                    }
                    if (ctx.pattern) {
                        const auto& pv = ctx.pattern->pattern_vars;
                        bool is_var = std::find(pv.begin(), pv.end(), x.name) != pv.end();
                        if (ctx.pattern_safety && under_next && !is_var &&
                            ctx.pattern->names.count(x.name))
                            error(e.span, "only pattern variables may appear inside next in a "
                                          "pattern safety constraint ('" + x.name + "')");
                        return;
                    }
                    const Symbol* s = symbols_.find(x.name);
                    if (!s)
                        return;
                    if (s->kind == SymbolKind::SysVar)
                        system_reference(ctx, "system variable '" + x.name + "'", e.span, anchor,
                                         under_next, via);
                    else if (s->kind == SymbolKind::Monitor)
                        system_reference(ctx, "monitor '" + x.name + "'", e.span, anchor,
                                         under_next, via);
                    else if (s->kind == SymbolKind::Define &&
                             walking_.insert("define " + x.name).second) {
                        walk(*s->definition, ctx, nullptr, under_next, in_past,
                             anchor ? anchor : &e.span, anchor ? via : x.name);
                        walking_.erase("define " + x.name);
                    }
                } else if constexpr (std::is_same_v<T, Instance>) {
                    const Symbol* s = symbols_.find(x.name);
                    if (!s || s->kind != SymbolKind::Predicate)
                        return;
                    const auto& pred = std::get<Predicate>(ast_.elements[s->element].node);
                    if (pred.params.size() != x.args.size() || !walking_.insert(x.name).second)
                        return;
                    Env inner;
                    inner.outer = env;
                    for (std::size_t i = 0; i < x.args.size(); ++i)
                        inner.args[pred.params[i].name] = x.args[i].get();
                    walk(*pred.body, ctx, &inner, under_next, in_past, anchor ? anchor : &e.span,
                         anchor ? via : x.name);
                    walking_.erase(x.name);
                } else if constexpr (std::is_same_v<T, Unary>) {
                    if (x.op == UnaryOp::Next) {
                        if (under_next)
                            rule_error(e.span, anchor, "next cannot be nested inside next", via);
                        else if (in_past)
                            rule_error(e.span, anchor,
                                       "next cannot appear inside a past-time operator", via);
                        else if (ctx.next_forbidden)
                            rule_error(e.span, anchor, ctx.next_forbidden, via);
                        walk(*x.operand, ctx, env, true, in_past, anchor, via);
                        return;
                    }
                    if (x.op == UnaryOp::Prev || x.op == UnaryOp::Historically ||
                        x.op == UnaryOp::Once) {
                        past_operator(ctx, e, anchor, under_next, via);
                        walk(*x.operand, ctx, env, under_next, true, anchor, via);
                        return;
                    }
                    walk(*x.operand, ctx, env, under_next, in_past, anchor, via);
                } else if constexpr (std::is_same_v<T, Binary>) {
                    bool past = x.op == BinaryOp::Since;
                    if (past)
                        past_operator(ctx, e, anchor, under_next, via);
                    walk(*x.lhs, ctx, env, under_next, in_past || past, anchor, via);
                    walk(*x.rhs, ctx, env, under_next, in_past || past, anchor, via);
                }
            },
            e.node);
    }

    // Past-time operators are replaced by auxiliary system variables.
    void past_operator(const RuleContext& ctx, const Expr& e, const Span* anchor, bool under_next,
                       const std::string& via) {
        if (ctx.pattern)
            return;
        system_reference(ctx, "a past-time operator (it is encoded by a system variable)",
                         e.span, anchor, under_next, via);
    }

    std::set<std::string> walking_;
};

} // namespace

CheckedSpec check(SpecAst ast) { return Checker(std::move(ast)).run(); }

SemType type_of(const Expr& expr, const SymbolTable& symbols, const std::string& scope) {
    std::vector<Diagnostic> diags;
    const LocalScope* locals = nullptr;
    if (!scope.empty()) {
        auto it = symbols.locals.find(scope);
        if (it != symbols.locals.end())
            locals = &it->second;
    }
    Typer typer(symbols, diags, nullptr,
                [&symbols](const std::string& name, const Span&) -> std::optional<SemType> {
                    return symbols.find(name)->type;
                });
    auto t = typer.type(expr, Scope{locals, false, &expr});
    if (!t || has_errors(diags)) {
        if (diags.empty())
            diags.push_back(Diagnostic{expr.span, Severity::Error, "ill-typed expression", {}});
        throw SpecError(std::move(diags));
    }
    return *t;
}

std::optional<std::int64_t> constant_value(const Expr& expr, const SymbolTable& symbols) {
    return std::visit(
        [&](const auto& x) -> std::optional<std::int64_t> {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, IntLit>) {
                return x.value;
            } else if constexpr (std::is_same_v<T, NameRef>) {
                const Symbol* s = symbols.find(x.name);
                if (!s || s->kind != SymbolKind::Define || !s->definition)
                    return std::nullopt;
                return constant_value(*s->definition, symbols);
            } else if constexpr (std::is_same_v<T, Unary>) {
                if (x.op != UnaryOp::Neg)
                    return std::nullopt;
                auto v = constant_value(*x.operand, symbols);
                return v ? std::optional<std::int64_t>(-*v) : std::nullopt;
            } else if constexpr (std::is_same_v<T, Binary>) {
                auto l = constant_value(*x.lhs, symbols);
                auto r = constant_value(*x.rhs, symbols);
                if (!l || !r)
                    return std::nullopt;
                switch (x.op) {
                case BinaryOp::Add: return *l + *r;
                case BinaryOp::Sub: return *l - *r;
                case BinaryOp::Mul: return *l * *r;
                case BinaryOp::Div:
                    return *r == 0 ? std::nullopt : std::optional<std::int64_t>(floor_div(*l, *r));
                case BinaryOp::Mod:
                    return *r == 0 ? std::nullopt : std::optional<std::int64_t>(floor_mod(*l, *r));
                default: return std::nullopt;
                }
            } else {
                return std::nullopt;
            }
        },
        expr.node);
}

} // namespace spectra::sema
