#include "spectra/lowering/passes.hpp"

#include "spectra/lowering/rewrite.hpp"
#include "spectra/syntax/printer.hpp"

#include <map>
#include <set>

namespace spectra::lowering {

using namespace syntax;

// ------------------------------------------------------------- helpers

ExprPtr rewrite(const ExprPtr& e, const RewriteFn& pre) {
    if (auto r = pre(e))
        return *r;
    return std::visit(
        [&](const auto& x) -> ExprPtr {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Instance>) {
                std::vector<ExprPtr> args;
                bool changed = false;
                for (const auto& a : x.args) {
                    args.push_back(rewrite(a, pre));
                    changed = changed || args.back() != a;
                }
                return changed ? make_instance(x.name, std::move(args), e->span) : e;
            } else if constexpr (std::is_same_v<T, Unary>) {
                auto o = rewrite(x.operand, pre);
                return o == x.operand ? e : make_unary(x.op, o, e->span);
            } else if constexpr (std::is_same_v<T, Binary>) {
                auto l = rewrite(x.lhs, pre);
                auto r = rewrite(x.rhs, pre);
                return l == x.lhs && r == x.rhs ? e : make_binary(x.op, l, r, e->span);
            } else {
                return e;
            }
        },
        e->node);
}

ExprPtr substitute(const ExprPtr& e, const std::map<std::string, ExprPtr>& names) {
    return rewrite(e, [&](const ExprPtr& n) -> std::optional<ExprPtr> {
        if (const auto* r = std::get_if<NameRef>(&n->node))
            if (auto it = names.find(r->name); it != names.end())
                return it->second;
        return std::nullopt;
    });
}

void for_each_expr(SpecAst& spec, const std::function<ExprPtr(const ExprPtr&)>& fn) {
    for (auto& el : spec.elements) {
        std::visit(
            [&](auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, Constraint>) {
                    x.body.expr = fn(x.body.expr);
                } else if constexpr (std::is_same_v<T, Define>) {
                    x.expr = fn(x.expr);
                } else if constexpr (std::is_same_v<T, Predicate>) {
                    x.body = fn(x.body);
                } else if constexpr (std::is_same_v<T, Monitor> || std::is_same_v<T, Pattern>) {
                    for (auto& c : x.constraints)
                        c.expr = fn(c.expr);
                }
            },
            el.node);
    }
}

namespace {

void names_in_type(const TypeExpr& t, std::set<std::string>& out) {
    if (const auto* e = std::get_if<EnumType>(&t.node))
        out.insert(e->values.begin(), e->values.end());
    else if (const auto* r = std::get_if<TypeRef>(&t.node))
        out.insert(r->name);
}

void names_in_expr(const Expr& e, std::set<std::string>& out) {
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, NameRef>) {
                out.insert(x.name);
            } else if constexpr (std::is_same_v<T, Instance>) {
                out.insert(x.name);
                for (const auto& a : x.args)
                    names_in_expr(*a, out);
            } else if constexpr (std::is_same_v<T, Unary>) {
                names_in_expr(*x.operand, out);
            } else if constexpr (std::is_same_v<T, Binary>) {
                names_in_expr(*x.lhs, out);
                names_in_expr(*x.rhs, out);
            }
        },
        e.node);
}

} // namespace

NameSupply::NameSupply(const SpecAst& spec) {
    taken_.insert(spec.name);
    for (const auto& el : spec.elements) {
        std::string n = element_name(el);
        if (!n.empty())
            taken_.insert(n);
        std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, VarDecl> || std::is_same_v<T, TypeDef> ||
                              std::is_same_v<T, Monitor>) {
                    names_in_type(x.type, taken_);
                } else if constexpr (std::is_same_v<T, Predicate>) {
                    for (const auto& p : x.params) {
                        taken_.insert(p.name);
                        names_in_type(p.type, taken_);
                    }
                } else if constexpr (std::is_same_v<T, Pattern>) {
                    taken_.insert(x.params.begin(), x.params.end());
                    for (const auto& v : x.vars) {
                        taken_.insert(v.name);
                        names_in_type(v.type, taken_);
                    }
                }
            },
            el.node);
    }
    SpecAst copy = spec;
    for_each_expr(copy, [&](const ExprPtr& e) {
        names_in_expr(*e, taken_);
        return e;
    });
}

std::string NameSupply::fresh(const std::string& hint) {
    for (;;) {
        std::string name = std::string(fresh_prefix) + "_" + hint + "_" + std::to_string(counters_[hint]++);
        if (taken_.insert(name).second)
            return name;
    }
}

std::string NameSupply::prefer(const std::string& name) {
    if (taken_.insert(name).second)
        return name;
    return fresh(name);
}

void NameSupply::take(const std::string& name) { taken_.insert(name); }

bool NameSupply::taken(const std::string& name) const { return taken_.count(name) > 0; }

// --------------------------------------------------------------- passes

SpecAst assign_origins(SpecAst spec) {
    for (std::size_t i = 0; i < spec.elements.size(); ++i)
        spec.elements[i].origin = Origin{i, OriginKind::Source};
    return spec;
}

SpecAst expand_defines_and_typedefs(SpecAst spec) {
    std::map<std::string, ExprPtr> raw;
    std::map<std::string, TypeExpr> aliases;
    for (const auto& el : spec.elements) {
        if (const auto* d = std::get_if<Define>(&el.node))
            raw[d->name] = d->expr;
        else if (const auto* t = std::get_if<TypeDef>(&el.node))
            aliases.emplace(t->name, t->type);
    }

    std::map<std::string, ExprPtr> expanded;
    std::function<ExprPtr(const ExprPtr&, const std::set<std::string>&)> inline_defines =
        [&](const ExprPtr& e, const std::set<std::string>& shadow) {
            return rewrite(e, [&](const ExprPtr& n) -> std::optional<ExprPtr> {
                const auto* r = std::get_if<NameRef>(&n->node);
                if (!r || shadow.count(r->name))
                    return std::nullopt;
                auto it = raw.find(r->name);
                if (it == raw.end())
                    return std::nullopt;
                auto done = expanded.find(r->name);
                if (done == expanded.end())
                    done = expanded.emplace(r->name, inline_defines(it->second, {})).first;
                return done->second;
            });
        };

    std::function<TypeExpr(const TypeExpr&)> resolve = [&](const TypeExpr& t) -> TypeExpr {
        if (const auto* r = std::get_if<TypeRef>(&t.node))
            return resolve(aliases.at(r->name));
        return t;
    };

    std::vector<Element> out;
    for (auto& el : spec.elements) {
        if (std::holds_alternative<Define>(el.node) || std::holds_alternative<TypeDef>(el.node))
            continue;
        std::visit(
            [&](auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, VarDecl>) {
                    x.type = resolve(x.type);
                } else if constexpr (std::is_same_v<T, Constraint>) {
                    x.body.expr = inline_defines(x.body.expr, {});
                } else if constexpr (std::is_same_v<T, Monitor>) {
                    x.type = resolve(x.type);
                    for (auto& c : x.constraints)
                        c.expr = inline_defines(c.expr, {});
                } else if constexpr (std::is_same_v<T, Predicate>) {
                    std::set<std::string> shadow;
                    for (auto& p : x.params) {
                        p.type = resolve(p.type);
                        shadow.insert(p.name);
                    }
                    x.body = inline_defines(x.body, shadow);
                } else if constexpr (std::is_same_v<T, Pattern>) {
                    for (auto& v : x.vars)
                        v.type = resolve(v.type);
                }
            },
            el.node);
        out.push_back(std::move(el));
    }
    spec.elements = std::move(out);
    return spec;
}

SpecAst expand_predicates(SpecAst spec) {
    std::map<std::string, const Predicate*> preds;
    for (const auto& el : spec.elements)
        if (const auto* p = std::get_if<Predicate>(&el.node))
            preds[p->name] = p;

    std::function<ExprPtr(const ExprPtr&)> expand = [&](const ExprPtr& e) {
        return rewrite(e, [&](const ExprPtr& n) -> std::optional<ExprPtr> {
            const auto* inst = std::get_if<Instance>(&n->node);
            if (!inst)
                return std::nullopt;
            auto it = preds.find(inst->name);
            if (it == preds.end())
                return std::nullopt; // a pattern instance; only its arguments expand
            std::map<std::string, ExprPtr> args;
            for (std::size_t i = 0; i < inst->args.size(); ++i)
                args[it->second->params[i].name] = expand(inst->args[i]);
            return expand(substitute(it->second->body, args));
        });
    };

    std::vector<Element> out;
    for (auto& el : spec.elements) {
        if (std::holds_alternative<Predicate>(el.node))
            continue;
        if (auto* c = std::get_if<Constraint>(&el.node))
            c->body.expr = expand(c->body.expr);
        else if (auto* m = std::get_if<Monitor>(&el.node))
            for (auto& k : m->constraints)
                k.expr = expand(k.expr);
        out.push_back(std::move(el));
    }
    spec.elements = std::move(out);
    return spec;
}

SpecAst expand_patterns(SpecAst spec) {
    std::map<std::string, const Pattern*> patterns;
    for (const auto& el : spec.elements)
        if (const auto* p = std::get_if<Pattern>(&el.node))
            patterns[p->name] = p;
    NameSupply names(spec);

    std::vector<Element> out;
    for (auto& el : spec.elements) {
        if (std::holds_alternative<Pattern>(el.node))
            continue;
        const auto* c = std::get_if<Constraint>(&el.node);
        const auto* inst = c ? std::get_if<Instance>(&c->body.expr->node) : nullptr;
        auto pit = inst ? patterns.find(inst->name) : patterns.end();
        if (pit == patterns.end()) {
            out.push_back(std::move(el));
            continue;
        }
        const Pattern& pat = *pit->second;
        Origin origin{el.origin.element, OriginKind::Pattern};
        Origin var_origin{el.origin.element, OriginKind::PatternAux};
        std::map<std::string, ExprPtr> subst;
        for (std::size_t i = 0; i < pat.params.size(); ++i)
            subst[pat.params[i]] = inst->args[i];
        for (const auto& v : pat.vars) {
            std::string fresh = names.fresh(pat.name + "_" + v.name);
            subst[v.name] = make_name(fresh, v.span);
            out.push_back(Element{VarDecl{VarKind::Sys, v.type, fresh}, el.span, var_origin});
        }
        for (const auto& k : pat.constraints) {
            Role role = k.kind == ConstraintKind::AlwEv ? c->role : Role::Guarantee;
            std::optional<std::string> name;
            if (k.kind == ConstraintKind::AlwEv)
                name = c->name;
            out.push_back(Element{
                Constraint{role, name, TempConstraint{k.kind, substitute(k.expr, subst), k.span}},
                el.span, origin});
        }
    }
    spec.elements = std::move(out);
    return spec;
}

SpecAst expand_monitors(SpecAst spec) {
    std::vector<Element> out;
    for (auto& el : spec.elements) {
        auto* m = std::get_if<Monitor>(&el.node);
        if (!m) {
            out.push_back(std::move(el));
            continue;
        }
        Origin origin{el.origin.element, OriginKind::Monitor};
        out.push_back(Element{VarDecl{VarKind::Sys, m->type, m->name}, el.span, origin});
        for (auto& k : m->constraints)
            out.push_back(Element{Constraint{Role::Guarantee, std::nullopt, k}, k.span, origin});
    }
    spec.elements = std::move(out);
    return spec;
}

SpecAst expand_state_invariants(SpecAst spec) {
    NameSupply names(spec);
    std::vector<Element> out;
    for (auto& el : spec.elements) {
        auto* c = std::get_if<Constraint>(&el.node);
        if (!c || c->body.kind != ConstraintKind::Alw) {
            out.push_back(std::move(el));
            continue;
        }
        std::optional<std::string> ini_name, trans_name;
        if (c->name) {
            ini_name = names.prefer(*c->name + "_ini");
            trans_name = names.prefer(*c->name + "_trans");
        }
        const ExprPtr& e = c->body.expr;
        out.push_back(Element{
            Constraint{c->role, ini_name, TempConstraint{ConstraintKind::Ini, e, c->body.span}},
            el.span, el.origin});
        out.push_back(Element{Constraint{c->role, trans_name,
                                         TempConstraint{ConstraintKind::Trans,
                                                        make_unary(UnaryOp::Next, e, e->span),
                                                        c->body.span}},
                              el.span, el.origin});
    }
    spec.elements = std::move(out);
    return spec;
}

SpecAst expand_pastltl(SpecAst spec) {
    NameSupply names(spec);
    std::vector<Element> out;
    // identical past subformulas from one source element share an auxiliary
    std::map<std::size_t, std::map<std::string, ExprPtr>> shared;
    for (auto& el : spec.elements) {
        auto* c = std::get_if<Constraint>(&el.node);
        if (!c) {
            out.push_back(std::move(el));
            continue;
        }
        Origin origin{el.origin.element, OriginKind::PastAux};
        std::vector<Element> generated;
        auto declare = [&](const std::string& hint, const Span& span) {
            std::string aux = names.fresh(hint);
            generated.push_back(Element{VarDecl{VarKind::Sys, TypeExpr{BooleanType{}, span}, aux},
                                        el.span, origin});
            return make_name(aux, span);
        };
        auto guarantee = [&](ConstraintKind kind, const ExprPtr& e) {
            generated.push_back(Element{
                Constraint{Role::Guarantee, std::nullopt, TempConstraint{kind, e, e->span}},
                el.span, origin});
        };
        auto next = [](const ExprPtr& e) { return make_unary(UnaryOp::Next, e, e->span); };

        // Aux for `phi S psi`.
        auto since = [&](const ExprPtr& phi, const ExprPtr& psi, const Span& span) {
            ExprPtr aux = declare("since", span);
            guarantee(ConstraintKind::Ini, make_binary(BinaryOp::Iff, aux, psi, span));
            guarantee(ConstraintKind::Trans,
                      make_binary(BinaryOp::Iff, next(aux),
                                  make_binary(BinaryOp::Or, next(psi),
                                              make_binary(BinaryOp::And, aux, next(phi), span),
                                              span),
                                  span));
            return aux;
        };

        auto& memo = shared[el.origin.element];
        std::function<ExprPtr(const ExprPtr&)> lower;
        auto lower_past = [&](const ExprPtr& n) -> std::optional<ExprPtr> {
            if (const auto* u = std::get_if<Unary>(&n->node)) {
                if (u->op == UnaryOp::Prev) {
                    ExprPtr phi = lower(u->operand);
                    ExprPtr aux = declare("prev", n->span);
                    guarantee(ConstraintKind::Ini, make_unary(UnaryOp::Not, aux, n->span));
                    guarantee(ConstraintKind::Trans,
                              make_binary(BinaryOp::Iff, next(aux), phi, n->span));
                    return aux;
                }
                if (u->op == UnaryOp::Once)
                    return since(make_bool(true, n->span), lower(u->operand), n->span);
                if (u->op == UnaryOp::Historically)
                    return make_unary(UnaryOp::Not,
                                      since(make_bool(true, n->span),
                                            make_unary(UnaryOp::Not, lower(u->operand), n->span),
                                            n->span),
                                      n->span);
            }
            if (const auto* b = std::get_if<Binary>(&n->node); b && b->op == BinaryOp::Since) {
                ExprPtr phi = lower(b->lhs);
                ExprPtr psi = lower(b->rhs);
                return since(phi, psi, n->span);
            }
            return std::nullopt;
        };
        lower = [&](const ExprPtr& e) {
            return rewrite(e, [&](const ExprPtr& n) -> std::optional<ExprPtr> {
                const std::string key = syntax::print(*n);
                if (auto it = memo.find(key); it != memo.end())
                    return it->second;
                auto lowered = lower_past(n);
                if (lowered)
                    memo.emplace(key, *lowered);
                return lowered;
            });
        };
        c->body.expr = lower(c->body.expr);
        for (auto& g : generated)
            out.push_back(std::move(g));
        out.push_back(std::move(el));
    }
    spec.elements = std::move(out);
    return spec;
}

KernelSpec lower(const sema::CheckedSpec& checked) {
    SpecAst s = assign_origins(checked.ast);
    s = expand_defines_and_typedefs(std::move(s));
    s = expand_predicates(std::move(s));
    s = expand_patterns(std::move(s));
    s = expand_monitors(std::move(s));
    s = expand_state_invariants(std::move(s));
    s = expand_pastltl(std::move(s));
    return expand_enums_and_ints(s);
}

} // namespace spectra::lowering
