#include "spectra/syntax/ast.hpp"

#include <type_traits>

namespace spectra::syntax {

ExprPtr make_bool(bool value, Span span) {
    return std::make_shared<const Expr>(Expr{BoolConst{value}, std::move(span)});
}
ExprPtr make_int(std::int64_t value, Span span) {
    return std::make_shared<const Expr>(Expr{IntLit{value}, std::move(span)});
}
ExprPtr make_name(std::string name, Span span) {
    return std::make_shared<const Expr>(Expr{NameRef{std::move(name)}, std::move(span)});
}
ExprPtr make_instance(std::string name, std::vector<ExprPtr> args, Span span) {
    return std::make_shared<const Expr>(
        Expr{Instance{std::move(name), std::move(args)}, std::move(span)});
}
ExprPtr make_unary(UnaryOp op, ExprPtr operand, Span span) {
    return std::make_shared<const Expr>(Expr{Unary{op, std::move(operand)}, std::move(span)});
}
ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, Span span) {
    return std::make_shared<const Expr>(
        Expr{Binary{op, std::move(lhs), std::move(rhs)}, std::move(span)});
}

bool equal(const Expr& a, const Expr& b) {
    if (&a == &b)
        return true;
    if (a.node.index() != b.node.index())
        return false;
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, BoolConst>) {
                return x.value == y.value;
            } else if constexpr (std::is_same_v<T, IntLit>) {
                return x.value == y.value;
            } else if constexpr (std::is_same_v<T, NameRef>) {
                return x.name == y.name;
            } else if constexpr (std::is_same_v<T, Instance>) {
                if (x.name != y.name || x.args.size() != y.args.size())
                    return false;
                for (std::size_t i = 0; i < x.args.size(); ++i)
                    if (!equal(*x.args[i], *y.args[i]))
                        return false;
                return true;
            } else if constexpr (std::is_same_v<T, Unary>) {
                return x.op == y.op && equal(*x.operand, *y.operand);
            } else {
                return x.op == y.op && equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
            }
        },
        a.node);
}

bool equal(const TypeExpr& a, const TypeExpr& b) {
    if (a.node.index() != b.node.index())
        return false;
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, BooleanType>) {
                return true;
            } else if constexpr (std::is_same_v<T, EnumType>) {
                return x.values == y.values;
            } else if constexpr (std::is_same_v<T, IntRange>) {
                return x.lower == y.lower && x.upper == y.upper;
            } else {
                return x.name == y.name;
            }
        },
        a.node);
}

namespace {

bool equal(const TempConstraint& a, const TempConstraint& b) {
    return a.kind == b.kind && equal(*a.expr, *b.expr);
}

bool equal(const std::vector<TempConstraint>& a, const std::vector<TempConstraint>& b) {
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!equal(a[i], b[i]))
            return false;
    return true;
}

bool equal(const Element& a, const Element& b) {
    if (a.node.index() != b.node.index())
        return false;
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, VarDecl>) {
                return x.kind == y.kind && x.name == y.name && equal(x.type, y.type);
            } else if constexpr (std::is_same_v<T, Constraint>) {
                return x.role == y.role && x.name == y.name && equal(x.body, y.body);
            } else if constexpr (std::is_same_v<T, Define>) {
                return x.name == y.name && equal(*x.expr, *y.expr);
            } else if constexpr (std::is_same_v<T, TypeDef>) {
                return x.name == y.name && equal(x.type, y.type);
            } else if constexpr (std::is_same_v<T, Predicate>) {
                if (x.name != y.name || x.params.size() != y.params.size())
                    return false;
                for (std::size_t i = 0; i < x.params.size(); ++i)
                    if (x.params[i].name != y.params[i].name ||
                        !equal(x.params[i].type, y.params[i].type))
                        return false;
                return equal(*x.body, *y.body);
            } else if constexpr (std::is_same_v<T, Monitor>) {
                return x.name == y.name && equal(x.type, y.type) &&
                       equal(x.constraints, y.constraints);
            } else {
                if (x.name != y.name || x.params != y.params || x.vars.size() != y.vars.size())
                    return false;
                for (std::size_t i = 0; i < x.vars.size(); ++i)
                    if (x.vars[i].name != y.vars[i].name || !equal(x.vars[i].type, y.vars[i].type))
                        return false;
                return equal(x.constraints, y.constraints);
            }
        },
        a.node);
}

} // namespace

bool equal(const SpecAst& a, const SpecAst& b) {
    if (a.name != b.name || a.imports.size() != b.imports.size() ||
        a.elements.size() != b.elements.size())
        return false;
    for (std::size_t i = 0; i < a.imports.size(); ++i)
        if (a.imports[i].path != b.imports[i].path)
            return false;
    for (std::size_t i = 0; i < a.elements.size(); ++i)
        if (!equal(a.elements[i], b.elements[i]))
            return false;
    return true;
}

std::string element_name(const Element& e) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Constraint>)
                return x.name.value_or("");
            else
                return x.name;
        },
        e.node);
}

} // namespace spectra::syntax
