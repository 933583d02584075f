#include "spectra/syntax/printer.hpp"

#include <sstream>
#include <type_traits>

namespace spectra::syntax {

namespace {

int level(BinaryOp op) {
    switch (op) {
    case BinaryOp::Implies: return 1;
    case BinaryOp::Iff: return 2;
    case BinaryOp::Or: return 3;
    case BinaryOp::And: return 4;
    case BinaryOp::Eq:
    case BinaryOp::Neq:
    case BinaryOp::Lt:
    case BinaryOp::Gt:
    case BinaryOp::Le:
    case BinaryOp::Ge:
    case BinaryOp::Since: return 5;
    case BinaryOp::Add:
    case BinaryOp::Sub: return 6;
    case BinaryOp::Mul:
    case BinaryOp::Div:
    case BinaryOp::Mod: return 7;
    }
    return 0;
}

constexpr int unary_level = 8;

int level(const Expr& e) {
    if (const auto* b = std::get_if<Binary>(&e.node))
        return level(b->op);
    if (std::holds_alternative<Unary>(e.node))
        return unary_level;
    return unary_level + 1;
}

void print_expr(std::ostream& out, const Expr& e);

void print_child(std::ostream& out, const Expr& child, bool parens) {
    if (parens)
        out << '(';
    print_expr(out, child);
    if (parens)
        out << ')';
}

void print_expr(std::ostream& out, const Expr& e) {
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, BoolConst>) {
                out << (x.value ? "true" : "false");
            } else if constexpr (std::is_same_v<T, IntLit>) {
                out << x.value;
            } else if constexpr (std::is_same_v<T, NameRef>) {
                out << x.name;
            } else if constexpr (std::is_same_v<T, Instance>) {
                out << x.name << '(';
                for (std::size_t i = 0; i < x.args.size(); ++i) {
                    if (i > 0)
                        out << ", ";
                    print_expr(out, *x.args[i]);
                }
                out << ')';
            } else if constexpr (std::is_same_v<T, Unary>) {
                switch (x.op) {
                case UnaryOp::Next:
                    out << "next";
                    print_child(out, *x.operand, true);
                    return;
                case UnaryOp::Not:
                case UnaryOp::Neg:
                    out << spelling(x.op);
                    print_child(out, *x.operand, level(*x.operand) < unary_level);
                    return;
                default:
                    // keyword operators need a separator before a bare operand
                    out << spelling(x.op);
                    if (level(*x.operand) < unary_level) {
                        print_child(out, *x.operand, true);
                    } else {
                        out << ' ';
                        print_expr(out, *x.operand);
                    }
                    return;
                }
            } else {
                int own = level(x.op);
                print_child(out, *x.lhs, level(*x.lhs) < own);
                out << ' ' << spelling(x.op) << ' ';
                print_child(out, *x.rhs, level(*x.rhs) <= own);
            }
        },
        e.node);
}

const char* kind_keyword(ConstraintKind k) {
    switch (k) {
    case ConstraintKind::Ini: return "ini ";
    case ConstraintKind::Trans: return "trans ";
    case ConstraintKind::Alw: return "alw ";
    case ConstraintKind::AlwEv: return "alwEv ";
    case ConstraintKind::None: return "";
    }
    return "";
}

} // namespace

const char* spelling(BinaryOp op) {
    switch (op) {
    case BinaryOp::And: return "&";
    case BinaryOp::Or: return "|";
    case BinaryOp::Implies: return "->";
    case BinaryOp::Iff: return "<->";
    case BinaryOp::Eq: return "=";
    case BinaryOp::Neq: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Mod: return "mod";
    case BinaryOp::Since: return "S";
    }
    return "?";
}

const char* spelling(UnaryOp op) {
    switch (op) {
    case UnaryOp::Not: return "!";
    case UnaryOp::Next: return "next";
    case UnaryOp::Neg: return "-";
    case UnaryOp::Prev: return "Y";
    case UnaryOp::Historically: return "H";
    case UnaryOp::Once: return "O";
    }
    return "?";
}

std::string print(const Expr& expr) {
    std::ostringstream out;
    print_expr(out, expr);
    return out.str();
}

std::string print(const TypeExpr& type) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, BooleanType>) {
                return "boolean";
            } else if constexpr (std::is_same_v<T, EnumType>) {
                std::string s = "{";
                for (std::size_t i = 0; i < x.values.size(); ++i) {
                    if (i > 0)
                        s += ", ";
                    s += x.values[i];
                }
                return s + "}";
            } else if constexpr (std::is_same_v<T, IntRange>) {
                return "Int(" + std::to_string(x.lower) + ".." + std::to_string(x.upper) + ")";
            } else {
                return x.name;
            }
        },
        type.node);
}

std::string print(const TempConstraint& c) {
    return kind_keyword(c.kind) + print(*c.expr);
}

std::string print(const SpecAst& spec) {
    std::ostringstream out;
    for (const auto& imp : spec.imports)
        out << "import \"" << imp.path << "\";\n";
    if (!spec.imports.empty())
        out << '\n';
    out << "spec " << spec.name << "\n\n";
    for (const auto& el : spec.elements) {
        std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, VarDecl>) {
                    out << (x.kind == VarKind::Env ? "env " : "sys ") << print(x.type) << ' '
                        << x.name << ";\n";
                } else if constexpr (std::is_same_v<T, Constraint>) {
                    out << (x.role == Role::Assumption ? "asm " : "gar ");
                    if (x.name)
                        out << *x.name << ": ";
                    out << print(x.body) << ";\n";
                } else if constexpr (std::is_same_v<T, Define>) {
                    out << "define " << x.name << " := " << print(*x.expr) << ";\n";
                } else if constexpr (std::is_same_v<T, TypeDef>) {
                    out << "type " << x.name << " = " << print(x.type) << ";\n";
                } else if constexpr (std::is_same_v<T, Predicate>) {
                    out << "predicate " << x.name << '(';
                    for (std::size_t i = 0; i < x.params.size(); ++i) {
                        if (i > 0)
                            out << ", ";
                        out << print(x.params[i].type) << ' ' << x.params[i].name;
                    }
                    out << ") {\n  " << print(*x.body) << "\n}\n";
                } else if constexpr (std::is_same_v<T, Monitor>) {
                    out << "monitor " << print(x.type) << ' ' << x.name << " {\n";
                    for (const auto& c : x.constraints)
                        out << "  " << print(c) << ";\n";
                    out << "}\n";
                } else {
                    out << "pattern " << x.name << '(';
                    for (std::size_t i = 0; i < x.params.size(); ++i) {
                        if (i > 0)
                            out << ", ";
                        out << x.params[i];
                    }
                    out << ") {\n";
                    for (const auto& v : x.vars)
                        out << "  var " << print(v.type) << ' ' << v.name << ";\n";
                    for (const auto& c : x.constraints)
                        out << "  " << print(c) << ";\n";
                    out << "}\n";
                }
            },
            el.node);
    }
    return out.str();
}

} // namespace spectra::syntax
