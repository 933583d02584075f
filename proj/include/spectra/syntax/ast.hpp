#pragma once

#include "spectra/diagnostics.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace spectra::syntax {

enum class UnaryOp { Not, Next, Neg, Prev, Historically, Once };

enum class BinaryOp {
    And,
    Or,
    Implies,
    Iff,
    Eq,
    Neq,
    Lt,
    Gt,
    Le,
    Ge,
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Since,
};

struct Expr;
/// Expression nodes are immutable and freely shared between trees; the
/// lowering passes rely on this to copy subtrees in O(1).
using ExprPtr = std::shared_ptr<const Expr>;

struct BoolConst {
    bool value;
};
struct IntLit {
    std::int64_t value;
};
struct NameRef {
    std::string name;
};
/// `name(args)`: predicate or pattern instance, told apart during checking.
struct Instance {
    std::string name;
    std::vector<ExprPtr> args;
};
struct Unary {
    UnaryOp op;
    ExprPtr operand;
};
struct Binary {
    BinaryOp op;
    ExprPtr lhs;
    ExprPtr rhs;
};

struct Expr {
    std::variant<BoolConst, IntLit, NameRef, Instance, Unary, Binary> node;
    Span span;
};

ExprPtr make_bool(bool value, Span span = {});
ExprPtr make_int(std::int64_t value, Span span = {});
ExprPtr make_name(std::string name, Span span = {});
ExprPtr make_instance(std::string name, std::vector<ExprPtr> args, Span span = {});
ExprPtr make_unary(UnaryOp op, ExprPtr operand, Span span = {});
ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, Span span = {});

// ---------------------------------------------------------------- types

struct BooleanType {};
struct EnumType {
    std::vector<std::string> values;
};
struct IntRange {
    std::int64_t lower;
    std::int64_t upper;
};
struct TypeRef {
    std::string name;
};

struct TypeExpr {
    std::variant<BooleanType, EnumType, IntRange, TypeRef> node;
    Span span;
};

// ------------------------------------------------------------- elements

/// `None` is only legal for a pattern instance written without a temporal
/// keyword (`asm pResponds(a, b);`).
enum class ConstraintKind { None, Ini, Trans, Alw, AlwEv };

struct TempConstraint {
    ConstraintKind kind;
    ExprPtr expr;
    Span span;
};

enum class VarKind { Env, Sys };
enum class Role { Assumption, Guarantee };

/// Where an element came from once lowering starts generating new ones.
/// `element` indexes the elements of the checked source specification.
enum class OriginKind { Source, Pattern, PatternAux, Monitor, PastAux, Validity };

struct Origin {
    static constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
    std::size_t element = none;
    OriginKind kind = OriginKind::Source;
};

struct VarDecl {
    VarKind kind;
    TypeExpr type;
    std::string name;
};

struct Constraint {
    Role role;
    std::optional<std::string> name;
    TempConstraint body;
};

struct Define {
    std::string name;
    ExprPtr expr;
};

struct TypeDef {
    std::string name;
    TypeExpr type;
};

struct TypedParam {
    TypeExpr type;
    std::string name;
    Span span;
};

struct Predicate {
    std::string name;
    std::vector<TypedParam> params;
    ExprPtr body;
};

struct Monitor {
    TypeExpr type;
    std::string name;
    std::vector<TempConstraint> constraints;
};

struct PatternVar {
    TypeExpr type;
    std::string name;
    Span span;
};

struct Pattern {
    std::string name;
    std::vector<std::string> params;
    std::vector<PatternVar> vars;
    std::vector<TempConstraint> constraints;
};

struct Element {
    std::variant<VarDecl, Constraint, Define, TypeDef, Predicate, Monitor, Pattern> node;
    Span span;
    Origin origin;
};

struct Import {
    std::string path;
    Span span;
};

struct SpecAst {
    std::vector<Import> imports;
    std::string name;
    std::vector<Element> elements;
    Span span;
};

/// Structural equality ignoring spans and element origins.
bool equal(const Expr& a, const Expr& b);
bool equal(const TypeExpr& a, const TypeExpr& b);
bool equal(const SpecAst& a, const SpecAst& b);

/// Name of the element (empty for unnamed assumptions/guarantees).
std::string element_name(const Element& e);

} // namespace spectra::syntax
