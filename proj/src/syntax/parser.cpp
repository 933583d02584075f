#include "spectra/syntax/parser.hpp"

#include "spectra/syntax/lexer.hpp"

#include <charconv>
#include <initializer_list>

namespace spectra::syntax {

namespace {

// Internal unwinding signal; the diagnostic is already recorded.
struct ParseFailure {};

int binary_level(TokenKind kind) {
    switch (kind) {
    case TokenKind::Implies: return 1;
    case TokenKind::Iff: return 2;
    case TokenKind::Or: return 3;
    case TokenKind::And: return 4;
    case TokenKind::Eq:
    case TokenKind::Neq:
    case TokenKind::Lt:
    case TokenKind::Gt:
    case TokenKind::Le:
    case TokenKind::Ge:
    case TokenKind::KwSince: return 5;
    case TokenKind::Plus:
    case TokenKind::Minus: return 6;
    case TokenKind::Star:
    case TokenKind::Slash:
    case TokenKind::KwMod: return 7;
    default: return 0;
    }
}

BinaryOp binary_op(TokenKind kind) {
    switch (kind) {
    case TokenKind::Implies: return BinaryOp::Implies;
    case TokenKind::Iff: return BinaryOp::Iff;
    case TokenKind::Or: return BinaryOp::Or;
    case TokenKind::And: return BinaryOp::And;
    case TokenKind::Eq: return BinaryOp::Eq;
    case TokenKind::Neq: return BinaryOp::Neq;
    case TokenKind::Lt: return BinaryOp::Lt;
    case TokenKind::Gt: return BinaryOp::Gt;
    case TokenKind::Le: return BinaryOp::Le;
    case TokenKind::Ge: return BinaryOp::Ge;
    case TokenKind::KwSince: return BinaryOp::Since;
    case TokenKind::Plus: return BinaryOp::Add;
    case TokenKind::Minus: return BinaryOp::Sub;
    case TokenKind::Star: return BinaryOp::Mul;
    case TokenKind::Slash: return BinaryOp::Div;
    default: return BinaryOp::Mod;
    }
}

bool starts_element(TokenKind kind) {
    switch (kind) {
    case TokenKind::KwSys:
    case TokenKind::KwEnv:
    case TokenKind::KwAsm:
    case TokenKind::KwGar:
    case TokenKind::KwDefine:
    case TokenKind::KwType:
    case TokenKind::KwPredicate:
    case TokenKind::KwMonitor:
    case TokenKind::KwPattern: return true;
    default: return false;
    }
}

Span join(const Span& a, const Span& b) {
    Span s = a;
    s.end = b.end;
    return s;
}

class Parser {
public:
    Parser(std::vector<Token> tokens, const std::string& file_name) : tokens_(std::move(tokens)) {
        Token end;
        end.kind = TokenKind::End;
        end.span.file = std::make_shared<const std::string>(file_name);
        if (!tokens_.empty()) {
            const auto& last = tokens_.back().span;
            end.span = Span{last.file, last.end, last.end, last.line, last.column + 1};
        } else {
            end.span.line = 1;
            end.span.column = 1;
        }
        tokens_.push_back(std::move(end));
    }

    SpecAst parse_spec() {
        SpecAst spec;
        spec.span = peek().span;
        try {
            while (at(TokenKind::KwImport)) {
                Span start = advance().span;
                const Token& path = expect(TokenKind::String);
                expect(TokenKind::Semicolon);
                spec.imports.push_back(Import{path.text, join(start, path.span)});
            }
            expect(TokenKind::KwSpec);
            // single-letter past operators are also fine as a spec name
            if (at(TokenKind::KwPrev) || at(TokenKind::KwHistorically) || at(TokenKind::KwOnce) ||
                at(TokenKind::KwSince))
                spec.name = advance().text;
            else
                spec.name = expect(TokenKind::Identifier).text;
        } catch (const ParseFailure&) {
            synchronize();
        }
        while (!at(TokenKind::End)) {
            try {
                spec.elements.push_back(parse_element());
            } catch (const ParseFailure&) {
                synchronize();
            }
        }
        if (spec.elements.empty() && diagnostics_.empty())
            error(peek().span, "a specification needs at least one element",
                  {"variable declaration", "assumption", "guarantee"});
        if (!diagnostics_.empty())
            throw SpecError(std::move(diagnostics_));
        spec.span.end = peek().span.end;
        return spec;
    }

    ExprPtr parse_lone_expression() {
        ExprPtr e;
        try {
            e = parse_expr();
            expect(TokenKind::End);
        } catch (const ParseFailure&) {
        }
        if (!diagnostics_.empty())
            throw SpecError(std::move(diagnostics_));
        return e;
    }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::vector<Diagnostic> diagnostics_;

    const Token& peek(std::size_t ahead = 0) const {
        return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
    }
    bool at(TokenKind kind) const { return peek().kind == kind; }
    const Token& advance() {
        const Token& t = tokens_[pos_];
        if (pos_ + 1 < tokens_.size())
            ++pos_;
        return t;
    }
    bool accept(TokenKind kind) {
        if (!at(kind))
            return false;
        advance();
        return true;
    }

    void error(const Span& span, std::string message, std::vector<std::string> expected = {}) {
        Diagnostic d;
        d.span = span;
        d.message = std::move(message);
        d.expected = std::move(expected);
        diagnostics_.push_back(std::move(d));
    }

    [[noreturn]] void fail_expected(std::initializer_list<TokenKind> kinds) {
        std::vector<std::string> expected;
        for (auto k : kinds)
            expected.push_back(describe(k));
        fail_expected(std::move(expected));
    }

    [[noreturn]] void fail_expected(std::vector<std::string> expected) {
        const Token& t = peek();
        std::string found = t.kind == TokenKind::End ? "end of input" : "'" + t.text + "'";
        error(t.span, "unexpected " + found, std::move(expected));
        throw ParseFailure{};
    }

    const Token& expect(TokenKind kind) {
        if (!at(kind))
            fail_expected({kind});
        return advance();
    }

    void synchronize() {
        advance();
        while (!at(TokenKind::End) && !starts_element(peek().kind))
            advance();
    }

    std::int64_t parse_int_literal(const Token& t) {
        std::int64_t value = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
        if (ec != std::errc()) {
            error(t.span, "integer literal out of range");
            throw ParseFailure{};
        }
        return value;
    }

    // ------------------------------------------------------------ elements

    Element parse_element() {
        Span start = peek().span;
        switch (peek().kind) {
        case TokenKind::KwSys:
        case TokenKind::KwEnv: {
            VarKind kind = advance().kind == TokenKind::KwSys ? VarKind::Sys : VarKind::Env;
            TypeExpr type = parse_type();
            std::string name = expect(TokenKind::Identifier).text;
            Span end = expect(TokenKind::Semicolon).span;
            return Element{VarDecl{kind, std::move(type), std::move(name)}, join(start, end)};
        }
        case TokenKind::KwAsm:
        case TokenKind::KwGar: {
            Role role = advance().kind == TokenKind::KwAsm ? Role::Assumption : Role::Guarantee;
            std::optional<std::string> name;
            if (at(TokenKind::Identifier) && peek(1).kind == TokenKind::Colon) {
                name = advance().text;
                advance();
            }
            TempConstraint body = parse_temp_constraint(true);
            Span end = expect(TokenKind::Semicolon).span;
            return Element{Constraint{role, std::move(name), std::move(body)}, join(start, end)};
        }
        case TokenKind::KwDefine: {
            advance();
            std::string name = expect(TokenKind::Identifier).text;
            expect(TokenKind::Assign);
            ExprPtr e = parse_expr();
            Span end = expect(TokenKind::Semicolon).span;
            return Element{Define{std::move(name), std::move(e)}, join(start, end)};
        }
        case TokenKind::KwType: {
            advance();
            std::string name = expect(TokenKind::Identifier).text;
            expect(TokenKind::Eq);
            TypeExpr type = parse_type();
            Span end = expect(TokenKind::Semicolon).span;
            return Element{TypeDef{std::move(name), std::move(type)}, join(start, end)};
        }
        case TokenKind::KwPredicate: {
            advance();
            Predicate pred;
            pred.name = expect(TokenKind::Identifier).text;
            expect(TokenKind::LParen);
            do {
                Span ps = peek().span;
                TypeExpr type = parse_type();
                const Token& pname = expect(TokenKind::Identifier);
                pred.params.push_back(TypedParam{std::move(type), pname.text, join(ps, pname.span)});
            } while (accept(TokenKind::Comma));
            expect(TokenKind::RParen);
            expect(TokenKind::LBrace);
            pred.body = parse_expr();
            Span end = expect(TokenKind::RBrace).span;
            return Element{std::move(pred), join(start, end)};
        }
        case TokenKind::KwMonitor: {
            advance();
            Monitor mon;
            mon.type = parse_type();
            mon.name = expect(TokenKind::Identifier).text;
            expect(TokenKind::LBrace);
            do {
                mon.constraints.push_back(parse_temp_constraint(false));
                expect(TokenKind::Semicolon);
            } while (!at(TokenKind::RBrace) && !at(TokenKind::End));
            Span end = expect(TokenKind::RBrace).span;
            return Element{std::move(mon), join(start, end)};
        }
        case TokenKind::KwPattern: {
            advance();
            Pattern pat;
            pat.name = expect(TokenKind::Identifier).text;
            expect(TokenKind::LParen);
            do {
                pat.params.push_back(expect(TokenKind::Identifier).text);
            } while (accept(TokenKind::Comma));
            expect(TokenKind::RParen);
            expect(TokenKind::LBrace);
            while (at(TokenKind::KwVar)) {
                Span vs = advance().span;
                TypeExpr type = parse_type();
                std::string vname = expect(TokenKind::Identifier).text;
                Span ve = expect(TokenKind::Semicolon).span;
                pat.vars.push_back(PatternVar{std::move(type), std::move(vname), join(vs, ve)});
            }
            do {
                pat.constraints.push_back(parse_temp_constraint(false));
                expect(TokenKind::Semicolon);
            } while (!at(TokenKind::RBrace) && !at(TokenKind::End));
            Span end = expect(TokenKind::RBrace).span;
            return Element{std::move(pat), join(start, end)};
        }
        default:
            fail_expected({"'sys'", "'env'", "'asm'", "'gar'", "'define'", "'type'",
                           "'predicate'", "'monitor'", "'pattern'"});
        }
    }

    TempConstraint parse_temp_constraint(bool keyword_optional) {
        Span start = peek().span;
        ConstraintKind kind = ConstraintKind::None;
        switch (peek().kind) {
        case TokenKind::KwIni: kind = ConstraintKind::Ini; break;
        case TokenKind::KwTrans: kind = ConstraintKind::Trans; break;
        case TokenKind::KwAlw: kind = ConstraintKind::Alw; break;
        case TokenKind::KwAlwEv: kind = ConstraintKind::AlwEv; break;
        default:
            if (!keyword_optional)
                fail_expected({TokenKind::KwIni, TokenKind::KwTrans, TokenKind::KwAlw,
                               TokenKind::KwAlwEv});
        }
        if (kind != ConstraintKind::None)
            advance();
        ExprPtr e = parse_expr();
        return TempConstraint{kind, e, join(start, e->span)};
    }

    TypeExpr parse_type() {
        Span start = peek().span;
        switch (peek().kind) {
        case TokenKind::KwBoolean:
            return TypeExpr{BooleanType{}, advance().span};
        case TokenKind::Identifier: {
            const Token& t = advance();
            return TypeExpr{TypeRef{t.text}, t.span};
        }
        case TokenKind::LBrace: {
            advance();
            EnumType e;
            do {
                e.values.push_back(expect(TokenKind::Identifier).text);
            } while (accept(TokenKind::Comma));
            Span end = expect(TokenKind::RBrace).span;
            return TypeExpr{std::move(e), join(start, end)};
        }
        case TokenKind::KwInt: {
            advance();
            expect(TokenKind::LParen);
            std::int64_t lower = parse_signed_bound();
            expect(TokenKind::DotDot);
            std::int64_t upper = parse_signed_bound();
            Span end = expect(TokenKind::RParen).span;
            return TypeExpr{IntRange{lower, upper}, join(start, end)};
        }
        default:
            fail_expected({TokenKind::KwBoolean, TokenKind::KwInt, TokenKind::LBrace,
                           TokenKind::Identifier});
        }
    }

    std::int64_t parse_signed_bound() {
        bool negative = accept(TokenKind::Minus);
        std::int64_t v = parse_int_literal(expect(TokenKind::Integer));
        return negative ? -v : v;
    }

    // --------------------------------------------------------- expressions

    ExprPtr parse_expr() { return parse_binary(1); }

    ExprPtr parse_binary(int min_level) {
        ExprPtr lhs = parse_unary();
        for (;;) {
            int level = binary_level(peek().kind);
            if (level == 0 || level < min_level)
                return lhs;
            BinaryOp op = binary_op(advance().kind);
            ExprPtr rhs = parse_binary(level + 1);
            Span span = join(lhs->span, rhs->span);
            lhs = make_binary(op, std::move(lhs), std::move(rhs), span);
        }
    }

    ExprPtr parse_unary() {
        Span start = peek().span;
        std::optional<UnaryOp> op;
        switch (peek().kind) {
        case TokenKind::Not: op = UnaryOp::Not; break;
        case TokenKind::Minus: op = UnaryOp::Neg; break;
        case TokenKind::KwPrev: op = UnaryOp::Prev; break;
        case TokenKind::KwHistorically: op = UnaryOp::Historically; break;
        case TokenKind::KwOnce: op = UnaryOp::Once; break;
        case TokenKind::KwNext: {
            advance();
            // next only takes a primary (usually parenthesized) operand
            ExprPtr operand = parse_primary();
            Span span = join(start, operand->span);
            return make_unary(UnaryOp::Next, std::move(operand), span);
        }
        default: return parse_primary();
        }
        advance();
        ExprPtr operand = parse_unary();
        Span span = join(start, operand->span);
        return make_unary(*op, std::move(operand), span);
    }

    ExprPtr parse_primary() {
        const Token& t = peek();
        switch (t.kind) {
        case TokenKind::KwTrue: advance(); return make_bool(true, t.span);
        case TokenKind::KwFalse: advance(); return make_bool(false, t.span);
        case TokenKind::Integer: {
            std::int64_t v = parse_int_literal(t);
            advance();
            return make_int(v, t.span);
        }
        case TokenKind::Identifier: {
            const Token& name = advance();
            if (!accept(TokenKind::LParen))
                return make_name(name.text, name.span);
            std::vector<ExprPtr> args;
            do {
                args.push_back(parse_expr());
            } while (accept(TokenKind::Comma));
            Span end = expect(TokenKind::RParen).span;
            return make_instance(name.text, std::move(args), join(name.span, end));
        }
        case TokenKind::LParen: {
            advance();
            ExprPtr inner = parse_expr();
            expect(TokenKind::RParen);
            return inner;
        }
        default:
            fail_expected({"expression"});
        }
    }
};

} // namespace

SpecAst parse(std::string_view text, const std::string& file_name) {
    return Parser(tokenize(text, file_name), file_name).parse_spec();
}

ExprPtr parse_expression(std::string_view text, const std::string& file_name) {
    return Parser(tokenize(text, file_name), file_name).parse_lone_expression();
}

} // namespace spectra::syntax
