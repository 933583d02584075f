#pragma once

#include "spectra/diagnostics.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace spectra::syntax {

enum class TokenKind {
    Identifier,
    Integer,
    String,

    // keywords; verbose alternatives map onto the same kind
    KwSpec,
    KwImport,
    KwSys,
    KwEnv,
    KwBoolean,
    KwInt,
    KwAsm,
    KwGar,
    KwIni,
    KwTrans,
    KwAlw,
    KwAlwEv,
    KwDefine,
    KwType,
    KwPredicate,
    KwMonitor,
    KwPattern,
    KwVar,
    KwTrue,
    KwFalse,
    KwNext,
    KwMod,
    KwPrev,
    KwHistorically,
    KwOnce,
    KwSince,

    // punctuation
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semicolon,
    Colon,
    Assign,  // :=
    DotDot,  // ..
    Not,     // !
    And,     // &
    Or,      // |
    Implies, // ->
    Iff,     // <->
    Eq,      // =
    Neq,     // !=
    Lt,
    Gt,
    Le,
    Ge,
    Plus,
    Minus,
    Star,
    Slash,

    End,
};

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;
    Span span;
};

/// Human-readable spelling used in diagnostics ("'&'", "identifier", ...).
std::string describe(TokenKind kind);

/// Keyword lookup covering both the short keywords and their verbose
/// alternatives ("asm" and "assumption" give the same kind).
std::optional<TokenKind> keyword(std::string_view word);

} // namespace spectra::syntax
