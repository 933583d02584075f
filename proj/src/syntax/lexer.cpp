#include "spectra/syntax/lexer.hpp"

#include <array>
#include <cctype>
#include <unordered_map>
#include <utility>

namespace spectra::syntax {

namespace {

const std::unordered_map<std::string_view, TokenKind>& keyword_table() {
    static const std::unordered_map<std::string_view, TokenKind> table = {
        {"spec", TokenKind::KwSpec},
        {"import", TokenKind::KwImport},
        {"sys", TokenKind::KwSys},
        {"output", TokenKind::KwSys},
        {"env", TokenKind::KwEnv},
        {"input", TokenKind::KwEnv},
        {"boolean", TokenKind::KwBoolean},
        {"Int", TokenKind::KwInt},
        {"asm", TokenKind::KwAsm},
        {"assumption", TokenKind::KwAsm},
        {"gar", TokenKind::KwGar},
        {"guarantee", TokenKind::KwGar},
        {"ini", TokenKind::KwIni},
        {"initially", TokenKind::KwIni},
        {"trans", TokenKind::KwTrans},
        {"alw", TokenKind::KwAlw},
        {"always", TokenKind::KwAlw},
        {"alwEv", TokenKind::KwAlwEv},
        {"alwaysEventually", TokenKind::KwAlwEv},
        {"define", TokenKind::KwDefine},
        {"type", TokenKind::KwType},
        {"predicate", TokenKind::KwPredicate},
        {"monitor", TokenKind::KwMonitor},
        {"pattern", TokenKind::KwPattern},
        {"var", TokenKind::KwVar},
        {"true", TokenKind::KwTrue},
        {"false", TokenKind::KwFalse},
        {"next", TokenKind::KwNext},
        {"mod", TokenKind::KwMod},
        {"Y", TokenKind::KwPrev},
        {"PREV", TokenKind::KwPrev},
        {"H", TokenKind::KwHistorically},
        {"HISTORICALLY", TokenKind::KwHistorically},
        {"O", TokenKind::KwOnce},
        {"ONCE", TokenKind::KwOnce},
        {"S", TokenKind::KwSince},
        {"SINCE", TokenKind::KwSince},
    };
    return table;
}

class Lexer {
public:
    Lexer(std::string_view text, const std::string& file_name)
        : text_(text), file_(std::make_shared<const std::string>(file_name)) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_trivia();
            if (pos_ >= text_.size())
                break;
            out.push_back(next_token());
        }
        return out;
    }

private:
    std::string_view text_;
    std::shared_ptr<const std::string> file_;
    std::size_t pos_ = 0;
    std::uint32_t line_ = 1;
    std::uint32_t column_ = 1;

    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    Span span_from(std::size_t begin, std::uint32_t line, std::uint32_t column) const {
        return Span{file_, static_cast<std::uint32_t>(begin), static_cast<std::uint32_t>(pos_),
                    line, column};
    }

    [[noreturn]] void fail(const std::string& message, std::size_t begin, std::uint32_t line,
                           std::uint32_t column) {
        Diagnostic d;
        d.span = Span{file_, static_cast<std::uint32_t>(begin),
                      static_cast<std::uint32_t>(begin + 1), line, column};
        d.message = message;
        throw SpecError({d});
    }

    void skip_trivia() {
        while (pos_ < text_.size()) {
            char c = peek();
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (pos_ < text_.size() && peek() != '\n')
                    advance();
            } else if (c == '/' && peek(1) == '*') {
                std::size_t begin = pos_;
                auto line = line_, column = column_;
                advance();
                advance();
                while (pos_ < text_.size() && !(peek() == '*' && peek(1) == '/'))
                    advance();
                if (pos_ >= text_.size())
                    fail("unterminated block comment", begin, line, column);
                advance();
                advance();
            } else {
                break;
            }
        }
    }

    Token next_token() {
        std::size_t begin = pos_;
        auto line = line_, column = column_;
        char c = peek();

        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')
                advance();
            std::string word(text_.substr(begin, pos_ - begin));
            auto kw = keyword(word);
            return Token{kw.value_or(TokenKind::Identifier), std::move(word),
                         span_from(begin, line, column)};
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (std::isdigit(static_cast<unsigned char>(peek())))
                advance();
            return Token{TokenKind::Integer, std::string(text_.substr(begin, pos_ - begin)),
                         span_from(begin, line, column)};
        }
        if (c == '"') {
            advance();
            while (pos_ < text_.size() && peek() != '"' && peek() != '\n')
                advance();
            if (peek() != '"')
                fail("unterminated string literal", begin, line, column);
            advance();
            return Token{TokenKind::String, std::string(text_.substr(begin + 1, pos_ - begin - 2)),
                         span_from(begin, line, column)};
        }

        // Longest match first.
        static const std::array<std::pair<std::string_view, TokenKind>, 24> punct = {{
            {"<->", TokenKind::Iff},   {"->", TokenKind::Implies}, {"<=", TokenKind::Le},
            {">=", TokenKind::Ge},     {"!=", TokenKind::Neq},     {":=", TokenKind::Assign},
            {"..", TokenKind::DotDot}, {"(", TokenKind::LParen},   {")", TokenKind::RParen},
            {"{", TokenKind::LBrace},  {"}", TokenKind::RBrace},   {",", TokenKind::Comma},
            {";", TokenKind::Semicolon}, {":", TokenKind::Colon},  {"!", TokenKind::Not},
            {"&", TokenKind::And},     {"|", TokenKind::Or},       {"=", TokenKind::Eq},
            {"<", TokenKind::Lt},      {">", TokenKind::Gt},       {"+", TokenKind::Plus},
            {"-", TokenKind::Minus},   {"*", TokenKind::Star},     {"/", TokenKind::Slash},
        }};
        for (const auto& [spelling, kind] : punct) {
            if (text_.substr(pos_, spelling.size()) == spelling) {
                for (std::size_t i = 0; i < spelling.size(); ++i)
                    advance();
                return Token{kind, std::string(spelling), span_from(begin, line, column)};
            }
        }

        std::string shown = std::isprint(static_cast<unsigned char>(c))
                                ? std::string("'") + c + "'"
                                : "byte 0x" + std::to_string(static_cast<unsigned char>(c));
        fail("unrecognized character " + shown, begin, line, column);
    }
};

} // namespace

std::optional<TokenKind> keyword(std::string_view word) {
    const auto& table = keyword_table();
    if (auto it = table.find(word); it != table.end())
        return it->second;
    return std::nullopt;
}

std::string describe(TokenKind kind) {
    switch (kind) {
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Integer: return "integer";
    case TokenKind::String: return "string";
    case TokenKind::KwSpec: return "'spec'";
    case TokenKind::KwImport: return "'import'";
    case TokenKind::KwSys: return "'sys'";
    case TokenKind::KwEnv: return "'env'";
    case TokenKind::KwBoolean: return "'boolean'";
    case TokenKind::KwInt: return "'Int'";
    case TokenKind::KwAsm: return "'asm'";
    case TokenKind::KwGar: return "'gar'";
    case TokenKind::KwIni: return "'ini'";
    case TokenKind::KwTrans: return "'trans'";
    case TokenKind::KwAlw: return "'alw'";
    case TokenKind::KwAlwEv: return "'alwEv'";
    case TokenKind::KwDefine: return "'define'";
    case TokenKind::KwType: return "'type'";
    case TokenKind::KwPredicate: return "'predicate'";
    case TokenKind::KwMonitor: return "'monitor'";
    case TokenKind::KwPattern: return "'pattern'";
    case TokenKind::KwVar: return "'var'";
    case TokenKind::KwTrue: return "'true'";
    case TokenKind::KwFalse: return "'false'";
    case TokenKind::KwNext: return "'next'";
    case TokenKind::KwMod: return "'mod'";
    case TokenKind::KwPrev: return "'Y'";
    case TokenKind::KwHistorically: return "'H'";
    case TokenKind::KwOnce: return "'O'";
    case TokenKind::KwSince: return "'S'";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::LBrace: return "'{'";
    case TokenKind::RBrace: return "'}'";
    case TokenKind::Comma: return "','";
    case TokenKind::Semicolon: return "';'";
    case TokenKind::Colon: return "':'";
    case TokenKind::Assign: return "':='";
    case TokenKind::DotDot: return "'..'";
    case TokenKind::Not: return "'!'";
    case TokenKind::And: return "'&'";
    case TokenKind::Or: return "'|'";
    case TokenKind::Implies: return "'->'";
    case TokenKind::Iff: return "'<->'";
    case TokenKind::Eq: return "'='";
    case TokenKind::Neq: return "'!='";
    case TokenKind::Lt: return "'<'";
    case TokenKind::Gt: return "'>'";
    case TokenKind::Le: return "'<='";
    case TokenKind::Ge: return "'>='";
    case TokenKind::Plus: return "'+'";
    case TokenKind::Minus: return "'-'";
    case TokenKind::Star: return "'*'";
    case TokenKind::Slash: return "'/'";
    case TokenKind::End: return "end of input";
    }
    return "token";
}

std::vector<Token> tokenize(std::string_view text, const std::string& file_name) {
    return Lexer(text, file_name).run();
}

} // namespace spectra::syntax
