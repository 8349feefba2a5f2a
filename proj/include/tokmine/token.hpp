#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tokmine {

enum class Language { C, Java };

std::string_view to_string(Language lang);
bool language_from_string(std::string_view s, Language& out);

/// Coarse lexical categories for source tokens. The set is closed: anything
/// the lexer cannot place lands in OtherPunct, never in a new category.
enum class TokenType {
    Name,          // identifiers, keywords, type names
    Literal,       // numeric/char/string/boolean/null literals
    Operator,      // arithmetic, logical, member access, brackets
    ArgumentList,  // ( ) , and the fused empty pair "()"
    ExprStmt,      // ; terminating an expression statement
    DeclStmt,      // ; terminating a declaration statement
    Block,         // { }
    Specifier,     // storage specifiers (static, extern, ...)
    Directive,     // preprocessor directive head (#include, #define, ...)
    Annotation,    // Java @Name
    Value,         // macro-definition right-hand side, kept as one token
    OtherPunct,    // anything else
};

std::string_view to_string(TokenType type);
bool token_type_from_string(std::string_view s, TokenType& out);

struct Token {
    TokenType type = TokenType::OtherPunct;
    std::string text;         // verbatim source bytes
    std::size_t byte_offset = 0;
    int line = 1;             // 1-based line of the first byte

    friend bool operator==(const Token& a, const Token& b) = default;
};

/// Equality used by diffs and detectors: tokens compare on what they are and
/// what they say, not on where they sit in the file.
struct TokenContentEq {
    bool operator()(const Token& a, const Token& b) const {
        return a.type == b.type && a.text == b.text;
    }
};

struct DiscardedSpan {
    enum class Kind { Whitespace, Comment } kind;
    std::size_t byte_offset = 0;
    std::size_t length = 0;
};

struct TokenizedFile {
    std::string path;
    Language language = Language::C;
    std::vector<Token> tokens;
    std::vector<DiscardedSpan> discarded;
    // Set when an unterminated string or comment forced recovery; callers
    // decide whether to keep or skip such a file.
    bool recovered = false;
};

}  // namespace tokmine
