#include "tokmine/lexer.hpp"

#include <array>
#include <cctype>
#include <unordered_set>

namespace tokmine {

std::string_view to_string(Language lang) {
    return lang == Language::C ? "c" : "java";
}

bool language_from_string(std::string_view s, Language& out) {
    if (s == "c") { out = Language::C; return true; }
    if (s == "java") { out = Language::Java; return true; }
    return false;
}

std::string_view to_string(TokenType type) {
    switch (type) {
        case TokenType::Name: return "name";
        case TokenType::Literal: return "literal";
        case TokenType::Operator: return "operator";
        case TokenType::ArgumentList: return "argument_list";
        case TokenType::ExprStmt: return "expr_stmt";
        case TokenType::DeclStmt: return "decl_stmt";
        case TokenType::Block: return "block";
        case TokenType::Specifier: return "specifier";
        case TokenType::Directive: return "directive";
        case TokenType::Annotation: return "annotation";
        case TokenType::Value: return "value";
        case TokenType::OtherPunct: return "other_punct";
    }
    return "other_punct";
}

bool token_type_from_string(std::string_view s, TokenType& out) {
    static const std::array<TokenType, 12> all = {
        TokenType::Name, TokenType::Literal, TokenType::Operator,
        TokenType::ArgumentList, TokenType::ExprStmt, TokenType::DeclStmt,
        TokenType::Block, TokenType::Specifier, TokenType::Directive,
        TokenType::Annotation, TokenType::Value, TokenType::OtherPunct};
    for (TokenType t : all) {
        if (to_string(t) == s) { out = t; return true; }
    }
    if (s == "decl_stml") {  // legacy spelling seen in the wild
        out = TokenType::DeclStmt;
        return true;
    }
    return false;
}

std::string sanitize_utf8(std::string_view bytes) {
    static constexpr std::string_view kReplacement = "\xEF\xBF\xBD";
    std::string out;
    out.reserve(bytes.size());
    std::size_t i = 0;
    const auto cont = [&](std::size_t k) {
        return i + k < bytes.size() &&
               (static_cast<unsigned char>(bytes[i + k]) & 0xC0) == 0x80;
    };
    while (i < bytes.size()) {
        const unsigned char c = static_cast<unsigned char>(bytes[i]);
        std::size_t len = 0;
        if (c < 0x80) len = 1;
        else if ((c & 0xE0) == 0xC0 && c >= 0xC2 && cont(1)) len = 2;
        else if ((c & 0xF0) == 0xE0 && cont(1) && cont(2)) {
            // reject overlong encodings and surrogates
            const unsigned char c1 = static_cast<unsigned char>(bytes[i + 1]);
            if (!(c == 0xE0 && c1 < 0xA0) && !(c == 0xED && c1 >= 0xA0)) len = 3;
        } else if ((c & 0xF8) == 0xF0 && c <= 0xF4 && cont(1) && cont(2) && cont(3)) {
            const unsigned char c1 = static_cast<unsigned char>(bytes[i + 1]);
            if (!(c == 0xF0 && c1 < 0x90) && !(c == 0xF4 && c1 >= 0x90)) len = 4;
        }
        if (len == 0) {
            out += kReplacement;
            ++i;
        } else {
            out.append(bytes.substr(i, len));
            i += len;
        }
    }
    return out;
}

namespace {

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$' ||
           static_cast<unsigned char>(c) >= 0x80;
}

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$' ||
           static_cast<unsigned char>(c) >= 0x80;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_space_char(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}

const std::unordered_set<std::string_view>& specifier_keywords() {
    static const std::unordered_set<std::string_view> kSet = {
        "static", "extern", "register", "auto", "inline", "const", "volatile"};
    return kSet;
}

const std::unordered_set<std::string_view>& literal_keywords() {
    static const std::unordered_set<std::string_view> kSet = {
        "true", "false", "null", "nullptr"};
    return kSet;
}

// Builtin type heads used by the decl_stmt heuristic: a statement whose first
// token is one of these (or a specifier) ends in a declaration semicolon.
const std::unordered_set<std::string_view>& type_keywords() {
    static const std::unordered_set<std::string_view> kSet = {
        "void", "int", "char", "short", "long", "float", "double", "signed",
        "unsigned", "bool", "_Bool", "struct", "union", "enum", "typedef",
        "size_t", "ssize_t", "boolean", "byte",
        "int8_t", "int16_t", "int32_t", "int64_t",
        "uint8_t", "uint16_t", "uint32_t", "uint64_t",
        "u8", "u16", "u32", "u64", "s8", "s16", "s32", "s64"};
    return kSet;
}

// Multi-char operators, longest first within each leading character.
constexpr std::string_view kOperators[] = {
    ">>>=", ">>>", "<<=", ">>=", "->", "++", "--", "<<", ">>", "<=", ">=",
    "==",  "!=",  "&&",  "||",  "+=", "-=", "*=", "/=", "%=", "&=", "|=",
    "^=",  "::",  "+",   "-",   "*",  "/",  "%",  "=",  "<",  ">",  "!",
    "&",   "|",   "^",   "~",   "?",  ":",  ".",  "[",  "]"};

class Scanner {
public:
    Scanner(std::string_view src, Language lang) : src_(src), lang_(lang) {}

    TokenizedFile run() {
        while (pos_ < src_.size()) {
            step();
        }
        return std::move(out_);
    }

private:
    std::string_view src_;
    Language lang_;
    TokenizedFile out_;
    std::size_t pos_ = 0;
    int line_ = 1;
    bool at_line_start_ = true;
    // statement tracking for the ';' label heuristic
    bool stmt_open_ = false;
    bool stmt_is_decl_ = false;

    char cur() const { return src_[pos_]; }
    char peek(std::size_t k = 1) const {
        return pos_ + k < src_.size() ? src_[pos_ + k] : '\0';
    }
    bool starts_with(std::string_view s) const {
        return src_.substr(pos_, s.size()) == s;
    }

    void advance(std::size_t n) {
        for (std::size_t k = 0; k < n && pos_ < src_.size(); ++k) {
            if (src_[pos_] == '\n') {
                ++line_;
                at_line_start_ = true;
            }
            ++pos_;
        }
    }

    void discard(std::size_t start, DiscardedSpan::Kind kind) {
        if (pos_ > start) {
            out_.discarded.push_back({kind, start, pos_ - start});
        }
    }

    void emit(TokenType type, std::size_t start, int start_line) {
        out_.tokens.push_back(Token{type, std::string(src_.substr(start, pos_ - start)),
                                    start, start_line});
        at_line_start_ = false;
        if (!stmt_open_) {
            stmt_open_ = true;
            stmt_is_decl_ = type == TokenType::Specifier ||
                            (type == TokenType::Name && type_keywords().count(out_.tokens.back().text) > 0);
        }
    }

    void end_statement() {
        stmt_open_ = false;
        stmt_is_decl_ = false;
    }

    bool at_backslash_newline() const {
        if (cur() != '\\') return false;
        if (peek() == '\n') return true;
        return peek() == '\r' && peek(2) == '\n';
    }

    void step() {
        const char c = cur();
        if (is_space_char(c) || at_backslash_newline()) {
            lex_whitespace();
            return;
        }
        if (starts_with("//")) {
            lex_line_comment();
            return;
        }
        if (starts_with("/*")) {
            lex_block_comment();
            return;
        }
        if (c == '"' || c == '\'') {
            lex_quoted(c);
            return;
        }
        if (lang_ == Language::C && c == '#' && at_line_start_) {
            lex_directive();
            return;
        }
        if (is_digit(c) || (c == '.' && is_digit(peek()))) {
            lex_number();
            return;
        }
        if (lang_ == Language::Java && c == '@' && is_ident_start(peek())) {
            lex_annotation();
            return;
        }
        if (is_ident_start(c)) {
            lex_identifier();
            return;
        }
        lex_punct();
    }

    void lex_whitespace() {
        const std::size_t start = pos_;
        while (pos_ < src_.size()) {
            if (is_space_char(cur())) {
                advance(1);
            } else if (at_backslash_newline()) {
                advance(peek() == '\n' ? 2 : 3);
                at_line_start_ = false;  // continuation, not a fresh line
            } else {
                break;
            }
        }
        discard(start, DiscardedSpan::Kind::Whitespace);
    }

    void lex_line_comment() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && cur() != '\n') advance(1);
        discard(start, DiscardedSpan::Kind::Comment);
    }

    void lex_block_comment() {
        const std::size_t start = pos_;
        advance(2);
        while (pos_ < src_.size() && !starts_with("*/")) advance(1);
        if (pos_ < src_.size()) {
            advance(2);
        } else {
            out_.recovered = true;  // unterminated: rest of file is comment
        }
        discard(start, DiscardedSpan::Kind::Comment);
    }

    void lex_quoted(char quote) {
        const std::size_t start = pos_;
        const int start_line = line_;
        advance(1);
        bool closed = false;
        while (pos_ < src_.size()) {
            if (cur() == '\\' && pos_ + 1 < src_.size()) {
                advance(2);
                continue;
            }
            if (cur() == quote) {
                advance(1);
                closed = true;
                break;
            }
            advance(1);
        }
        if (!closed) out_.recovered = true;
        emit(TokenType::Literal, start, start_line);
    }

    void lex_number() {
        const std::size_t start = pos_;
        const int start_line = line_;
        char prev = '\0';
        while (pos_ < src_.size()) {
            const char c = cur();
            const bool exp_sign = (c == '+' || c == '-') &&
                                  (prev == 'e' || prev == 'E' || prev == 'p' || prev == 'P');
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || exp_sign) {
                prev = c;
                advance(1);
            } else {
                break;
            }
        }
        emit(TokenType::Literal, start, start_line);
    }

    void lex_annotation() {
        const std::size_t start = pos_;
        const int start_line = line_;
        advance(1);
        while (pos_ < src_.size() && is_ident_char(cur())) advance(1);
        emit(TokenType::Annotation, start, start_line);
    }

    void lex_identifier() {
        const std::size_t start = pos_;
        const int start_line = line_;
        while (pos_ < src_.size() && is_ident_char(cur())) advance(1);
        const std::string_view text = src_.substr(start, pos_ - start);
        TokenType type = TokenType::Name;
        if (specifier_keywords().count(text) > 0) type = TokenType::Specifier;
        else if (literal_keywords().count(text) > 0) type = TokenType::Literal;
        emit(type, start, start_line);
    }

    // '#' at line start: one Directive token for '#name' (or bare '#'), then
    // normal lexing. #define is the exception: its right-hand side collapses
    // into Value tokens because it is not parsed further.
    void lex_directive() {
        const std::size_t start = pos_;
        const int start_line = line_;
        advance(1);
        while (pos_ < src_.size() && is_ident_char(cur())) advance(1);
        const std::string_view text = src_.substr(start, pos_ - start);
        emit(TokenType::Directive, start, start_line);
        end_statement();
        if (text == "#define") lex_define_tail();
    }

    void lex_define_tail() {
        skip_horizontal_space();
        if (pos_ >= src_.size() || !is_ident_start(cur())) return;
        lex_identifier();  // macro name
        if (pos_ < src_.size() && cur() == '(') {
            // function-like macro: parameter list lexes normally
            int depth = 0;
            while (pos_ < src_.size() && cur() != '\n') {
                if (cur() == ' ' || cur() == '\t' || cur() == '\r' || at_backslash_newline()) {
                    skip_horizontal_space();
                    continue;
                }
                const char c = cur();
                const bool fused_empty = c == '(' && peek() == ')';
                step();
                if (fused_empty) {
                    if (depth == 0) break;
                    continue;
                }
                if (c == '(') ++depth;
                if (c == ')' && --depth == 0) break;
            }
        }
        // everything else on the logical line is opaque macro replacement text
        while (true) {
            skip_horizontal_space();
            if (pos_ >= src_.size() || cur() == '\n') break;
            if (starts_with("//")) { lex_line_comment(); break; }
            if (starts_with("/*")) { lex_block_comment(); continue; }
            const std::size_t start = pos_;
            const int start_line = line_;
            std::size_t end = pos_;
            while (pos_ < src_.size() && cur() != '\n' && !at_backslash_newline() &&
                   !starts_with("//") && !starts_with("/*")) {
                advance(1);
                if (!is_space_char(src_[pos_ - 1])) end = pos_;
            }
            const std::size_t tail = pos_;
            pos_ = end;  // trailing spaces belong to a whitespace span
            if (end > start) emit(TokenType::Value, start, start_line);
            pos_ = tail;
            if (pos_ > end) out_.discarded.push_back(
                {DiscardedSpan::Kind::Whitespace, end, pos_ - end});
        }
        end_statement();
    }

    void skip_horizontal_space() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && (cur() == ' ' || cur() == '\t' || cur() == '\r' ||
                                      at_backslash_newline())) {
            if (at_backslash_newline()) {
                advance(peek() == '\n' ? 2 : 3);
                at_line_start_ = false;
            } else {
                advance(1);
            }
        }
        discard(start, DiscardedSpan::Kind::Whitespace);
    }

    void lex_punct() {
        const std::size_t start = pos_;
        const int start_line = line_;
        const char c = cur();
        switch (c) {
            case '(':
                if (peek() == ')') {
                    advance(2);  // empty pair is a single unit
                } else {
                    advance(1);
                }
                emit(TokenType::ArgumentList, start, start_line);
                return;
            case ')':
            case ',':
                advance(1);
                emit(TokenType::ArgumentList, start, start_line);
                return;
            case ';': {
                advance(1);
                const bool decl = stmt_open_ && stmt_is_decl_;
                emit(decl ? TokenType::DeclStmt : TokenType::ExprStmt, start, start_line);
                end_statement();
                return;
            }
            case '{':
            case '}':
                advance(1);
                emit(TokenType::Block, start, start_line);
                end_statement();
                return;
            default:
                break;
        }
        for (std::string_view op : kOperators) {
            if (starts_with(op)) {
                advance(op.size());
                emit(TokenType::Operator, start, start_line);
                return;
            }
        }
        advance(1);
        emit(TokenType::OtherPunct, start, start_line);
    }
};

}  // namespace

TokenizedFile lex(std::string_view source, Language language) {
    Scanner scanner(source, language);
    TokenizedFile file = scanner.run();
    file.language = language;
    return file;
}

std::string strip_comments_linewise(std::string_view source, Language language) {
    (void)language;  // both languages share the same comment grammar
    std::string out(source);
    std::size_t i = 0;
    const auto blank_until = [&](std::size_t end) {
        for (; i < end; ++i) {
            if (out[i] != '\n') out[i] = ' ';
        }
    };
    while (i < source.size()) {
        const char c = source[i];
        if (c == '"' || c == '\'') {
            ++i;
            while (i < source.size()) {
                if (source[i] == '\\' && i + 1 < source.size()) { i += 2; continue; }
                if (source[i] == c) { ++i; break; }
                ++i;
            }
        } else if (c == '/' && i + 1 < source.size() && source[i + 1] == '/') {
            std::size_t end = i;
            while (end < source.size() && source[end] != '\n') ++end;
            blank_until(end);
        } else if (c == '/' && i + 1 < source.size() && source[i + 1] == '*') {
            std::size_t end = source.find("*/", i + 2);
            end = end == std::string_view::npos ? source.size() : end + 2;
            blank_until(end);
        } else {
            ++i;
        }
    }
    return out;
}

}  // namespace tokmine
