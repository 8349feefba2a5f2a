#pragma once

#include <string>
#include <string_view>

#include "tokmine/token.hpp"

namespace tokmine {

/// Replace invalid UTF-8 byte sequences with U+FFFD so downstream work is
/// deterministic across platforms. Valid input passes through unchanged.
std::string sanitize_utf8(std::string_view bytes);

/// Tokenize C or Java source. Comments and whitespace produce no tokens;
/// string and char literals are single Literal tokens even when they contain
/// comment-like substrings. The result tiles the input: token spans plus
/// discarded spans reconstruct the source byte-for-byte.
TokenizedFile lex(std::string_view source, Language language);

/// Blank out comments (each comment byte becomes a space, newlines kept) while
/// respecting string and char literals. Line structure is preserved, so the
/// output has exactly the same length and line count as the input.
std::string strip_comments_linewise(std::string_view source, Language language);

}  // namespace tokmine
