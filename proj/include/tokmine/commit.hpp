#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tokmine/diff.hpp"
#include "tokmine/token.hpp"

namespace tokmine {

/// One source line as a diff unit. `text` is the raw line as committed;
/// `key` is the comparison form (comments stripped, all whitespace removed),
/// so formatting-only edits compare equal and drop out of the diff.
struct LineUnit {
    std::string text;
    std::string key;

    friend bool operator==(const LineUnit& a, const LineUnit& b) {
        return a.key == b.key;
    }
};

struct LineUnitEq {
    bool operator()(const LineUnit& a, const LineUnit& b) const { return a.key == b.key; }
};

struct FileChange {
    std::string path;
    Language language = Language::C;
    DiffResult<LineUnit> line_diff;
    DiffResult<Token> token_diff;
};

struct CommitRecord {
    std::string commit_id;  // 40-hex identifier
    std::string message;
    std::int64_t timestamp = 0;
    bool is_merge = false;
    std::vector<FileChange> files;

    std::size_t total_tokens_added() const {
        std::size_t n = 0;
        for (const FileChange& f : files) n += f.token_diff.n_added;
        return n;
    }
    std::size_t total_tokens_removed() const {
        std::size_t n = 0;
        for (const FileChange& f : files) n += f.token_diff.n_removed;
        return n;
    }
    std::size_t total_lines_added() const {
        std::size_t n = 0;
        for (const FileChange& f : files) n += f.line_diff.n_added;
        return n;
    }
    std::size_t total_lines_removed() const {
        std::size_t n = 0;
        for (const FileChange& f : files) n += f.line_diff.n_removed;
        return n;
    }
    std::size_t total_token_hunks() const {
        std::size_t n = 0;
        for (const FileChange& f : files) n += f.token_diff.hunks.size();
        return n;
    }
    std::size_t total_line_hunks() const {
        std::size_t n = 0;
        for (const FileChange& f : files) n += f.line_diff.hunks.size();
        return n;
    }
};

/// Structural equality over the content a store round-trip preserves: hunk
/// layout, token (type, text) pairs and line (text, key) pairs. Token byte
/// offsets are lexer-internal and excluded.
bool records_equal(const CommitRecord& a, const CommitRecord& b);

struct MineConfig {
    std::vector<Language> languages = {Language::C, Language::Java};
    // extension (with dot) -> language; defaults follow the studied projects
    std::vector<std::pair<std::string, Language>> extensions = {
        {".c", Language::C}, {".h", Language::C}, {".java", Language::Java}};
    bool include_merges = false;
    std::size_t max_commits = 0;  // 0 = all
    unsigned jobs = 1;

    bool language_enabled(Language lang) const {
        for (Language l : languages)
            if (l == lang) return true;
        return false;
    }
    /// Maps a path to its configured language; false when filtered out.
    bool classify_path(const std::string& path, Language& out) const;
};

}  // namespace tokmine
