#include "tokmine/commit.hpp"

namespace tokmine {

namespace {

bool tokens_equal(const std::vector<Token>& a, const std::vector<Token>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].type != b[i].type || a[i].text != b[i].text) return false;
    }
    return true;
}

bool lines_equal(const std::vector<LineUnit>& a, const std::vector<LineUnit>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].text != b[i].text || a[i].key != b[i].key) return false;
    }
    return true;
}

template <class T, class UnitsEq>
bool diffs_equal(const DiffResult<T>& a, const DiffResult<T>& b, UnitsEq eq) {
    if (a.n_added != b.n_added || a.n_removed != b.n_removed) return false;
    if (a.hunks.size() != b.hunks.size()) return false;
    for (std::size_t i = 0; i < a.hunks.size(); ++i) {
        const auto& ha = a.hunks[i];
        const auto& hb = b.hunks[i];
        if (ha.old_start != hb.old_start || ha.new_start != hb.new_start) return false;
        if (!eq(ha.removed, hb.removed) || !eq(ha.added, hb.added)) return false;
    }
    return true;
}

}  // namespace

bool records_equal(const CommitRecord& a, const CommitRecord& b) {
    if (a.commit_id != b.commit_id || a.message != b.message ||
        a.timestamp != b.timestamp || a.is_merge != b.is_merge ||
        a.files.size() != b.files.size())
        return false;
    for (std::size_t i = 0; i < a.files.size(); ++i) {
        const FileChange& fa = a.files[i];
        const FileChange& fb = b.files[i];
        if (fa.path != fb.path || fa.language != fb.language) return false;
        if (!diffs_equal(fa.line_diff, fb.line_diff,
                         [](const auto& x, const auto& y) { return lines_equal(x, y); }))
            return false;
        if (!diffs_equal(fa.token_diff, fb.token_diff,
                         [](const auto& x, const auto& y) { return tokens_equal(x, y); }))
            return false;
    }
    return true;
}

bool MineConfig::classify_path(const std::string& path, Language& out) const {
    for (const auto& [ext, lang] : extensions) {
        if (path.size() >= ext.size() &&
            path.compare(path.size() - ext.size(), ext.size(), ext) == 0) {
            if (!language_enabled(lang)) return false;
            out = lang;
            return true;
        }
    }
    return false;
}

}  // namespace tokmine
