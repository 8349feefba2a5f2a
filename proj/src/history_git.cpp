#include <cstdlib>

#include "tokmine/history.hpp"
#include "tokmine/subprocess.hpp"

namespace tokmine {

namespace {

// %H, %P and %ct never contain the 0x1f separator; the message field comes
// last so arbitrary message bytes cannot break the framing.
constexpr char kFieldSep = '\x1f';

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

}  // namespace

GitHistory::GitHistory(std::string repo_path) : repo_path_(std::move(repo_path)) {
    const auto probe = run_command({"git", "rev-parse", "--git-dir"}, repo_path_);
    if (!probe.ok()) throw RepoError("not a readable git repository: " + repo_path_);
}

std::vector<CommitMeta> GitHistory::log() {
    const auto head = run_command({"git", "rev-parse", "--verify", "-q", "HEAD"}, repo_path_);
    if (!head.ok()) return {};  // repository with no commits

    const auto res = run_command(
        {"git", "log", "-z", "--reverse", "--format=%H\x1f%P\x1f%ct\x1f%B"}, repo_path_);
    if (!res.ok()) throw RepoError("git log failed in " + repo_path_);

    std::vector<CommitMeta> out;
    std::size_t start = 0;
    while (start < res.output.size()) {
        std::size_t end = res.output.find('\0', start);
        if (end == std::string::npos) end = res.output.size();
        const std::string entry = res.output.substr(start, end - start);
        start = end + 1;
        if (entry.empty()) continue;

        CommitMeta meta;
        std::size_t p1 = entry.find(kFieldSep);
        std::size_t p2 = entry.find(kFieldSep, p1 + 1);
        std::size_t p3 = entry.find(kFieldSep, p2 + 1);
        if (p1 == std::string::npos || p2 == std::string::npos || p3 == std::string::npos)
            throw RepoError("unparseable git log entry");
        meta.id = entry.substr(0, p1);
        for (const std::string& p : split(entry.substr(p1 + 1, p2 - p1 - 1), ' '))
            if (!p.empty()) meta.parents.push_back(p);
        meta.timestamp = std::strtoll(entry.substr(p2 + 1, p3 - p2 - 1).c_str(), nullptr, 10);
        meta.message = entry.substr(p3 + 1);
        parents_[meta.id] = meta.parents;
        out.push_back(std::move(meta));
    }
    return out;
}

const std::vector<std::string>& GitHistory::parents_of(const std::string& commit_id) {
    auto it = parents_.find(commit_id);
    if (it == parents_.end()) {
        const auto res =
            run_command({"git", "rev-list", "--parents", "-n", "1", commit_id}, repo_path_);
        if (!res.ok()) throw NotFoundError("no such commit: " + commit_id);
        auto fields = split(res.output, ' ');
        std::vector<std::string> parents;
        for (std::size_t i = 1; i < fields.size(); ++i) {
            while (!fields[i].empty() &&
                   (fields[i].back() == '\n' || fields[i].back() == '\r'))
                fields[i].pop_back();
            if (!fields[i].empty()) parents.push_back(fields[i]);
        }
        it = parents_.emplace(commit_id, std::move(parents)).first;
    }
    return it->second;
}

std::vector<std::string> GitHistory::changed_paths(const std::string& commit_id) {
    const auto& parents = parents_of(commit_id);
    std::vector<std::string> cmd = {"git", "diff-tree", "-r", "-z",
                                    "--no-renames", "--name-only"};
    if (parents.empty()) {
        cmd.push_back("--root");
        cmd.push_back(commit_id);
    } else {
        cmd.push_back(parents.front());  // merges diff against first parent
        cmd.push_back(commit_id);
    }
    const auto res = run_command(cmd, repo_path_);
    if (!res.ok()) throw NotFoundError("no such commit: " + commit_id);

    std::vector<std::string> paths;
    for (const std::string& p : split(res.output, '\0')) {
        if (!p.empty() && p != commit_id) paths.push_back(p);
    }
    return paths;
}

std::pair<std::string, std::string> GitHistory::file_pair(const std::string& commit_id,
                                                          const std::string& path) {
    const auto& parents = parents_of(commit_id);
    const auto fetch = [&](const std::string& rev, bool& present) -> std::string {
        if (rev.empty()) {
            present = false;  // root commit has no pre-image
            return {};
        }
        const auto res = run_command({"git", "show", rev + ":" + path}, repo_path_);
        present = res.ok();
        return present ? res.output : std::string{};  // absent side -> empty
    };
    bool in_old = false, in_new = false;
    std::string old_text =
        fetch(parents.empty() ? std::string{} : parents.front(), in_old);
    std::string new_text = fetch(commit_id, in_new);
    if (!in_old && !in_new)
        throw NotFoundError("path not present on either side of " + commit_id + ": " + path);
    return {std::move(old_text), std::move(new_text)};
}

}  // namespace tokmine
