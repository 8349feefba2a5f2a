#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tokmine {

struct RepoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotFoundError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommitMeta {
    std::string id;
    std::string message;
    std::int64_t timestamp = 0;
    std::vector<std::string> parents;

    bool is_merge() const { return parents.size() > 1; }
};

/// Read-only view over a version-control history. Keeps the miner testable
/// with in-memory fixtures; the production reader shells out to git plumbing.
class HistoryReader {
public:
    virtual ~HistoryReader() = default;

    /// All commits, oldest first.
    virtual std::vector<CommitMeta> log() = 0;

    /// Paths changed by the commit relative to its first parent.
    virtual std::vector<std::string> changed_paths(const std::string& commit_id) = 0;

    /// (pre-image, post-image) contents; an absent side is the empty string.
    /// Throws NotFoundError for unknown commits.
    virtual std::pair<std::string, std::string> file_pair(const std::string& commit_id,
                                                          const std::string& path) = 0;
};

class GitHistory final : public HistoryReader {
public:
    /// Throws RepoError when the path is not a readable git repository.
    explicit GitHistory(std::string repo_path);

    std::vector<CommitMeta> log() override;
    std::vector<std::string> changed_paths(const std::string& commit_id) override;
    std::pair<std::string, std::string> file_pair(const std::string& commit_id,
                                                  const std::string& path) override;

private:
    std::string repo_path_;
    std::map<std::string, std::vector<std::string>> parents_;  // filled by log()
    const std::vector<std::string>& parents_of(const std::string& commit_id);
};

/// Scripted history for tests.
class InMemoryHistory final : public HistoryReader {
public:
    struct FilePair {
        std::string old_text;
        std::string new_text;
    };
    struct Entry {
        CommitMeta meta;
        std::map<std::string, FilePair> files;
    };

    InMemoryHistory& add(Entry entry) {
        entries_.push_back(std::move(entry));
        return *this;
    }

    std::vector<CommitMeta> log() override {
        std::vector<CommitMeta> out;
        for (const Entry& e : entries_) out.push_back(e.meta);
        return out;
    }

    std::vector<std::string> changed_paths(const std::string& commit_id) override {
        const Entry& e = find(commit_id);
        std::vector<std::string> out;
        for (const auto& [path, pair] : e.files) out.push_back(path);
        return out;
    }

    std::pair<std::string, std::string> file_pair(const std::string& commit_id,
                                                  const std::string& path) override {
        const Entry& e = find(commit_id);
        const auto it = e.files.find(path);
        if (it == e.files.end()) throw NotFoundError("no such path: " + path);
        return {it->second.old_text, it->second.new_text};
    }

private:
    std::vector<Entry> entries_;

    const Entry& find(const std::string& commit_id) const {
        for (const Entry& e : entries_)
            if (e.meta.id == commit_id) return e;
        throw NotFoundError("no such commit: " + commit_id);
    }
};

}  // namespace tokmine
