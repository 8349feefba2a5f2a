#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tokmine/commit.hpp"

struct sqlite3;

namespace tokmine {

struct StoreError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One row of the commits table.
struct CommitSummary {
    std::string commit_id;
    std::string message;
    std::int64_t timestamp = 0;
    bool is_merge = false;
    std::int64_t n_files = 0;
    std::int64_t n_tokens_added = 0;
    std::int64_t n_tokens_removed = 0;
    std::int64_t n_lines_added = 0;
    std::int64_t n_lines_removed = 0;
    std::int64_t n_hunks = 0;  // token hunks

    friend bool operator==(const CommitSummary&, const CommitSummary&) = default;
};

/// Single-file embedded relational store for mined commits and their labels.
/// Single writer, any number of readers; writes are transactional per commit
/// (or per explicit batch). Schema details live in docs/SCHEMA.md.
class Store {
public:
    explicit Store(const std::string& db_path);
    ~Store();
    Store(const Store&) = delete;
    Store& operator=(const Store&) = delete;

    /// Durably store a record; re-putting the same commit_id replaces all of
    /// its rows atomically.
    void put(const CommitRecord& record);

    /// Group several put() calls into one transaction.
    void begin_batch();
    void commit_batch();
    void rollback_batch();

    std::optional<CommitRecord> get(const std::string& commit_id) const;
    bool contains(const std::string& commit_id) const;
    std::vector<std::string> commit_ids() const;

    /// Summaries matching a SQL boolean expression over commits columns, in
    /// timestamp order. Throws ValidationError for malformed filters.
    std::vector<CommitSummary> query(const std::string& filter) const;
    std::vector<CommitSummary> all_commits() const { return query("1=1"); }

    /// Replace the labels of one scheme for one commit.
    void set_labels(const std::string& commit_id, const std::string& scheme,
                    const std::vector<std::string>& labels);
    std::vector<std::string> labels(const std::string& commit_id,
                                    const std::string& scheme) const;
    /// commit_id -> labels for a whole scheme.
    std::vector<std::pair<std::string, std::string>> all_labels(const std::string& scheme) const;

    void set_meta(const std::string& key, const std::string& value);
    std::optional<std::string> meta(const std::string& key) const;

    struct TokenChangeRow {
        std::string commit_id;
        std::string path;
        std::int64_t hunk_index = 0;
        char sign = '+';
        std::int64_t position = 0;
        std::string token_type;
        std::string token_text;
    };
    /// Stream every token_changes row in (commit_id, path, hunk, sign, pos) order.
    void for_each_token_change(const std::function<void(const TokenChangeRow&)>& fn) const;

    /// Verify that every aggregate column matches a recount of its detail
    /// rows; returns human-readable descriptions of inconsistencies.
    std::vector<std::string> audit() const;

    void export_csv(const std::string& table, std::ostream& out) const;
    std::vector<std::string> table_names() const;

    /// Read access for analytics; prepared statements only, no writes.
    sqlite3* handle() const { return db_; }

    static constexpr int kSchemaVersion = 1;

private:
    sqlite3* db_ = nullptr;
    bool in_batch_ = false;

    void exec(const std::string& sql);
    void init_schema();
};

}  // namespace tokmine
