#include "tokmine/store.hpp"

#include <sqlite3.h>

#include <map>
#include <ostream>
#include <sstream>

namespace tokmine {

namespace {

// Thin RAII wrapper over sqlite3_stmt with positional binding.
class Stmt {
public:
    Stmt(sqlite3* db, const std::string& sql) {
        if (sqlite3_prepare_v2(db, sql.c_str(), -1, &stmt_, nullptr) != SQLITE_OK)
            throw StoreError("prepare failed: " + std::string(sqlite3_errmsg(db)) +
                             " in: " + sql);
    }
    ~Stmt() { sqlite3_finalize(stmt_); }
    Stmt(const Stmt&) = delete;
    Stmt& operator=(const Stmt&) = delete;

    Stmt& bind(int idx, const std::string& v) {
        sqlite3_bind_text(stmt_, idx, v.data(), static_cast<int>(v.size()),
                          SQLITE_TRANSIENT);
        return *this;
    }
    Stmt& bind(int idx, std::int64_t v) {
        sqlite3_bind_int64(stmt_, idx, v);
        return *this;
    }

    bool step() {
        const int rc = sqlite3_step(stmt_);
        if (rc == SQLITE_ROW) return true;
        if (rc == SQLITE_DONE) return false;
        throw StoreError("step failed: " + std::string(sqlite3_errstr(rc)));
    }
    void run() {
        while (step()) {
        }
    }
    void reset() {
        sqlite3_reset(stmt_);
        sqlite3_clear_bindings(stmt_);
    }

    std::int64_t col_int(int idx) const { return sqlite3_column_int64(stmt_, idx); }
    std::string col_text(int idx) const {
        const unsigned char* p = sqlite3_column_text(stmt_, idx);
        const int n = sqlite3_column_bytes(stmt_, idx);
        return p ? std::string(reinterpret_cast<const char*>(p), static_cast<std::size_t>(n))
                 : std::string{};
    }
    int col_count() const { return sqlite3_column_count(stmt_); }
    std::string col_name(int idx) const { return sqlite3_column_name(stmt_, idx); }

private:
    sqlite3_stmt* stmt_ = nullptr;
};

constexpr const char* kSchemaSql = R"sql(
CREATE TABLE IF NOT EXISTS meta(
  key TEXT PRIMARY KEY,
  value TEXT NOT NULL);
CREATE TABLE IF NOT EXISTS commits(
  commit_id TEXT PRIMARY KEY,
  message TEXT NOT NULL,
  timestamp INTEGER NOT NULL,
  is_merge INTEGER NOT NULL,
  n_files INTEGER NOT NULL,
  n_tokens_added INTEGER NOT NULL,
  n_tokens_removed INTEGER NOT NULL,
  n_lines_added INTEGER NOT NULL,
  n_lines_removed INTEGER NOT NULL,
  n_hunks INTEGER NOT NULL);
CREATE TABLE IF NOT EXISTS file_changes(
  commit_id TEXT NOT NULL,
  path TEXT NOT NULL,
  language TEXT NOT NULL,
  n_tokens_added INTEGER NOT NULL,
  n_tokens_removed INTEGER NOT NULL,
  PRIMARY KEY(commit_id, path));
CREATE TABLE IF NOT EXISTS token_hunks(
  commit_id TEXT NOT NULL,
  path TEXT NOT NULL,
  hunk_index INTEGER NOT NULL,
  old_start INTEGER NOT NULL,
  new_start INTEGER NOT NULL,
  n_removed INTEGER NOT NULL,
  n_added INTEGER NOT NULL,
  PRIMARY KEY(commit_id, path, hunk_index));
CREATE TABLE IF NOT EXISTS line_hunks(
  commit_id TEXT NOT NULL,
  path TEXT NOT NULL,
  hunk_index INTEGER NOT NULL,
  old_start INTEGER NOT NULL,
  new_start INTEGER NOT NULL,
  n_removed INTEGER NOT NULL,
  n_added INTEGER NOT NULL,
  PRIMARY KEY(commit_id, path, hunk_index));
CREATE TABLE IF NOT EXISTS token_changes(
  commit_id TEXT NOT NULL,
  path TEXT NOT NULL,
  hunk_index INTEGER NOT NULL,
  sign TEXT NOT NULL CHECK(sign IN ('+','-')),
  position INTEGER NOT NULL,
  token_type TEXT NOT NULL,
  token_text TEXT NOT NULL,
  line INTEGER NOT NULL);
CREATE TABLE IF NOT EXISTS line_changes(
  commit_id TEXT NOT NULL,
  path TEXT NOT NULL,
  hunk_index INTEGER NOT NULL,
  sign TEXT NOT NULL CHECK(sign IN ('+','-')),
  position INTEGER NOT NULL,
  line_text TEXT NOT NULL,
  line_key TEXT NOT NULL);
CREATE TABLE IF NOT EXISTS labels(
  commit_id TEXT NOT NULL,
  scheme TEXT NOT NULL CHECK(scheme IN ('detector','maintenance','taxonomy')),
  label TEXT NOT NULL,
  PRIMARY KEY(commit_id, scheme, label));
CREATE INDEX IF NOT EXISTS idx_token_changes ON token_changes(commit_id, path, hunk_index, sign, position);
CREATE INDEX IF NOT EXISTS idx_line_changes ON line_changes(commit_id, path, hunk_index, sign, position);
CREATE INDEX IF NOT EXISTS idx_labels_scheme ON labels(scheme, label);
)sql";

const char* kDetailTables[] = {"file_changes", "token_hunks", "line_hunks",
                               "token_changes", "line_changes", "labels"};

void csv_field(std::ostream& out, const std::string& v) {
    if (v.find_first_of(",\"\n\r") == std::string::npos) {
        out << v;
        return;
    }
    out << '"';
    for (char c : v) {
        if (c == '"') out << '"';
        out << c;
    }
    out << '"';
}

}  // namespace

Store::Store(const std::string& db_path) {
    if (sqlite3_open(db_path.c_str(), &db_) != SQLITE_OK) {
        const std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
        sqlite3_close(db_);
        throw StoreError("cannot open database " + db_path + ": " + msg);
    }
    exec("PRAGMA foreign_keys=ON");
    exec("PRAGMA journal_mode=WAL");
    exec("PRAGMA synchronous=NORMAL");
    init_schema();
}

Store::~Store() {
    if (in_batch_) sqlite3_exec(db_, "ROLLBACK", nullptr, nullptr, nullptr);
    sqlite3_close(db_);
}

void Store::exec(const std::string& sql) {
    char* err = nullptr;
    if (sqlite3_exec(db_, sql.c_str(), nullptr, nullptr, &err) != SQLITE_OK) {
        std::string msg = err ? err : "unknown error";
        sqlite3_free(err);
        throw StoreError("exec failed: " + msg);
    }
}

void Store::init_schema() {
    exec(kSchemaSql);
    Stmt check(db_, "SELECT value FROM meta WHERE key='schema_version'");
    if (check.step()) {
        if (check.col_text(0) != std::to_string(kSchemaVersion))
            throw StoreError("database has schema version " + check.col_text(0) +
                             ", expected " + std::to_string(kSchemaVersion));
    } else {
        exec("INSERT INTO meta(key, value) VALUES('schema_version','" +
             std::to_string(kSchemaVersion) + "')");
    }
}

void Store::begin_batch() {
    if (in_batch_) throw StoreError("batch already open");
    exec("BEGIN");
    in_batch_ = true;
}

void Store::commit_batch() {
    if (!in_batch_) throw StoreError("no open batch");
    exec("COMMIT");
    in_batch_ = false;
}

void Store::rollback_batch() {
    if (!in_batch_) return;
    sqlite3_exec(db_, "ROLLBACK", nullptr, nullptr, nullptr);
    in_batch_ = false;
}

void Store::put(const CommitRecord& record) {
    const bool own_txn = !in_batch_;
    if (own_txn) exec("BEGIN");
    try {
        {
            Stmt del(db_, "DELETE FROM commits WHERE commit_id=?1");
            del.bind(1, record.commit_id).run();
        }
        for (const char* table : kDetailTables) {
            Stmt del(db_, std::string("DELETE FROM ") + table + " WHERE commit_id=?1");
            del.bind(1, record.commit_id).run();
        }

        Stmt ins(db_,
                 "INSERT INTO commits(commit_id, message, timestamp, is_merge, n_files,"
                 " n_tokens_added, n_tokens_removed, n_lines_added, n_lines_removed, n_hunks)"
                 " VALUES(?1,?2,?3,?4,?5,?6,?7,?8,?9,?10)");
        ins.bind(1, record.commit_id)
            .bind(2, record.message)
            .bind(3, record.timestamp)
            .bind(4, static_cast<std::int64_t>(record.is_merge))
            .bind(5, static_cast<std::int64_t>(record.files.size()))
            .bind(6, static_cast<std::int64_t>(record.total_tokens_added()))
            .bind(7, static_cast<std::int64_t>(record.total_tokens_removed()))
            .bind(8, static_cast<std::int64_t>(record.total_lines_added()))
            .bind(9, static_cast<std::int64_t>(record.total_lines_removed()))
            .bind(10, static_cast<std::int64_t>(record.total_token_hunks()));
        ins.run();

        Stmt ins_file(db_,
                      "INSERT INTO file_changes(commit_id, path, language,"
                      " n_tokens_added, n_tokens_removed) VALUES(?1,?2,?3,?4,?5)");
        Stmt ins_thunk(db_,
                       "INSERT INTO token_hunks(commit_id, path, hunk_index, old_start,"
                       " new_start, n_removed, n_added) VALUES(?1,?2,?3,?4,?5,?6,?7)");
        Stmt ins_lhunk(db_,
                       "INSERT INTO line_hunks(commit_id, path, hunk_index, old_start,"
                       " new_start, n_removed, n_added) VALUES(?1,?2,?3,?4,?5,?6,?7)");
        Stmt ins_tok(db_,
                     "INSERT INTO token_changes(commit_id, path, hunk_index, sign,"
                     " position, token_type, token_text, line)"
                     " VALUES(?1,?2,?3,?4,?5,?6,?7,?8)");
        Stmt ins_line(db_,
                      "INSERT INTO line_changes(commit_id, path, hunk_index, sign,"
                      " position, line_text, line_key) VALUES(?1,?2,?3,?4,?5,?6,?7)");

        for (const FileChange& file : record.files) {
            ins_file.reset();
            ins_file.bind(1, record.commit_id)
                .bind(2, file.path)
                .bind(3, std::string(to_string(file.language)))
                .bind(4, static_cast<std::int64_t>(file.token_diff.n_added))
                .bind(5, static_cast<std::int64_t>(file.token_diff.n_removed));
            ins_file.run();

            for (std::size_t h = 0; h < file.token_diff.hunks.size(); ++h) {
                const auto& hunk = file.token_diff.hunks[h];
                ins_thunk.reset();
                ins_thunk.bind(1, record.commit_id)
                    .bind(2, file.path)
                    .bind(3, static_cast<std::int64_t>(h))
                    .bind(4, static_cast<std::int64_t>(hunk.old_start))
                    .bind(5, static_cast<std::int64_t>(hunk.new_start))
                    .bind(6, static_cast<std::int64_t>(hunk.removed.size()))
                    .bind(7, static_cast<std::int64_t>(hunk.added.size()));
                ins_thunk.run();
                for (std::size_t i = 0; i < hunk.removed.size(); ++i) {
                    ins_tok.reset();
                    ins_tok.bind(1, record.commit_id)
                        .bind(2, file.path)
                        .bind(3, static_cast<std::int64_t>(h))
                        .bind(4, std::string("-"))
                        .bind(5, static_cast<std::int64_t>(hunk.old_start + i))
                        .bind(6, std::string(to_string(hunk.removed[i].type)))
                        .bind(7, hunk.removed[i].text)
                        .bind(8, static_cast<std::int64_t>(hunk.removed[i].line));
                    ins_tok.run();
                }
                for (std::size_t i = 0; i < hunk.added.size(); ++i) {
                    ins_tok.reset();
                    ins_tok.bind(1, record.commit_id)
                        .bind(2, file.path)
                        .bind(3, static_cast<std::int64_t>(h))
                        .bind(4, std::string("+"))
                        .bind(5, static_cast<std::int64_t>(hunk.new_start + i))
                        .bind(6, std::string(to_string(hunk.added[i].type)))
                        .bind(7, hunk.added[i].text)
                        .bind(8, static_cast<std::int64_t>(hunk.added[i].line));
                    ins_tok.run();
                }
            }

            for (std::size_t h = 0; h < file.line_diff.hunks.size(); ++h) {
                const auto& hunk = file.line_diff.hunks[h];
                ins_lhunk.reset();
                ins_lhunk.bind(1, record.commit_id)
                    .bind(2, file.path)
                    .bind(3, static_cast<std::int64_t>(h))
                    .bind(4, static_cast<std::int64_t>(hunk.old_start))
                    .bind(5, static_cast<std::int64_t>(hunk.new_start))
                    .bind(6, static_cast<std::int64_t>(hunk.removed.size()))
                    .bind(7, static_cast<std::int64_t>(hunk.added.size()));
                ins_lhunk.run();
                for (std::size_t i = 0; i < hunk.removed.size(); ++i) {
                    ins_line.reset();
                    ins_line.bind(1, record.commit_id)
                        .bind(2, file.path)
                        .bind(3, static_cast<std::int64_t>(h))
                        .bind(4, std::string("-"))
                        .bind(5, static_cast<std::int64_t>(hunk.old_start + i))
                        .bind(6, hunk.removed[i].text)
                        .bind(7, hunk.removed[i].key);
                    ins_line.run();
                }
                for (std::size_t i = 0; i < hunk.added.size(); ++i) {
                    ins_line.reset();
                    ins_line.bind(1, record.commit_id)
                        .bind(2, file.path)
                        .bind(3, static_cast<std::int64_t>(h))
                        .bind(4, std::string("+"))
                        .bind(5, static_cast<std::int64_t>(hunk.new_start + i))
                        .bind(6, hunk.added[i].text)
                        .bind(7, hunk.added[i].key);
                    ins_line.run();
                }
            }
        }
        if (own_txn) exec("COMMIT");
    } catch (...) {
        if (own_txn) sqlite3_exec(db_, "ROLLBACK", nullptr, nullptr, nullptr);
        throw;
    }
}

bool Store::contains(const std::string& commit_id) const {
    Stmt s(db_, "SELECT 1 FROM commits WHERE commit_id=?1");
    s.bind(1, commit_id);
    return s.step();
}

std::vector<std::string> Store::commit_ids() const {
    Stmt s(db_, "SELECT commit_id FROM commits ORDER BY timestamp, commit_id");
    std::vector<std::string> out;
    while (s.step()) out.push_back(s.col_text(0));
    return out;
}

std::optional<CommitRecord> Store::get(const std::string& commit_id) const {
    Stmt head(db_, "SELECT message, timestamp, is_merge FROM commits WHERE commit_id=?1");
    head.bind(1, commit_id);
    if (!head.step()) return std::nullopt;

    CommitRecord record;
    record.commit_id = commit_id;
    record.message = head.col_text(0);
    record.timestamp = head.col_int(1);
    record.is_merge = head.col_int(2) != 0;

    Stmt files(db_,
               "SELECT path, language FROM file_changes WHERE commit_id=?1 ORDER BY path");
    files.bind(1, commit_id);
    while (files.step()) {
        FileChange change;
        change.path = files.col_text(0);
        Language lang;
        if (language_from_string(files.col_text(1), lang)) change.language = lang;
        record.files.push_back(std::move(change));
    }

    for (FileChange& file : record.files) {
        Stmt thunks(db_,
                    "SELECT hunk_index, old_start, new_start FROM token_hunks"
                    " WHERE commit_id=?1 AND path=?2 ORDER BY hunk_index");
        thunks.bind(1, commit_id).bind(2, file.path);
        while (thunks.step()) {
            Hunk<Token> hunk;
            hunk.old_start = static_cast<std::size_t>(thunks.col_int(1));
            hunk.new_start = static_cast<std::size_t>(thunks.col_int(2));
            const std::int64_t index = thunks.col_int(0);
            Stmt toks(db_,
                      "SELECT sign, token_type, token_text, line FROM token_changes"
                      " WHERE commit_id=?1 AND path=?2 AND hunk_index=?3"
                      " ORDER BY sign DESC, position");  // '-' rows first
            toks.bind(1, commit_id).bind(2, file.path).bind(3, index);
            while (toks.step()) {
                Token token;
                TokenType type;
                if (token_type_from_string(toks.col_text(1), type)) token.type = type;
                token.text = toks.col_text(2);
                token.line = static_cast<int>(toks.col_int(3));
                if (toks.col_text(0) == "-")
                    hunk.removed.push_back(std::move(token));
                else
                    hunk.added.push_back(std::move(token));
            }
            file.token_diff.n_removed += hunk.removed.size();
            file.token_diff.n_added += hunk.added.size();
            file.token_diff.hunks.push_back(std::move(hunk));
        }

        Stmt lhunks(db_,
                    "SELECT hunk_index, old_start, new_start FROM line_hunks"
                    " WHERE commit_id=?1 AND path=?2 ORDER BY hunk_index");
        lhunks.bind(1, commit_id).bind(2, file.path);
        while (lhunks.step()) {
            Hunk<LineUnit> hunk;
            hunk.old_start = static_cast<std::size_t>(lhunks.col_int(1));
            hunk.new_start = static_cast<std::size_t>(lhunks.col_int(2));
            const std::int64_t index = lhunks.col_int(0);
            Stmt lines(db_,
                       "SELECT sign, line_text, line_key FROM line_changes"
                       " WHERE commit_id=?1 AND path=?2 AND hunk_index=?3"
                       " ORDER BY sign DESC, position");
            lines.bind(1, commit_id).bind(2, file.path).bind(3, index);
            while (lines.step()) {
                LineUnit unit{lines.col_text(1), lines.col_text(2)};
                if (lines.col_text(0) == "-")
                    hunk.removed.push_back(std::move(unit));
                else
                    hunk.added.push_back(std::move(unit));
            }
            file.line_diff.n_removed += hunk.removed.size();
            file.line_diff.n_added += hunk.added.size();
            file.line_diff.hunks.push_back(std::move(hunk));
        }
    }
    return record;
}

std::vector<CommitSummary> Store::query(const std::string& filter) const {
    if (filter.find(';') != std::string::npos)
        throw ValidationError("filter must be a single expression");
    const std::string sql =
        "SELECT commit_id, message, timestamp, is_merge, n_files, n_tokens_added,"
        " n_tokens_removed, n_lines_added, n_lines_removed, n_hunks FROM commits"
        " WHERE (" + filter + ") ORDER BY timestamp, commit_id";
    sqlite3_stmt* raw = nullptr;
    if (sqlite3_prepare_v2(db_, sql.c_str(), -1, &raw, nullptr) != SQLITE_OK) {
        const std::string msg = sqlite3_errmsg(db_);
        throw ValidationError("malformed filter: " + msg);
    }
    sqlite3_finalize(raw);

    Stmt s(db_, sql);
    std::vector<CommitSummary> out;
    while (s.step()) {
        CommitSummary row;
        row.commit_id = s.col_text(0);
        row.message = s.col_text(1);
        row.timestamp = s.col_int(2);
        row.is_merge = s.col_int(3) != 0;
        row.n_files = s.col_int(4);
        row.n_tokens_added = s.col_int(5);
        row.n_tokens_removed = s.col_int(6);
        row.n_lines_added = s.col_int(7);
        row.n_lines_removed = s.col_int(8);
        row.n_hunks = s.col_int(9);
        out.push_back(std::move(row));
    }
    return out;
}

void Store::set_labels(const std::string& commit_id, const std::string& scheme,
                       const std::vector<std::string>& labels) {
    const bool own_txn = !in_batch_;
    if (own_txn) exec("BEGIN");
    try {
        Stmt del(db_, "DELETE FROM labels WHERE commit_id=?1 AND scheme=?2");
        del.bind(1, commit_id).bind(2, scheme).run();
        Stmt ins(db_, "INSERT OR IGNORE INTO labels(commit_id, scheme, label) VALUES(?1,?2,?3)");
        for (const std::string& label : labels) {
            ins.reset();
            ins.bind(1, commit_id).bind(2, scheme).bind(3, label);
            ins.run();
        }
        if (own_txn) exec("COMMIT");
    } catch (...) {
        if (own_txn) sqlite3_exec(db_, "ROLLBACK", nullptr, nullptr, nullptr);
        throw;
    }
}

std::vector<std::string> Store::labels(const std::string& commit_id,
                                       const std::string& scheme) const {
    Stmt s(db_, "SELECT label FROM labels WHERE commit_id=?1 AND scheme=?2 ORDER BY label");
    s.bind(1, commit_id).bind(2, scheme);
    std::vector<std::string> out;
    while (s.step()) out.push_back(s.col_text(0));
    return out;
}

std::vector<std::pair<std::string, std::string>> Store::all_labels(
    const std::string& scheme) const {
    Stmt s(db_, "SELECT commit_id, label FROM labels WHERE scheme=?1 ORDER BY commit_id, label");
    s.bind(1, scheme);
    std::vector<std::pair<std::string, std::string>> out;
    while (s.step()) out.emplace_back(s.col_text(0), s.col_text(1));
    return out;
}

void Store::set_meta(const std::string& key, const std::string& value) {
    Stmt s(db_, "INSERT INTO meta(key, value) VALUES(?1,?2)"
                " ON CONFLICT(key) DO UPDATE SET value=excluded.value");
    s.bind(1, key).bind(2, value).run();
}

std::optional<std::string> Store::meta(const std::string& key) const {
    Stmt s(db_, "SELECT value FROM meta WHERE key=?1");
    s.bind(1, key);
    if (!s.step()) return std::nullopt;
    return s.col_text(0);
}

std::vector<std::string> Store::audit() const {
    std::vector<std::string> problems;
    const auto complain = [&](const std::string& commit_id, const std::string& what,
                              std::int64_t stored, std::int64_t actual) {
        std::ostringstream os;
        os << commit_id << ": " << what << " stored " << stored << " != recount " << actual;
        problems.push_back(os.str());
    };

    Stmt s(db_,
           "SELECT c.commit_id, c.n_files, c.n_tokens_added, c.n_tokens_removed,"
           " c.n_lines_added, c.n_lines_removed, c.n_hunks,"
           " (SELECT COUNT(*) FROM file_changes f WHERE f.commit_id=c.commit_id),"
           " (SELECT COUNT(*) FROM token_changes t WHERE t.commit_id=c.commit_id AND t.sign='+'),"
           " (SELECT COUNT(*) FROM token_changes t WHERE t.commit_id=c.commit_id AND t.sign='-'),"
           " (SELECT COUNT(*) FROM line_changes l WHERE l.commit_id=c.commit_id AND l.sign='+'),"
           " (SELECT COUNT(*) FROM line_changes l WHERE l.commit_id=c.commit_id AND l.sign='-'),"
           " (SELECT COUNT(*) FROM token_hunks h WHERE h.commit_id=c.commit_id)"
           " FROM commits c");
    while (s.step()) {
        const std::string id = s.col_text(0);
        if (s.col_int(1) != s.col_int(7)) complain(id, "n_files", s.col_int(1), s.col_int(7));
        if (s.col_int(2) != s.col_int(8))
            complain(id, "n_tokens_added", s.col_int(2), s.col_int(8));
        if (s.col_int(3) != s.col_int(9))
            complain(id, "n_tokens_removed", s.col_int(3), s.col_int(9));
        if (s.col_int(4) != s.col_int(10))
            complain(id, "n_lines_added", s.col_int(4), s.col_int(10));
        if (s.col_int(5) != s.col_int(11))
            complain(id, "n_lines_removed", s.col_int(5), s.col_int(11));
        if (s.col_int(6) != s.col_int(12)) complain(id, "n_hunks", s.col_int(6), s.col_int(12));
    }

    Stmt per_file(db_,
                  "SELECT f.commit_id, f.path, f.n_tokens_added, f.n_tokens_removed,"
                  " (SELECT COUNT(*) FROM token_changes t WHERE t.commit_id=f.commit_id"
                  "   AND t.path=f.path AND t.sign='+'),"
                  " (SELECT COUNT(*) FROM token_changes t WHERE t.commit_id=f.commit_id"
                  "   AND t.path=f.path AND t.sign='-')"
                  " FROM file_changes f");
    while (per_file.step()) {
        const std::string id = per_file.col_text(0) + "/" + per_file.col_text(1);
        if (per_file.col_int(2) != per_file.col_int(4))
            complain(id, "file n_tokens_added", per_file.col_int(2), per_file.col_int(4));
        if (per_file.col_int(3) != per_file.col_int(5))
            complain(id, "file n_tokens_removed", per_file.col_int(3), per_file.col_int(5));
    }

    Stmt orphans(db_,
                 "SELECT COUNT(*) FROM labels WHERE commit_id NOT IN"
                 " (SELECT commit_id FROM commits)");
    if (orphans.step() && orphans.col_int(0) != 0)
        problems.push_back("labels reference missing commits: " +
                           std::to_string(orphans.col_int(0)) + " rows");
    return problems;
}

void Store::for_each_token_change(
    const std::function<void(const TokenChangeRow&)>& fn) const {
    Stmt s(db_,
           "SELECT commit_id, path, hunk_index, sign, position, token_type, token_text"
           " FROM token_changes ORDER BY commit_id, path, hunk_index, sign, position");
    while (s.step()) {
        TokenChangeRow row;
        row.commit_id = s.col_text(0);
        row.path = s.col_text(1);
        row.hunk_index = s.col_int(2);
        row.sign = s.col_text(3).empty() ? '+' : s.col_text(3)[0];
        row.position = s.col_int(4);
        row.token_type = s.col_text(5);
        row.token_text = s.col_text(6);
        fn(row);
    }
}

std::vector<std::string> Store::table_names() const {
    return {"meta",        "commits",      "file_changes", "token_hunks",
            "line_hunks",  "token_changes", "line_changes", "labels"};
}

void Store::export_csv(const std::string& table, std::ostream& out) const {
    bool known = false;
    for (const std::string& t : table_names()) known = known || t == table;
    if (!known) throw ValidationError("unknown table: " + table);

    Stmt s(db_, "SELECT * FROM " + table);
    bool header_done = false;
    while (s.step()) {
        if (!header_done) {
            for (int i = 0; i < s.col_count(); ++i) {
                if (i) out << ',';
                csv_field(out, s.col_name(i));
            }
            out << '\n';
            header_done = true;
        }
        for (int i = 0; i < s.col_count(); ++i) {
            if (i) out << ',';
            csv_field(out, s.col_text(i));
        }
        out << '\n';
    }
    if (!header_done) {
        // empty table: still emit the header row
        Stmt info(db_, "SELECT name FROM pragma_table_info('" + table + "')");
        bool first = true;
        while (info.step()) {
            if (!first) out << ',';
            csv_field(out, info.col_text(0));
            first = false;
        }
        out << '\n';
    }
}

}  // namespace tokmine
