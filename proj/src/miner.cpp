#include "tokmine/miner.hpp"

#include <atomic>
#include <condition_variable>
#include <iostream>
#include <mutex>
#include <optional>
#include <thread>

#include "tokmine/lexer.hpp"

namespace tokmine {

std::vector<LineUnit> diffable_lines(const std::string& source, Language language) {
    const std::string stripped = strip_comments_linewise(source, language);
    std::vector<LineUnit> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= source.size(); ++i) {
        if (i != source.size() && source[i] != '\n') continue;
        LineUnit unit;
        unit.text = source.substr(start, i - start);
        if (!unit.text.empty() && unit.text.back() == '\r') unit.text.pop_back();
        for (std::size_t k = start; k < i; ++k) {
            const char c = stripped[k];
            if (c != ' ' && c != '\t' && c != '\r' && c != '\v' && c != '\f')
                unit.key += c;
        }
        if (!unit.key.empty()) out.push_back(std::move(unit));
        start = i + 1;
    }
    return out;
}

bool diff_file(const std::string& path, Language language, const std::string& old_text,
               const std::string& new_text, FileChange& out, std::string* warn) {
    const std::string old_src = sanitize_utf8(old_text);
    const std::string new_src = sanitize_utf8(new_text);

    out.path = path;
    out.language = language;
    out.line_diff = diff<LineUnit, LineUnitEq>(diffable_lines(old_src, language),
                                               diffable_lines(new_src, language));
    if (out.line_diff.empty()) return false;  // comment/whitespace-only change

    const TokenizedFile old_tok = lex(old_src, language);
    const TokenizedFile new_tok = lex(new_src, language);
    if (old_tok.recovered || new_tok.recovered) {
        if (warn) *warn = "lexer recovery in " + path + ", file skipped";
        return false;
    }
    out.token_diff = diff<Token, TokenContentEq>(old_tok.tokens, new_tok.tokens);
    return true;
}

namespace {

std::optional<CommitRecord> process_commit(HistoryReader& history, const MineConfig& config,
                                           const CommitMeta& meta) {
    CommitRecord record;
    record.commit_id = meta.id;
    record.message = meta.message;
    record.timestamp = meta.timestamp;
    record.is_merge = meta.is_merge();

    for (const std::string& path : history.changed_paths(meta.id)) {
        Language lang;
        if (!config.classify_path(path, lang)) continue;
        const auto [old_text, new_text] = history.file_pair(meta.id, path);
        FileChange change;
        std::string warn;
        if (diff_file(path, lang, old_text, new_text, change, &warn)) {
            record.files.push_back(std::move(change));
        } else if (!warn.empty()) {
            std::cerr << "warning: " << warn << " (commit " << meta.id << ")\n";
        }
    }
    if (record.files.empty()) return std::nullopt;
    return record;
}

}  // namespace

void mine(HistoryReader& history, const MineConfig& config,
          const std::function<void(CommitRecord)>& sink,
          const std::function<bool(const std::string&)>& skip) {
    std::vector<CommitMeta> commits = history.log();
    if (config.max_commits > 0 && commits.size() > config.max_commits)
        commits.resize(config.max_commits);

    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < commits.size(); ++i) {
        if (!config.include_merges && commits[i].is_merge()) continue;
        if (skip && skip(commits[i].id)) continue;
        todo.push_back(i);
    }

    const unsigned jobs = std::max(1u, config.jobs);
    if (jobs == 1 || todo.size() < 2) {
        for (std::size_t i : todo) {
            if (auto record = process_commit(history, config, commits[i]))
                sink(std::move(*record));
        }
        return;
    }

    // Workers fill result slots; emission is re-serialized to history order.
    std::vector<std::optional<CommitRecord>> results(todo.size());
    std::vector<char> done(todo.size(), 0);
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::condition_variable cv;
    std::exception_ptr failure;

    const auto worker = [&] {
        for (;;) {
            const std::size_t slot = next.fetch_add(1);
            if (slot >= todo.size()) return;
            std::optional<CommitRecord> record;
            try {
                record = process_commit(history, config, commits[todo[slot]]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!failure) failure = std::current_exception();
            }
            {
                std::lock_guard<std::mutex> lock(mu);
                results[slot] = std::move(record);
                done[slot] = 1;
            }
            cv.notify_all();
        }
    };

    std::vector<std::thread> pool;
    for (unsigned w = 0; w < std::min<std::size_t>(jobs, todo.size()); ++w)
        pool.emplace_back(worker);

    std::size_t emitted = 0;
    {
        std::unique_lock<std::mutex> lock(mu);
        while (emitted < todo.size()) {
            cv.wait(lock, [&] { return done[emitted] || failure; });
            if (failure) break;
            if (results[emitted]) {
                CommitRecord record = std::move(*results[emitted]);
                results[emitted].reset();
                lock.unlock();
                sink(std::move(record));
                lock.lock();
            }
            ++emitted;
        }
    }
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace tokmine
