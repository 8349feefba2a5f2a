// Acceptance suite: runs each top-level requirement end to end and prints one
// PASS/FAIL line per criterion. Exits non-zero if any required criterion
// fails. Criterion 7 needs a local Zephyr checkout (TOKMINE_ZEPHYR_REPO) and
// is reported as SKIP when absent; criterion 8 needs external gold labels
// (TOKMINE_GOLD_CSV) and otherwise falls back to criterion 1's exact matches.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <iomanip>
#include <sstream>
#include <vector>

#include "git_fixture.hpp"
#include "golden_messages.hpp"
#include "scenario_fixtures.hpp"
#include "tokmine/analytics.hpp"
#include "tokmine/detect.hpp"
#include "tokmine/lexer.hpp"
#include "tokmine/maintenance.hpp"
#include "tokmine/pipeline.hpp"
#include "tokmine/taxonomy.hpp"

using namespace tokmine;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

struct Criterion {
    std::string name;
    double budget_seconds;
    std::function<bool(std::string&)> body;
};

void run_criterion(const Criterion& c) {
    std::string detail;
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
        ok = c.body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (ok && c.budget_seconds > 0 && elapsed > c.budget_seconds) {
        ok = false;
        detail += " (exceeded " + std::to_string(c.budget_seconds) + "s budget)";
    }
    std::ostringstream line;
    line << (ok ? "PASS" : "FAIL") << "  " << c.name;
    if (!detail.empty()) line << "  [" << detail << "]";
    line << "  (" << elapsed << "s)";
    std::cout << line.str() << "\n";
    if (!ok) ++g_failures;
}

struct TempDb {
    std::string path;
    TempDb() {
        static int counter = 0;
        path = (fs::temp_directory_path() /
                ("tokmine-acc-" + std::to_string(::getpid()) + "-" +
                 std::to_string(counter++) + ".sqlite"))
                   .string();
    }
    ~TempDb() {
        std::error_code ec;
        fs::remove(path, ec);
        fs::remove(path + "-wal", ec);
        fs::remove(path + "-shm", ec);
    }
};

bool expect(bool cond, const std::string& what, std::string& detail) {
    if (!cond && detail.empty()) detail = what;
    return cond;
}

// ---------------------------------------------------------------------------
// 1. Scenario fixture repository end to end: verdicts, token counts, taxonomy.
// ---------------------------------------------------------------------------
bool criterion_scenarios(std::string& detail) {
    fixtures::GitRepo repo;
    fixtures::populate_scenario_repo(repo);
    TempDb db;
    RunConfig config;
    config.repo_path = repo.path();
    config.db_path = db.path;
    run_pipeline(config);

    Store store(db.path);
    std::map<std::string, std::string> id_by_message;
    for (const CommitSummary& row : store.all_commits())
        id_by_message[row.message.substr(0, row.message.find('\n'))] = row.commit_id;

    std::set<std::string> detector_micro, detector_one_line;
    for (const auto& [id, label] : store.all_labels("detector")) {
        if (label == "micro") detector_micro.insert(id);
        if (label == "one_line") detector_one_line.insert(id);
    }

    std::size_t taxonomy_checked = 0;
    bool ok = true;
    for (const auto& scenario : fixtures::scenarios()) {
        const auto it = id_by_message.find(scenario.message);
        if (!expect(it != id_by_message.end(), "commit missing: " + scenario.message, detail))
            return false;
        const std::string& id = it->second;
        const auto summary = store.query("commit_id = '" + id + "'");
        ok = ok && expect(summary.size() == 1, "summary missing", detail);
        if (!ok) return false;
        ok = ok && expect(static_cast<std::size_t>(summary[0].n_tokens_added) ==
                              scenario.expect_tokens_added,
                          scenario.message + ": wrong added count", detail);
        ok = ok && expect(static_cast<std::size_t>(summary[0].n_tokens_removed) ==
                              scenario.expect_tokens_removed,
                          scenario.message + ": wrong removed count", detail);
        ok = ok && expect(detector_micro.count(id) == (scenario.expect_micro ? 1u : 0u),
                          scenario.message + ": micro verdict", detail);
        ok = ok && expect(detector_one_line.count(id) == (scenario.expect_one_line ? 1u : 0u),
                          scenario.message + ": one-line verdict", detail);
        if (!scenario.expect_operation.empty()) {
            std::string op, target;
            std::set<std::string> pairs;
            for (const std::string& label : store.labels(id, "taxonomy")) {
                if (label.rfind("operation:", 0) == 0) op = label.substr(10);
                else if (label.rfind("target:", 0) == 0) target = label.substr(7);
                else if (label.rfind("pair:", 0) == 0) pairs.insert(label.substr(5));
            }
            ok = ok && expect(op == scenario.expect_operation,
                              scenario.message + ": operation " + op, detail);
            ok = ok && expect(target == scenario.expect_target,
                              scenario.message + ": target " + target, detail);
            for (const std::string& pair : scenario.expect_pairs)
                ok = ok && expect(pairs.count(pair) == 1,
                                  scenario.message + ": missing pair " + pair, detail);
            ++taxonomy_checked;
        }
        if (!ok) return false;
    }
    ok = ok && expect(taxonomy_checked == 14, "expected 14 labeled scenarios", detail);

    // the staticized-declaration scenario adds exactly the token "static"
    bool static_token_seen = false;
    store.for_each_token_change([&](const Store::TokenChangeRow& row) {
        if (row.commit_id == id_by_message["bt878: make card_list static"])
            static_token_seen = row.sign == '+' && row.token_text == "static" &&
                                row.token_type == "specifier";
    });
    ok = ok && expect(static_token_seen, "added token is not specifier/static", detail);
    return ok;
}

// ---------------------------------------------------------------------------
// 2. Diff minimality against a DP/LCS oracle plus long round-trips.
// ---------------------------------------------------------------------------
std::size_t lcs_length(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j)
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

bool criterion_diff(std::string& detail) {
    std::mt19937 rng(424242);
    const auto random_seq = [&](std::size_t max_len, int alphabet) {
        std::vector<int> s(rng() % (max_len + 1));
        for (int& v : s) v = static_cast<int>(rng() % alphabet);
        return s;
    };
    for (int iter = 0; iter < 1000; ++iter) {
        const auto a = random_seq(12, 4);
        const auto b = random_seq(12, 4);
        const auto d = diff(a, b);
        if (d.n_added + d.n_removed != a.size() + b.size() - 2 * lcs_length(a, b)) {
            detail = "non-minimal script at iteration " + std::to_string(iter);
            return false;
        }
        if (apply_diff(a, d) != b) {
            detail = "round-trip failed at iteration " + std::to_string(iter);
            return false;
        }
    }
    for (int iter = 0; iter < 1000; ++iter) {
        const auto a = random_seq(200, 6);
        const auto b = random_seq(200, 6);
        if (apply_diff(a, diff(a, b)) != b) {
            detail = "long round-trip failed at iteration " + std::to_string(iter);
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// 3. Lexer lossless partition over the vendored corpus.
// ---------------------------------------------------------------------------
bool tiles_exactly(const std::string& src, const TokenizedFile& f, std::string& why) {
    struct Span {
        std::size_t start, len;
        const Token* token;
    };
    std::vector<Span> spans;
    for (const Token& t : f.tokens) spans.push_back({t.byte_offset, t.text.size(), &t});
    for (const DiscardedSpan& d : f.discarded) spans.push_back({d.byte_offset, d.length, nullptr});
    std::sort(spans.begin(), spans.end(),
              [](const Span& a, const Span& b) { return a.start < b.start; });
    std::size_t pos = 0;
    for (const Span& s : spans) {
        if (s.start != pos) {
            why = "gap/overlap at byte " + std::to_string(pos);
            return false;
        }
        if (s.token && src.substr(s.start, s.len) != s.token->text) {
            why = "token text mismatch at byte " + std::to_string(s.start);
            return false;
        }
        pos = s.start + s.len;
    }
    if (pos != src.size()) {
        why = "trailing bytes uncovered from " + std::to_string(pos);
        return false;
    }
    return true;
}

bool criterion_lexer(std::string& detail) {
    const auto seq = lex("int i;", Language::C);
    std::ostringstream rendered;
    for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
        if (i) rendered << ", ";
        rendered << to_string(seq.tokens[i].type) << "|" << seq.tokens[i].text;
    }
    if (rendered.str() != "name|int, name|i, decl_stmt|;") {
        detail = "unexpected sequence: " + rendered.str();
        return false;
    }

    const fs::path corpus = fs::path(TOKMINE_TEST_DATA_DIR) / "corpus";
    std::size_t n_files = 0;
    for (const char* sub : {"c", "java"}) {
        for (const auto& entry : fs::directory_iterator(corpus / sub)) {
            if (!entry.is_regular_file()) continue;
            std::ifstream in(entry.path(), std::ios::binary);
            std::ostringstream buf;
            buf << in.rdbuf();
            const std::string src = sanitize_utf8(buf.str());
            const Language lang = std::string(sub) == "c" ? Language::C : Language::Java;
            const TokenizedFile f = lex(src, lang);
            std::string why;
            if (!tiles_exactly(src, f, why)) {
                detail = entry.path().filename().string() + ": " + why;
                return false;
            }
            ++n_files;
        }
    }
    if (n_files < 50) {
        detail = "corpus too small: " + std::to_string(n_files) + " files";
        return false;
    }
    detail = std::to_string(n_files) + " files tiled byte-exactly";
    return true;
}

// ---------------------------------------------------------------------------
// 4. Maintenance classifier golden table.
// ---------------------------------------------------------------------------
bool criterion_maintenance(std::string& detail) {
    if (fixtures::golden_messages().size() < 30) {
        detail = "golden table too small";
        return false;
    }
    for (const auto& golden : fixtures::golden_messages()) {
        const auto got = classify_maintenance(golden.message);
        const bool corrective = got.count(MaintenanceCategory::Corrective) > 0;
        const bool adaptive = got.count(MaintenanceCategory::Adaptive) > 0;
        const bool perfective = got.count(MaintenanceCategory::Perfective) > 0;
        if (corrective != golden.corrective || adaptive != golden.adaptive ||
            perfective != golden.perfective) {
            detail = "label mismatch for: " + golden.message;
            return false;
        }
    }
    detail = std::to_string(fixtures::golden_messages().size()) + " messages exact";
    return true;
}

// ---------------------------------------------------------------------------
// 5. Methodological statistics.
// ---------------------------------------------------------------------------
bool criterion_stats(std::string& detail) {
    if (sample_size(150967, 95, 5) != 383) {
        detail = "sample_size(150967,95,5) != 383";
        return false;
    }
    RaterMatrix m;
    m.counts = {{2, 1}, {0, 3}};
    if (std::abs(fleiss_kappa(m) - 0.25) > 1e-9) {
        detail = "kappa example drifted";
        return false;
    }
    for (double k : {0.686, 0.669, 0.754}) {
        if (kappa_interpretation(k) != "substantial agreement") {
            detail = "interpretation wrong for " + std::to_string(k);
            return false;
        }
    }
    if (kappa_interpretation(0.832) != "almost perfect agreement") {
        detail = "interpretation wrong for 0.832";
        return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// 6. Analytics against a brute-force recount over a synthetic corpus.
// ---------------------------------------------------------------------------
bool criterion_aggregates(std::string& detail) {
    std::mt19937 rng(777001);
    TempDb db;
    Store store(db.path);
    std::vector<CommitRecord> records;
    const char* type_pool[] = {"name", "literal", "operator", "argument_list",
                               "expr_stmt", "block", "specifier"};
    const char* word_pool[] = {"fix", "overflow", "add", "probe", "update",
                               "tune", "rework", "speed", "limit", "polish"};
    for (std::size_t i = 0; i < 1000; ++i) {
        CommitRecord record;
        std::ostringstream id;
        id << std::hex << std::setw(8) << std::setfill('0') << i;
        record.commit_id = id.str() + std::string(32, 'e');
        record.timestamp = 1500000000 + static_cast<std::int64_t>(i);
        const std::size_t words = 1 + rng() % 4;
        for (std::size_t w = 0; w < words; ++w)
            record.message += std::string(w ? " " : "") + word_pool[rng() % 10];
        const std::size_t n_files = 1 + rng() % 3;
        for (std::size_t f = 0; f < n_files; ++f) {
            FileChange change;
            change.path = "f" + std::to_string(f) + ".c";
            const std::size_t n_hunks = rng() % 4;
            std::size_t old_pos = 0, new_pos = 0;
            for (std::size_t h = 0; h < n_hunks; ++h) {
                Hunk<Token> hunk;
                old_pos += 1 + rng() % 5;
                new_pos += 1 + rng() % 5;
                hunk.old_start = old_pos;
                hunk.new_start = new_pos;
                const std::size_t n_rem = rng() % 4;
                const std::size_t n_add = n_rem == 0 ? 1 + rng() % 4 : rng() % 4;
                TokenType type;
                for (std::size_t k = 0; k < n_rem; ++k) {
                    token_type_from_string(type_pool[rng() % 7], type);
                    hunk.removed.push_back(
                        Token{type, "t" + std::to_string(rng() % 9), 0, int(h * 9 + 1)});
                }
                for (std::size_t k = 0; k < n_add; ++k) {
                    token_type_from_string(type_pool[rng() % 7], type);
                    hunk.added.push_back(
                        Token{type, "t" + std::to_string(rng() % 9), 0, int(h * 9 + 1)});
                }
                old_pos += hunk.removed.size();
                new_pos += hunk.added.size();
                change.token_diff.n_removed += hunk.removed.size();
                change.token_diff.n_added += hunk.added.size();
                change.token_diff.hunks.push_back(std::move(hunk));
            }
            Hunk<LineUnit> lh;
            lh.removed.push_back({"o", "o" + std::to_string(rng() % 4)});
            lh.added.push_back({"n", "n" + std::to_string(rng() % 4)});
            change.line_diff.n_removed = 1;
            change.line_diff.n_added = 1;
            change.line_diff.hunks.push_back(std::move(lh));
            record.files.push_back(std::move(change));
        }
        records.push_back(std::move(record));
    }

    store.begin_batch();
    std::set<std::string> micro_ids, one_line_ids, corrective_ids;
    for (const CommitRecord& record : records) {
        store.put(record);
        std::vector<std::string> detector;
        if (detect_one_line(record)) {
            detector.push_back("one_line");
            one_line_ids.insert(record.commit_id);
        }
        if (detect_micro(record)) {
            detector.push_back("micro");
            micro_ids.insert(record.commit_id);
        }
        if (detect_one_token(record)) detector.push_back("one_token");
        store.set_labels(record.commit_id, "detector", detector);
        std::vector<std::string> maint;
        for (MaintenanceCategory c : classify_maintenance(record.message))
            maint.emplace_back(to_string(c));
        if (!maint.empty() &&
            classify_maintenance(record.message).count(MaintenanceCategory::Corrective))
            corrective_ids.insert(record.commit_id);
        store.set_labels(record.commit_id, "maintenance", maint);
    }
    store.commit_batch();

    // heatmap recount
    {
        const Heatmap h = heatmap(store, Population::AllStudied);
        std::size_t tail = 0;
        std::vector<std::vector<std::size_t>> expect(11, std::vector<std::size_t>(11, 0));
        for (const CommitRecord& r : records) {
            const std::size_t a = r.total_tokens_added();
            const std::size_t b = r.total_tokens_removed();
            if (a <= 10 && b <= 10) ++expect[a][b];
            else ++tail;
        }
        if (h.tail_count != tail) {
            detail = "heatmap tail mismatch";
            return false;
        }
        for (std::size_t a = 0; a <= 10; ++a)
            for (std::size_t b = 0; b <= 10; ++b)
                if (h.counts[a][b] != expect[a][b]) {
                    detail = "heatmap cell mismatch";
                    return false;
                }
    }
    // accumulated curve recount
    {
        const AccumCurve curve = accum_curve(store, Population::AllStudied);
        for (std::size_t t = 0; t < curve.cumulative.size(); ++t) {
            std::size_t expect = 0;
            for (const CommitRecord& r : records)
                if (std::max(r.total_tokens_added(), r.total_tokens_removed()) <= t) ++expect;
            if (curve.cumulative[t] != expect) {
                detail = "accumulated curve mismatch at t=" + std::to_string(t);
                return false;
            }
        }
    }
    // hunk distribution recount
    {
        const AccumCurve curve = hunk_distribution(store, Population::Micro);
        for (std::size_t t = 0; t < curve.cumulative.size(); ++t) {
            std::size_t expect = 0;
            for (const CommitRecord& r : records)
                if (micro_ids.count(r.commit_id) && r.total_token_hunks() <= t) ++expect;
            if (curve.cumulative[t] != expect) {
                detail = "hunk distribution mismatch";
                return false;
            }
        }
    }
    // token type frequency recount
    {
        const FrequencyTable table = token_frequencies(store, FrequencyScope::Types);
        std::map<std::string, std::size_t> expect;
        for (const CommitRecord& r : records) {
            if (!micro_ids.count(r.commit_id)) continue;
            for (const FileChange& f : r.files)
                for (const auto& hunk : f.token_diff.hunks) {
                    for (const Token& t : hunk.removed) ++expect[std::string(to_string(t.type))];
                    for (const Token& t : hunk.added) ++expect[std::string(to_string(t.type))];
                }
        }
        if (table.rows.size() != expect.size()) {
            detail = "token frequency row count mismatch";
            return false;
        }
        for (const auto& row : table.rows)
            if (expect[row.key] != row.n) {
                detail = "token frequency mismatch for " + row.key;
                return false;
            }
    }
    // modification pattern recount
    {
        const FrequencyTable table = modification_patterns(store);
        std::size_t total = 0;
        for (const auto& row : table.rows) total += row.n;
        if (total != micro_ids.size() || table.denominator != micro_ids.size()) {
            detail = "pattern totals mismatch";
            return false;
        }
    }
    // intersection recount
    {
        const IntersectionStats stats = intersection(store);
        std::size_t expect_intersect = 0;
        for (const std::string& id : one_line_ids)
            if (micro_ids.count(id)) ++expect_intersect;
        if (stats.n_intersect != expect_intersect || stats.n_micro != micro_ids.size() ||
            stats.n_one_line != one_line_ids.size()) {
            detail = "intersection mismatch";
            return false;
        }
    }
    // corrective proportion recount
    {
        const CorrectiveComparison c = corrective_comparison(store);
        std::size_t micro_corr = 0, non_micro_corr = 0;
        for (const CommitRecord& r : records) {
            const bool corr = corrective_ids.count(r.commit_id) > 0;
            if (micro_ids.count(r.commit_id)) micro_corr += corr;
            else non_micro_corr += corr;
        }
        if (c.n_corrective_micro != micro_corr || c.n_corrective_non_micro != non_micro_corr) {
            detail = "corrective comparison mismatch";
            return false;
        }
    }
    if (!store.audit().empty()) {
        detail = "store audit found inconsistencies";
        return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// 7. Optional repository-scale replication (needs a local checkout).
// ---------------------------------------------------------------------------
bool criterion_replication(std::string& detail) {
    const char* repo = std::getenv("TOKMINE_ZEPHYR_REPO");
    if (!repo || !*repo) {
        detail = "SKIP: set TOKMINE_ZEPHYR_REPO to a local checkout to run";
        return true;
    }
    TempDb db;
    RunConfig config;
    config.repo_path = repo;
    config.db_path = db.path;
    config.mine.jobs = 8;
    const PipelineSummary summary = run_pipeline(config);
    if (summary.n_studied == 0) {
        detail = "no studied commits";
        return false;
    }
    const double one_line_pct = 100.0 * double(summary.n_one_line) / double(summary.n_studied);
    const double micro_pct = 100.0 * double(summary.n_micro) / double(summary.n_studied);
    std::ostringstream os;
    os << "one-line " << one_line_pct << "% (expect ~7.75±2), micro " << micro_pct
       << "% (expect ~17.95±2), studied " << summary.n_studied;
    detail = os.str();
    return std::abs(one_line_pct - 7.75) <= 2.0 && std::abs(micro_pct - 17.95) <= 2.0;
}

// ---------------------------------------------------------------------------
// 8. Conditional gold-label accuracy; without gold data the criterion is the
//    14 exact fixture labels from criterion 1.
// ---------------------------------------------------------------------------
bool criterion_gold(std::string& detail) {
    const char* gold = std::getenv("TOKMINE_GOLD_CSV");
    const char* repo = std::getenv("TOKMINE_ZEPHYR_REPO");
    if (!gold || !*gold || !repo || !*repo) {
        // fall back: re-run the 14 labeled fixtures directly
        std::size_t matched = 0;
        for (const auto& scenario : fixtures::scenarios()) {
            if (scenario.expect_operation.empty()) continue;
            const CommitRecord record = fixtures::record_for(scenario);
            const TaxonomyLabel label = classify_taxonomy(record);
            if (label.operation_name() != scenario.expect_operation ||
                label.target_name() != scenario.expect_target) {
                detail = "fixture label mismatch: " + scenario.message;
                return false;
            }
            ++matched;
        }
        detail = "no external gold labels; " + std::to_string(matched) +
                 "/14 fixture labels exact";
        return matched == 14;
    }
    TempDb db;
    RunConfig config;
    config.repo_path = repo;
    config.db_path = db.path;
    run_pipeline(config);
    Store store(db.path);
    std::size_t n = 0, correct = 0;
    for (const GoldRow& row : load_gold_csv(gold)) {
        std::string op, target;
        for (const std::string& label : store.labels(row.commit_id, "taxonomy")) {
            if (label.rfind("operation:", 0) == 0) op = label.substr(10);
            if (label.rfind("target:", 0) == 0) target = label.substr(7);
        }
        if (op.empty()) continue;
        ++n;
        if (op == row.operation && target == row.target) ++correct;
    }
    const double accuracy = n ? double(correct) / double(n) : 0.0;
    detail = "accuracy " + std::to_string(accuracy * 100) + "% on " + std::to_string(n) +
             " gold rows";
    return accuracy >= 0.70;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"1 scenario fixtures end to end", 5.0, criterion_scenarios},
        {"2 diff minimality and round-trip", 30.0, criterion_diff},
        {"3 lexer lossless partition", 0.0, criterion_lexer},
        {"4 maintenance classifier goldens", 0.0, criterion_maintenance},
        {"5 statistics", 0.0, criterion_stats},
        {"6 aggregates vs brute force", 60.0, criterion_aggregates},
        {"7 repository-scale replication (optional)", 0.0, criterion_replication},
        {"8 taxonomy gold accuracy (conditional)", 0.0, criterion_gold},
    };
    for (const Criterion& c : criteria) run_criterion(c);
    if (g_failures) {
        std::cout << g_failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all criteria satisfied\n";
    return 0;
}
