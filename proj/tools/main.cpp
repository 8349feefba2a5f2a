#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "tokmine/analytics.hpp"
#include "tokmine/history.hpp"
#include "tokmine/pipeline.hpp"
#include "tokmine/taxonomy.hpp"

namespace {

using namespace tokmine;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRepo = 3;
constexpr int kExitStorage = 4;

std::string default_db() {
    const char* env = std::getenv("TOKMINE_DB");
    return env ? env : "";
}

// run-file settings: `key = value` lines, '#' comments, optional quotes.
std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw ConfigError("cannot read config file: " + path);
    std::map<std::string, std::string> values;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos || line[start] == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        std::string key = line.substr(start, eq - start);
        key.erase(key.find_last_not_of(" \t") + 1);
        std::string value = line.substr(eq + 1);
        const std::size_t vstart = value.find_first_not_of(" \t");
        value = vstart == std::string::npos ? "" : value.substr(vstart);
        value.erase(value.find_last_not_of(" \t\r") + 1);
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        values[key] = value;
    }
    return values;
}

struct CommonMineOptions {
    std::string repo;
    std::string db = default_db();
    std::string languages = "c,java";
    std::vector<std::string> extra_extensions;
    bool include_merges = false;
    std::size_t max_commits = 0;
    unsigned jobs = 4;

    void attach(CLI::App& app, bool with_repo = true) {
        if (with_repo)
            app.add_option("--repo", repo, "path to a local git repository")->required();
        app.add_option("--db", db, "database file path (default: $TOKMINE_DB)");
        app.add_option("--languages", languages, "comma-separated subset of c,java");
        app.add_option("--ext", extra_extensions,
                       "extra extension mapping, e.g. --ext .cc=c (repeatable)");
        app.add_flag("--include-merges", include_merges,
                     "diff merge commits against their first parent");
        app.add_option("--max-commits", max_commits, "stop after N commits (0 = all)");
        app.add_option("--jobs", jobs, "mining worker threads");
    }

    MineConfig to_mine_config() const {
        MineConfig config;
        config.languages.clear();
        std::stringstream ss(languages);
        std::string item;
        while (std::getline(ss, item, ',')) {
            Language lang;
            if (!language_from_string(item, lang))
                throw ConfigError("unknown language: " + item);
            config.languages.push_back(lang);
        }
        for (const std::string& mapping : extra_extensions) {
            const std::size_t eq = mapping.find('=');
            if (eq == std::string::npos)
                throw ConfigError("extension mapping must look like .cc=c");
            Language lang;
            if (!language_from_string(mapping.substr(eq + 1), lang))
                throw ConfigError("unknown language in mapping: " + mapping);
            config.extensions.emplace_back(mapping.substr(0, eq), lang);
        }
        config.include_merges = include_merges;
        config.max_commits = max_commits;
        config.jobs = jobs;
        return config;
    }
};

struct DetectorOptions {
    std::size_t threshold = 5;
    std::string asym;
    bool no_file_condition = false;

    void attach(CLI::App& app) {
        app.add_option("--threshold", threshold, "micro-commit token threshold (default 5)");
        app.add_option("--asym", asym, "asymmetric thresholds as ADDED:REMOVED, e.g. 3:5");
        app.add_flag("--no-file-condition", no_file_condition,
                     "drop the single-changed-file requirement");
    }

    DetectorConfig to_config() const {
        DetectorConfig config;
        config.added_threshold = threshold;
        config.removed_threshold = threshold;
        if (!asym.empty()) {
            const std::size_t colon = asym.find(':');
            if (colon == std::string::npos)
                throw ConfigError("--asym expects ADDED:REMOVED");
            config.added_threshold = std::stoul(asym.substr(0, colon));
            config.removed_threshold = std::stoul(asym.substr(colon + 1));
        }
        config.require_single_file = !no_file_condition;
        return config;
    }
};

std::string require_db(const std::string& db) {
    if (db.empty())
        throw ConfigError("no database path: pass --db or set TOKMINE_DB");
    return db;
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file.good()) throw ConfigError("cannot write output file: " + path);
    return file;
}

int run_main(int argc, char** argv) {
    CLI::App app{"token-level commit mining and analysis"};
    app.require_subcommand(1);

    // --- run ---------------------------------------------------------------
    auto* run_cmd = app.add_subcommand("run", "ingest, detect, classify and summarize");
    CommonMineOptions run_mine;
    DetectorOptions run_detector;
    std::string run_keywords;
    std::string run_match = "token";
    std::string run_config_file;
    run_mine.attach(*run_cmd, /*with_repo=*/false);
    run_cmd->add_option("--repo", run_mine.repo, "path to a local git repository");
    run_detector.attach(*run_cmd);
    run_cmd->add_option("--keywords", run_keywords, "keyword list file (TOML)");
    run_cmd->add_option("--match", run_match, "keyword match mode: token|whole");
    run_cmd->add_option("--config", run_config_file,
                        "settings file (key = value lines); flags override it");

    // --- ingest --------------------------------------------------------------
    auto* ingest_cmd = app.add_subcommand("ingest", "mine a repository into the database");
    CommonMineOptions ingest_mine;
    ingest_mine.attach(*ingest_cmd);

    // --- detect --------------------------------------------------------------
    auto* detect_cmd = app.add_subcommand("detect", "write detector labels");
    std::string detect_db = default_db();
    DetectorOptions detect_detector;
    detect_cmd->add_option("--db", detect_db, "database file path");
    detect_detector.attach(*detect_cmd);

    // --- classify ------------------------------------------------------------
    auto* classify_cmd = app.add_subcommand("classify", "write classifier labels");
    classify_cmd->require_subcommand(1);
    auto* maint_cmd = classify_cmd->add_subcommand("maintenance", "keyword categories");
    std::string maint_db = default_db();
    std::string maint_keywords;
    std::string maint_match = "token";
    maint_cmd->add_option("--db", maint_db, "database file path");
    maint_cmd->add_option("--keywords", maint_keywords, "keyword list file (TOML)");
    maint_cmd->add_option("--match", maint_match, "keyword match mode: token|whole");
    auto* taxo_cmd = classify_cmd->add_subcommand("taxonomy", "operation and target labels");
    std::string taxo_db = default_db();
    std::string taxo_gold;
    DetectorOptions taxo_detector;
    taxo_cmd->add_option("--db", taxo_db, "database file path");
    taxo_cmd->add_option("--gold", taxo_gold,
                         "CSV of commit_id,operation,target to score accuracy against");
    taxo_detector.attach(*taxo_cmd);

    // --- report ----------------------------------------------------------------
    auto* report_cmd = app.add_subcommand("report", "aggregate tables");
    std::string report_db = default_db();
    std::string report_table;
    std::string report_population = "micro";
    std::string report_format = "csv";
    std::string report_scope = "types";
    std::string report_out;
    std::size_t report_max_axis = 10;
    report_cmd->add_option("--db", report_db, "database file path");
    report_cmd
        ->add_option("--table", report_table,
                     "one of: heatmap, accum, tokens, patterns, intersection,"
                     " corrective, hunks, taxonomy")
        ->required();
    report_cmd->add_option("--population", report_population, "all|one_line|micro");
    report_cmd->add_option("--format", report_format, "csv|json");
    report_cmd->add_option("--scope", report_scope, "tokens table scope: types|tokens");
    report_cmd->add_option("--max-axis", report_max_axis, "heatmap axis bound");
    report_cmd->add_option("--out", report_out, "output file (default stdout)");

    // --- stats ------------------------------------------------------------------
    auto* stats_cmd = app.add_subcommand("stats", "methodological statistics");
    stats_cmd->require_subcommand(1);
    auto* kappa_cmd = stats_cmd->add_subcommand("kappa", "Fleiss' kappa from a rating matrix");
    std::string kappa_matrix;
    kappa_cmd->add_option("--matrix", kappa_matrix, "CSV of subject x category counts")
        ->required();
    auto* size_cmd = stats_cmd->add_subcommand("samplesize", "minimum sample size");
    std::size_t size_population = 0;
    int size_confidence = 95;
    double size_interval = 5.0;
    size_cmd->add_option("population", size_population, "population size")->required();
    size_cmd->add_option("confidence", size_confidence, "confidence level: 90|95|99")
        ->required();
    size_cmd->add_option("interval", size_interval, "confidence interval in percent")
        ->required();

    // --- export / audit ------------------------------------------------------------
    auto* export_cmd = app.add_subcommand("export", "dump a table as CSV");
    std::string export_db = default_db();
    std::string export_table;
    std::string export_out;
    export_cmd->add_option("--db", export_db, "database file path");
    export_cmd->add_option("--table", export_table, "table name")->required();
    export_cmd->add_option("--out", export_out, "output file (default stdout)");

    auto* audit_cmd = app.add_subcommand("audit", "check aggregate consistency");
    std::string audit_db = default_db();
    audit_cmd->add_option("--db", audit_db, "database file path");

    CLI11_PARSE(app, argc, argv);

    const auto match_mode = [](const std::string& mode) {
        if (mode == "token") return MatchMode::PerToken;
        if (mode == "whole") return MatchMode::WholeString;
        throw ConfigError("--match must be token or whole");
    };

    if (run_cmd->parsed()) {
        if (!run_config_file.empty()) {
            const auto file = read_config_file(run_config_file);
            const auto take = [&](const char* key, const std::string& flag_name,
                                  auto apply) {
                const auto it = file.find(key);
                if (it != file.end() && run_cmd->count(flag_name) == 0) apply(it->second);
            };
            take("repo", "--repo", [&](const std::string& v) { run_mine.repo = v; });
            take("db", "--db", [&](const std::string& v) { run_mine.db = v; });
            take("languages", "--languages",
                 [&](const std::string& v) { run_mine.languages = v; });
            take("include_merges", "--include-merges",
                 [&](const std::string& v) { run_mine.include_merges = v == "true"; });
            take("max_commits", "--max-commits",
                 [&](const std::string& v) { run_mine.max_commits = std::stoul(v); });
            take("jobs", "--jobs", [&](const std::string& v) {
                run_mine.jobs = static_cast<unsigned>(std::stoul(v));
            });
            take("threshold", "--threshold",
                 [&](const std::string& v) { run_detector.threshold = std::stoul(v); });
            take("asym", "--asym", [&](const std::string& v) { run_detector.asym = v; });
            take("no_file_condition", "--no-file-condition", [&](const std::string& v) {
                run_detector.no_file_condition = v == "true";
            });
            take("keywords", "--keywords", [&](const std::string& v) { run_keywords = v; });
            take("match", "--match", [&](const std::string& v) { run_match = v; });
        }
        if (run_mine.repo.empty())
            throw ConfigError("no repository: pass --repo or put repo= in --config");
        RunConfig config;
        config.repo_path = run_mine.repo;
        config.db_path = require_db(run_mine.db);
        config.mine = run_mine.to_mine_config();
        config.detector = run_detector.to_config();
        config.keywords_file = run_keywords;
        config.match_mode = match_mode(run_match);
        const PipelineSummary summary = run_pipeline(config);
        std::cout << summary.to_json() << "\n";
        return kExitOk;
    }
    if (ingest_cmd->parsed()) {
        RunConfig config;
        config.repo_path = ingest_mine.repo;
        config.db_path = require_db(ingest_mine.db);
        config.mine = ingest_mine.to_mine_config();
        Store store(config.db_path);
        const std::size_t n = stage_ingest(store, config);
        std::cerr << "ingested " << n << " commits\n";
        return kExitOk;
    }
    if (detect_cmd->parsed()) {
        Store store(require_db(detect_db));
        stage_detect(store, detect_detector.to_config());
        std::cout << summarize(store).to_json() << "\n";
        return kExitOk;
    }
    if (maint_cmd->parsed()) {
        Store store(require_db(maint_db));
        const KeywordScheme scheme = maint_keywords.empty()
                                         ? KeywordScheme::defaults()
                                         : KeywordScheme::from_toml_file(maint_keywords);
        stage_classify_maintenance(store, scheme, match_mode(maint_match));
        return kExitOk;
    }
    if (taxo_cmd->parsed()) {
        Store store(require_db(taxo_db));
        const DetectorConfig config = taxo_detector.to_config();
        stage_classify_taxonomy(store, config);
        if (!taxo_gold.empty()) {
            GoldComparison cmp;
            for (const GoldRow& row : load_gold_csv(taxo_gold)) {
                ++cmp.n_total;
                const auto labels = store.labels(row.commit_id, "taxonomy");
                if (labels.empty()) continue;
                ++cmp.n_matched;
                std::string op, target;
                for (const std::string& l : labels) {
                    if (l.rfind("operation:", 0) == 0) op = l.substr(10);
                    if (l.rfind("target:", 0) == 0) target = l.substr(7);
                }
                if (op == row.operation) ++cmp.n_operation_correct;
                if (target == row.target) ++cmp.n_target_correct;
                if (op == row.operation && target == row.target) ++cmp.n_correct;
            }
            std::cout << "gold rows: " << cmp.n_total << "\nmatched in db: " << cmp.n_matched
                      << "\nboth correct: " << cmp.n_correct << " ("
                      << format_ratio(cmp.n_correct * 100, cmp.n_matched ? cmp.n_matched : 1, 1)
                      << "%)\noperation correct: " << cmp.n_operation_correct
                      << "\ntarget correct: " << cmp.n_target_correct << "\n";
        }
        return kExitOk;
    }
    if (report_cmd->parsed()) {
        Store store(require_db(report_db));
        Population population;
        if (!population_from_string(report_population, population))
            throw ConfigError("unknown population: " + report_population);
        const bool json = report_format == "json";
        if (!json && report_format != "csv")
            throw ConfigError("--format must be csv or json");
        std::ofstream file;
        std::ostream& out = open_output(file, report_out);

        if (report_table == "heatmap") {
            const Heatmap h = heatmap(store, population, report_max_axis);
            json ? void(out << heatmap_json(h) << "\n") : write_heatmap_csv(h, out);
        } else if (report_table == "accum") {
            const AccumCurve c = accum_curve(store, population);
            json ? void(out << accum_json(c) << "\n") : write_accum_csv(c, out);
        } else if (report_table == "hunks") {
            const AccumCurve c = hunk_distribution(store, population);
            json ? void(out << accum_json(c) << "\n") : write_accum_csv(c, out);
        } else if (report_table == "tokens") {
            const FrequencyScope scope = report_scope == "tokens" ? FrequencyScope::Tokens
                                                                  : FrequencyScope::Types;
            const FrequencyTable t = token_frequencies(store, scope, population);
            json ? void(out << frequency_json(t) << "\n") : write_frequency_csv(t, out);
        } else if (report_table == "patterns") {
            const FrequencyTable t = modification_patterns(store, population);
            json ? void(out << frequency_json(t) << "\n") : write_frequency_csv(t, out);
        } else if (report_table == "taxonomy") {
            const FrequencyTable t = taxonomy_combinations(store);
            json ? void(out << frequency_json(t) << "\n") : write_frequency_csv(t, out);
        } else if (report_table == "intersection") {
            const IntersectionStats s = intersection(store);
            json ? void(out << intersection_json(s) << "\n") : write_intersection_csv(s, out);
        } else if (report_table == "corrective") {
            const CorrectiveComparison c = corrective_comparison(store);
            json ? void(out << corrective_json(c) << "\n") : write_corrective_csv(c, out);
        } else {
            throw ConfigError("unknown table: " + report_table);
        }
        return kExitOk;
    }
    if (kappa_cmd->parsed()) {
        const RaterMatrix m = RaterMatrix::from_csv(kappa_matrix);
        const double k = fleiss_kappa(m);
        std::cout << "kappa: " << k << "\ninterpretation: " << kappa_interpretation(k)
                  << "\n";
        return kExitOk;
    }
    if (size_cmd->parsed()) {
        std::cout << sample_size(size_population, size_confidence, size_interval) << "\n";
        return kExitOk;
    }
    if (export_cmd->parsed()) {
        Store store(require_db(export_db));
        std::ofstream file;
        std::ostream& out = open_output(file, export_out);
        store.export_csv(export_table, out);
        return kExitOk;
    }
    if (audit_cmd->parsed()) {
        Store store(require_db(audit_db));
        const auto problems = store.audit();
        for (const std::string& p : problems) std::cerr << "audit: " << p << "\n";
        std::cout << (problems.empty() ? "consistent" : "inconsistent") << "\n";
        return problems.empty() ? kExitOk : kExitStorage;
    }
    return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_main(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const RepoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRepo;
    } catch (const NotFoundError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRepo;
    } catch (const StoreError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitStorage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
