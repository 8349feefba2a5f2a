#include "tokmine/pipeline.hpp"

#include <set>

#include <json.hpp>

#include "tokmine/history.hpp"
#include "tokmine/miner.hpp"
#include "tokmine/taxonomy.hpp"

namespace tokmine {

void RunConfig::validate() const {
    if (repo_path.empty()) throw ConfigError("repository path is required");
    if (db_path.empty()) throw ConfigError("database path is required");
    if (detector.added_threshold < 1 || detector.removed_threshold < 1)
        throw ConfigError("micro threshold must be >= 1");
    if (mine.languages.empty()) throw ConfigError("at least one language is required");
}

std::string PipelineSummary::to_json() const {
    const nlohmann::json j = {{"n_studied", n_studied},
                              {"n_one_line", n_one_line},
                              {"n_micro", n_micro},
                              {"n_one_token", n_one_token},
                              {"n_ingested", n_ingested}};
    return j.dump(2);
}

std::size_t stage_ingest(Store& store, const RunConfig& config) {
    GitHistory history(config.repo_path);
    std::size_t batched = 0;
    std::size_t ingested = 0;
    store.begin_batch();
    try {
        mine(
            history, config.mine,
            [&](CommitRecord record) {
                store.put(record);
                ++ingested;
                if (++batched >= 200) {  // keep transactions bounded
                    store.commit_batch();
                    store.begin_batch();
                    batched = 0;
                }
            },
            [&](const std::string& id) { return store.contains(id); });
        store.commit_batch();
    } catch (...) {
        // previously committed batches stay; only the open one is dropped
        store.rollback_batch();
        throw;
    }
    return ingested;
}

namespace {

// closes an abandoned batch when a stage throws mid-transaction
struct BatchGuard {
    Store& store;
    bool done = false;
    explicit BatchGuard(Store& s) : store(s) { store.begin_batch(); }
    void commit() {
        store.commit_batch();
        done = true;
    }
    ~BatchGuard() {
        if (!done) store.rollback_batch();
    }
};

}  // namespace

void stage_detect(Store& store, const DetectorConfig& config) {
    BatchGuard batch(store);
    for (const std::string& id : store.commit_ids()) {
        const auto record = store.get(id);
        if (!record) continue;
        const DetectorVerdict verdict = detect(*record, config);
        std::vector<std::string> labels;
        if (verdict.is_one_line) labels.push_back("one_line");
        if (verdict.is_micro) labels.push_back("micro");
        if (verdict.is_one_token) labels.push_back("one_token");
        store.set_labels(id, "detector", labels);
    }
    batch.commit();
}

void stage_classify_maintenance(Store& store, const KeywordScheme& scheme, MatchMode mode) {
    BatchGuard batch(store);
    for (const CommitSummary& row : store.all_commits()) {
        std::vector<std::string> labels;
        for (MaintenanceCategory c : classify_maintenance(row.message, scheme, mode))
            labels.emplace_back(to_string(c));
        store.set_labels(row.commit_id, "maintenance", labels);
    }
    batch.commit();
}

void stage_classify_taxonomy(Store& store, const DetectorConfig& config) {
    const auto detector_labels = store.all_labels("detector");
    std::set<std::string> micro_ids;
    for (const auto& [id, label] : detector_labels)
        if (label == "micro") micro_ids.insert(id);

    BatchGuard batch(store);
    for (const std::string& id : micro_ids) {
        const auto record = store.get(id);
        if (!record) continue;
        const TaxonomyLabel label = classify_taxonomy(*record, config);
        std::vector<std::string> rows = {"operation:" + label.operation_name(),
                                         "target:" + label.target_name()};
        for (const auto& [op, target] : label.constituents)
            rows.push_back("pair:" + std::string(to_string(op)) + "/" +
                           std::string(to_string(target)));
        store.set_labels(id, "taxonomy", rows);
    }
    batch.commit();
}

PipelineSummary summarize(const Store& store) {
    PipelineSummary summary;
    summary.n_studied = store.commit_ids().size();
    for (const auto& [id, label] : store.all_labels("detector")) {
        if (label == "one_line") ++summary.n_one_line;
        else if (label == "micro") ++summary.n_micro;
        else if (label == "one_token") ++summary.n_one_token;
    }
    return summary;
}

PipelineSummary run_pipeline(const RunConfig& config) {
    config.validate();
    Store store(config.db_path);

    // record provenance of this run
    nlohmann::json prov;
    prov["repo_path"] = config.repo_path;
    prov["threshold_added"] = config.detector.added_threshold;
    prov["threshold_removed"] = config.detector.removed_threshold;
    prov["require_single_file"] = config.detector.require_single_file;
    prov["include_merges"] = config.mine.include_merges;
    prov["max_commits"] = config.mine.max_commits;
    {
        std::vector<std::string> langs;
        for (Language l : config.mine.languages) langs.emplace_back(to_string(l));
        prov["languages"] = langs;
    }
    store.set_meta("run_config", prov.dump());

    const std::size_t ingested = stage_ingest(store, config);
    stage_detect(store, config.detector);
    const KeywordScheme scheme = config.keywords_file.empty()
                                     ? KeywordScheme::defaults()
                                     : KeywordScheme::from_toml_file(config.keywords_file);
    stage_classify_maintenance(store, scheme, config.match_mode);
    stage_classify_taxonomy(store, config.detector);

    PipelineSummary summary = summarize(store);
    summary.n_ingested = ingested;
    return summary;
}

}  // namespace tokmine
