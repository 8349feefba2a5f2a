#pragma once

#include <string>

#include "tokmine/commit.hpp"
#include "tokmine/detect.hpp"
#include "tokmine/maintenance.hpp"
#include "tokmine/store.hpp"

namespace tokmine {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string repo_path;
    std::string db_path;
    MineConfig mine;
    DetectorConfig detector;
    std::string keywords_file;  // empty = built-in defaults
    MatchMode match_mode = MatchMode::PerToken;

    void validate() const;
};

struct PipelineSummary {
    std::size_t n_studied = 0;
    std::size_t n_one_line = 0;
    std::size_t n_micro = 0;
    std::size_t n_one_token = 0;
    std::size_t n_ingested = 0;  // new commits stored by this run

    std::string to_json() const;
};

/// Ingest (resumable: already-stored commits are skipped), detect, classify,
/// then summarize. The database is left in its last committed state if any
/// stage fails.
PipelineSummary run_pipeline(const RunConfig& config);

/// Individual stages, exposed so each is independently runnable from the CLI.
std::size_t stage_ingest(Store& store, const RunConfig& config);
void stage_detect(Store& store, const DetectorConfig& config);
void stage_classify_maintenance(Store& store, const KeywordScheme& scheme, MatchMode mode);
void stage_classify_taxonomy(Store& store, const DetectorConfig& config);

PipelineSummary summarize(const Store& store);

}  // namespace tokmine
