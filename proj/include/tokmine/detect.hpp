#pragma once

#include "tokmine/commit.hpp"

namespace tokmine {

struct DetectorVerdict {
    bool is_one_line = false;
    bool is_micro = false;
    bool is_one_token = false;
    std::size_t n_tokens_added = 0;
    std::size_t n_tokens_removed = 0;
    std::size_t n_files = 0;
    std::size_t n_hunks = 0;  // token hunks
};

struct DetectorConfig {
    std::size_t added_threshold = 5;
    std::size_t removed_threshold = 5;
    // the single-changed-file requirement; disable to count token sums alone
    bool require_single_file = true;
};

/// True iff the commit's whole comment-stripped line diff is one hunk of
/// exactly one removed and one added line.
bool detect_one_line(const CommitRecord& record);

/// True iff the commit changes exactly one source file and adds at most
/// `threshold` tokens and removes at most `threshold` tokens across all hunks
/// of that file. Throws ValidationError-compatible std::invalid_argument for
/// threshold < 1.
bool detect_micro(const CommitRecord& record, std::size_t threshold = 5);
bool detect_micro(const CommitRecord& record, const DetectorConfig& config);

/// True iff the commit is micro and replaces exactly one token (one added and
/// one removed).
bool detect_one_token(const CommitRecord& record, const DetectorConfig& config = {});

DetectorVerdict detect(const CommitRecord& record, const DetectorConfig& config = {});

}  // namespace tokmine
