#include "tokmine/detect.hpp"

#include <stdexcept>

namespace tokmine {

bool detect_one_line(const CommitRecord& record) {
    const Hunk<LineUnit>* only = nullptr;
    for (const FileChange& file : record.files) {
        for (const Hunk<LineUnit>& hunk : file.line_diff.hunks) {
            if (only) return false;  // more than one hunk commit-wide
            only = &hunk;
        }
    }
    return only && only->removed.size() == 1 && only->added.size() == 1;
}

bool detect_micro(const CommitRecord& record, const DetectorConfig& config) {
    if (config.added_threshold < 1 || config.removed_threshold < 1)
        throw std::invalid_argument("micro threshold must be >= 1");
    if (config.require_single_file && record.files.size() != 1) return false;
    return record.total_tokens_added() <= config.added_threshold &&
           record.total_tokens_removed() <= config.removed_threshold;
}

bool detect_micro(const CommitRecord& record, std::size_t threshold) {
    DetectorConfig config;
    config.added_threshold = threshold;
    config.removed_threshold = threshold;
    return detect_micro(record, config);
}

bool detect_one_token(const CommitRecord& record, const DetectorConfig& config) {
    return detect_micro(record, config) && record.total_tokens_added() == 1 &&
           record.total_tokens_removed() == 1;
}

DetectorVerdict detect(const CommitRecord& record, const DetectorConfig& config) {
    DetectorVerdict verdict;
    verdict.n_tokens_added = record.total_tokens_added();
    verdict.n_tokens_removed = record.total_tokens_removed();
    verdict.n_files = record.files.size();
    verdict.n_hunks = record.total_token_hunks();
    verdict.is_one_line = detect_one_line(record);
    verdict.is_micro = detect_micro(record, config);
    verdict.is_one_token = detect_one_token(record, config);
    return verdict;
}

}  // namespace tokmine
