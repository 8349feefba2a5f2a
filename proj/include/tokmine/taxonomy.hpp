#pragma once

#include <string>
#include <vector>

#include "tokmine/commit.hpp"
#include "tokmine/detect.hpp"

namespace tokmine {

enum class TaxonomyOperation { Add, Replace, Remove, Multi, No };
enum class TaxonomyTarget {
    Identifier,
    Statement,
    Constant,
    Declaration,
    ControlFlow,
    Expression,
    Multi,
    No
};

std::string_view to_string(TaxonomyOperation op);
std::string_view to_string(TaxonomyTarget target);

struct TaxonomyLabel {
    TaxonomyOperation operation = TaxonomyOperation::No;
    TaxonomyTarget target = TaxonomyTarget::No;
    double confidence = 1.0;
    // For (multi, multi) verdicts: the distinct per-region labels, so tables
    // over constituent activities can still be built.
    std::vector<std::pair<TaxonomyOperation, TaxonomyTarget>> constituents;

    std::string operation_name() const { return std::string(to_string(operation)); }
    std::string target_name() const { return std::string(to_string(target)); }
};

/// Rule-based label for a micro commit. Throws std::invalid_argument when the
/// record is not a micro commit under `config` (the rules are only meaningful
/// for micro commits). Deterministic; rule order is documented in the README.
TaxonomyLabel classify_taxonomy(const CommitRecord& record,
                                const DetectorConfig& config = {});

/// Accuracy of the classifier against externally supplied labels
/// (CSV rows: commit_id, operation, target).
struct GoldComparison {
    std::size_t n_total = 0;
    std::size_t n_matched = 0;       // gold rows found in the database
    std::size_t n_correct = 0;       // operation and target both right
    std::size_t n_operation_correct = 0;
    std::size_t n_target_correct = 0;

    double accuracy() const { return n_matched ? double(n_correct) / double(n_matched) : 0.0; }
};

struct GoldRow {
    std::string commit_id;
    std::string operation;
    std::string target;
};

std::vector<GoldRow> load_gold_csv(const std::string& path);

}  // namespace tokmine
