#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tokmine/store.hpp"

namespace tokmine {

enum class Population { AllStudied, OneLine, Micro };
std::string_view to_string(Population p);
bool population_from_string(std::string_view s, Population& out);

/// Exact proportion rendering: num/den rounded half-up to `decimals` places,
/// computed in integer arithmetic.
std::string format_ratio(std::uint64_t num, std::uint64_t den, int decimals);

struct Heatmap {
    Population population = Population::OneLine;
    std::size_t population_size = 0;
    std::size_t max_axis = 10;
    // counts[added][removed] for 0..max_axis on both axes
    std::vector<std::vector<std::size_t>> counts;
    std::size_t tail_count = 0;  // commits beyond either axis

    std::string proportion(std::size_t added, std::size_t removed, int decimals = 4) const;
};

struct AccumCurve {
    Population population = Population::AllStudied;
    std::size_t population_size = 0;
    std::vector<std::size_t> cumulative;  // cumulative[t] = commits with value <= t

    double proportion(std::size_t t) const {
        if (population_size == 0) return 0.0;
        const std::size_t i = t < cumulative.size() ? t : cumulative.size() - 1;
        return cumulative.empty() ? 0.0
                                  : double(cumulative[i]) / double(population_size);
    }
};

struct FrequencyTable {
    struct Row {
        std::string key;
        std::size_t n = 0;
    };
    std::vector<Row> rows;  // sorted by n descending, then key
    std::size_t denominator = 0;
};

struct IntersectionStats {
    std::size_t n_intersect = 0;
    std::size_t n_one_line = 0;
    std::size_t n_micro = 0;

    std::string pct_one_line(int decimals = 1) const {
        return format_ratio(n_intersect * 100, n_one_line ? n_one_line : 1, decimals);
    }
    std::string pct_micro(int decimals = 1) const {
        return format_ratio(n_intersect * 100, n_micro ? n_micro : 1, decimals);
    }
};

struct CorrectiveComparison {
    std::size_t n_micro = 0;
    std::size_t n_non_micro = 0;
    std::size_t n_corrective_micro = 0;
    std::size_t n_corrective_non_micro = 0;

    double pct_corrective_micro() const {
        return n_micro ? double(n_corrective_micro) / double(n_micro) : 0.0;
    }
    double pct_corrective_non_micro() const {
        return n_non_micro ? double(n_corrective_non_micro) / double(n_non_micro) : 0.0;
    }
};

Heatmap heatmap(const Store& store, Population population, std::size_t max_axis = 10);
AccumCurve accum_curve(const Store& store, Population population);
/// Accumulated distribution of token-hunk counts per commit.
AccumCurve hunk_distribution(const Store& store, Population population = Population::Micro);

enum class FrequencyScope { Types, Tokens };
/// Occurrence counts of touched token types (or concrete tokens) across the
/// population's added and removed tokens.
FrequencyTable token_frequencies(const Store& store,
                                 FrequencyScope scope = FrequencyScope::Types,
                                 Population population = Population::Micro);

/// Per-commit modification pattern: the multiset of removed token types paired
/// with the multiset of added token types.
FrequencyTable modification_patterns(const Store& store,
                                     Population population = Population::Micro);

IntersectionStats intersection(const Store& store);
CorrectiveComparison corrective_comparison(const Store& store);

/// Combination counts of taxonomy labels (operation, target) over commits
/// labeled by the taxonomy scheme; single-region and constituent variants.
FrequencyTable taxonomy_combinations(const Store& store, bool constituents = false);

// --- methodological statistics -------------------------------------------

struct RaterMatrix {
    // counts[subject][category] = number of raters choosing that category
    std::vector<std::vector<std::int64_t>> counts;

    static RaterMatrix from_csv(const std::string& path);
};

/// Fleiss' kappa; defined as exactly 1 when all raters agree on all subjects
/// (the chance term degenerates there). Throws std::invalid_argument for
/// fewer than two raters or ragged matrices.
double fleiss_kappa(const RaterMatrix& m);

/// Verbal scale for a kappa value ("slight agreement" ... "perfect").
std::string kappa_interpretation(double k);

/// Minimum sample size for a finite population at the given confidence level
/// (90, 95 or 99 percent) and confidence interval (in percentage points),
/// using worst-case p = 0.5 and nearest-integer rounding.
std::size_t sample_size(std::size_t population, int confidence_pct, double interval_pct);

// --- rendering -------------------------------------------------------------

void write_heatmap_csv(const Heatmap& h, std::ostream& out);
void write_accum_csv(const AccumCurve& c, std::ostream& out);
void write_frequency_csv(const FrequencyTable& t, std::ostream& out);
void write_intersection_csv(const IntersectionStats& s, std::ostream& out);
void write_corrective_csv(const CorrectiveComparison& c, std::ostream& out);

std::string heatmap_json(const Heatmap& h);
std::string accum_json(const AccumCurve& c);
std::string frequency_json(const FrequencyTable& t);
std::string intersection_json(const IntersectionStats& s);
std::string corrective_json(const CorrectiveComparison& c);

}  // namespace tokmine
