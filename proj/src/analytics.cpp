#include "tokmine/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace tokmine {

namespace {

using nlohmann::json;

std::set<std::string> labeled_ids(const Store& store, const std::string& scheme,
                                  const std::string& label) {
    std::set<std::string> out;
    for (const auto& [id, l] : store.all_labels(scheme))
        if (l == label) out.insert(id);
    return out;
}

std::set<std::string> population_ids(const Store& store, Population p) {
    if (p == Population::AllStudied) {
        std::set<std::string> out;
        for (const std::string& id : store.commit_ids()) out.insert(id);
        return out;
    }
    return labeled_ids(store, "detector", p == Population::OneLine ? "one_line" : "micro");
}

void require_population(const std::set<std::string>& ids, Population p) {
    if (ids.empty())
        throw std::invalid_argument("population '" + std::string(to_string(p)) +
                                    "' is empty");
}

void sort_rows(FrequencyTable& table) {
    std::sort(table.rows.begin(), table.rows.end(),
              [](const FrequencyTable::Row& a, const FrequencyTable::Row& b) {
                  if (a.n != b.n) return a.n > b.n;
                  return a.key < b.key;
              });
}

}  // namespace

std::string_view to_string(Population p) {
    switch (p) {
        case Population::AllStudied: return "all";
        case Population::OneLine: return "one_line";
        case Population::Micro: return "micro";
    }
    return "all";
}

bool population_from_string(std::string_view s, Population& out) {
    if (s == "all") { out = Population::AllStudied; return true; }
    if (s == "one_line" || s == "one-line") { out = Population::OneLine; return true; }
    if (s == "micro") { out = Population::Micro; return true; }
    return false;
}

std::string format_ratio(std::uint64_t num, std::uint64_t den, int decimals) {
    if (den == 0) den = 1;
    std::uint64_t scale = 1;
    for (int i = 0; i < decimals; ++i) scale *= 10;
    // round half up in integers
    const std::uint64_t scaled = (num * scale * 2 + den) / (2 * den);
    std::string digits = std::to_string(scaled);
    if (decimals == 0) return digits;
    if (digits.size() <= static_cast<std::size_t>(decimals))
        digits.insert(0, static_cast<std::size_t>(decimals) + 1 - digits.size(), '0');
    digits.insert(digits.size() - static_cast<std::size_t>(decimals), ".");
    return digits;
}

std::string Heatmap::proportion(std::size_t added, std::size_t removed, int decimals) const {
    const std::size_t count = counts.at(added).at(removed);
    return format_ratio(count, population_size, decimals);
}

Heatmap heatmap(const Store& store, Population population, std::size_t max_axis) {
    const auto ids = population_ids(store, population);
    require_population(ids, population);

    Heatmap h;
    h.population = population;
    h.population_size = ids.size();
    h.max_axis = max_axis;
    h.counts.assign(max_axis + 1, std::vector<std::size_t>(max_axis + 1, 0));
    for (const CommitSummary& row : store.all_commits()) {
        if (!ids.count(row.commit_id)) continue;
        const auto a = static_cast<std::size_t>(row.n_tokens_added);
        const auto r = static_cast<std::size_t>(row.n_tokens_removed);
        if (a <= max_axis && r <= max_axis)
            ++h.counts[a][r];
        else
            ++h.tail_count;
    }
    return h;
}

namespace {

AccumCurve accumulate(const Store& store, Population population,
                      const std::function<std::size_t(const CommitSummary&)>& value) {
    const auto ids = population_ids(store, population);
    require_population(ids, population);

    AccumCurve curve;
    curve.population = population;
    curve.population_size = ids.size();
    std::map<std::size_t, std::size_t> histogram;
    std::size_t max_value = 0;
    for (const CommitSummary& row : store.all_commits()) {
        if (!ids.count(row.commit_id)) continue;
        const std::size_t v = value(row);
        ++histogram[v];
        max_value = std::max(max_value, v);
    }
    curve.cumulative.assign(max_value + 1, 0);
    std::size_t running = 0;
    for (std::size_t t = 0; t <= max_value; ++t) {
        const auto it = histogram.find(t);
        if (it != histogram.end()) running += it->second;
        curve.cumulative[t] = running;
    }
    return curve;
}

}  // namespace

AccumCurve accum_curve(const Store& store, Population population) {
    return accumulate(store, population, [](const CommitSummary& row) {
        return static_cast<std::size_t>(
            std::max(row.n_tokens_added, row.n_tokens_removed));
    });
}

AccumCurve hunk_distribution(const Store& store, Population population) {
    return accumulate(store, population, [](const CommitSummary& row) {
        return static_cast<std::size_t>(row.n_hunks);
    });
}

FrequencyTable token_frequencies(const Store& store, FrequencyScope scope,
                                 Population population) {
    const auto ids = population_ids(store, population);

    std::map<std::string, std::size_t> counts;
    std::size_t total = 0;
    store.for_each_token_change([&](const Store::TokenChangeRow& row) {
        if (!ids.count(row.commit_id)) return;
        const std::string& key =
            scope == FrequencyScope::Types ? row.token_type : row.token_text;
        ++counts[key];
        ++total;
    });

    FrequencyTable table;
    table.denominator = total;
    for (const auto& [key, n] : counts) table.rows.push_back({key, n});
    sort_rows(table);
    return table;
}

FrequencyTable modification_patterns(const Store& store, Population population) {
    const auto ids = population_ids(store, population);

    // per commit: multiset of removed types / multiset of added types
    std::map<std::string, std::pair<std::multiset<std::string>, std::multiset<std::string>>>
        per_commit;
    for (const std::string& id : ids) per_commit[id];
    store.for_each_token_change([&](const Store::TokenChangeRow& row) {
        const auto it = per_commit.find(row.commit_id);
        if (it == per_commit.end()) return;
        if (row.sign == '-')
            it->second.first.insert(row.token_type);
        else
            it->second.second.insert(row.token_type);
    });

    const auto render = [](const std::multiset<std::string>& types) {
        std::string out = "{";
        std::string last;
        std::size_t run = 0;
        const auto flush = [&] {
            if (run == 0) return;
            if (out.size() > 1) out += ", ";
            out += last;
            if (run > 1) out += " x" + std::to_string(run);
        };
        for (const std::string& t : types) {
            if (t == last) {
                ++run;
            } else {
                flush();
                last = t;
                run = 1;
            }
        }
        flush();
        return out + "}";
    };

    std::map<std::string, std::size_t> counts;
    for (const auto& [id, sets] : per_commit)
        ++counts["removed:" + render(sets.first) + " added:" + render(sets.second)];

    FrequencyTable table;
    table.denominator = per_commit.size();
    for (const auto& [key, n] : counts) table.rows.push_back({key, n});
    sort_rows(table);
    return table;
}

IntersectionStats intersection(const Store& store) {
    const auto one_line = labeled_ids(store, "detector", "one_line");
    const auto micro = labeled_ids(store, "detector", "micro");
    IntersectionStats stats;
    stats.n_one_line = one_line.size();
    stats.n_micro = micro.size();
    for (const std::string& id : one_line)
        if (micro.count(id)) ++stats.n_intersect;
    return stats;
}

CorrectiveComparison corrective_comparison(const Store& store) {
    const auto micro = labeled_ids(store, "detector", "micro");
    const auto corrective = labeled_ids(store, "maintenance", "corrective");
    CorrectiveComparison out;
    for (const std::string& id : store.commit_ids()) {
        const bool is_micro = micro.count(id) > 0;
        const bool is_corrective = corrective.count(id) > 0;
        if (is_micro) {
            ++out.n_micro;
            if (is_corrective) ++out.n_corrective_micro;
        } else {
            ++out.n_non_micro;
            if (is_corrective) ++out.n_corrective_non_micro;
        }
    }
    return out;
}

FrequencyTable taxonomy_combinations(const Store& store, bool constituents) {
    std::map<std::string, std::pair<std::string, std::string>> per_commit;  // op, target
    std::map<std::string, std::size_t> pair_counts;
    std::size_t denominator = 0;
    for (const auto& [id, label] : store.all_labels("taxonomy")) {
        if (label.rfind("operation:", 0) == 0) per_commit[id].first = label.substr(10);
        else if (label.rfind("target:", 0) == 0) per_commit[id].second = label.substr(7);
        else if (constituents && label.rfind("pair:", 0) == 0)
            ++pair_counts[label.substr(5)];
    }
    FrequencyTable table;
    if (constituents) {
        for (const auto& [key, n] : pair_counts) {
            table.rows.push_back({key, n});
            table.denominator += n;
        }
    } else {
        std::map<std::string, std::size_t> counts;
        for (const auto& [id, pair] : per_commit) {
            if (pair.first.empty() || pair.second.empty()) continue;
            ++counts[pair.first + "/" + pair.second];
            ++denominator;
        }
        table.denominator = denominator;
        for (const auto& [key, n] : counts) table.rows.push_back({key, n});
    }
    sort_rows(table);
    return table;
}

// --- statistics -------------------------------------------------------------

RaterMatrix RaterMatrix::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw std::runtime_error("cannot read matrix file: " + path);
    RaterMatrix m;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::int64_t> row;
        std::stringstream ss(line);
        std::string field;
        bool numeric = true;
        while (std::getline(ss, field, ',')) {
            try {
                row.push_back(std::stoll(field));
            } catch (const std::exception&) {
                numeric = false;
                break;
            }
        }
        if (!numeric && m.counts.empty()) continue;  // header row
        if (!numeric) throw std::runtime_error("non-numeric matrix row: " + line);
        m.counts.push_back(std::move(row));
    }
    return m;
}

double fleiss_kappa(const RaterMatrix& m) {
    const std::size_t n_subjects = m.counts.size();
    if (n_subjects == 0) throw std::invalid_argument("rater matrix has no subjects");
    const std::size_t n_categories = m.counts[0].size();
    if (n_categories == 0) throw std::invalid_argument("rater matrix has no categories");

    std::int64_t raters = 0;
    for (std::size_t i = 0; i < n_subjects; ++i) {
        if (m.counts[i].size() != n_categories)
            throw std::invalid_argument("ragged rater matrix");
        std::int64_t row_sum = 0;
        for (std::int64_t v : m.counts[i]) {
            if (v < 0) throw std::invalid_argument("negative rating count");
            row_sum += v;
        }
        if (i == 0) raters = row_sum;
        else if (row_sum != raters)
            throw std::invalid_argument("rater matrix rows must have a constant sum");
    }
    if (raters < 2) throw std::invalid_argument("at least two raters are required");

    const double n = static_cast<double>(n_subjects);
    const double r = static_cast<double>(raters);

    double p_bar = 0.0;
    std::vector<double> p_j(n_categories, 0.0);
    for (std::size_t i = 0; i < n_subjects; ++i) {
        double agree = 0.0;
        for (std::size_t j = 0; j < n_categories; ++j) {
            const double v = static_cast<double>(m.counts[i][j]);
            agree += v * v;
            p_j[j] += v;
        }
        p_bar += (agree - r) / (r * (r - 1.0));
    }
    p_bar /= n;
    double p_e = 0.0;
    for (double& pj : p_j) {
        pj /= n * r;
        p_e += pj * pj;
    }
    if (p_bar >= 1.0) return 1.0;  // unanimous agreement, chance term degenerates
    return (p_bar - p_e) / (1.0 - p_e);
}

std::string kappa_interpretation(double k) {
    if (k >= 1.0) return "perfect";
    if (k >= 0.81) return "almost perfect agreement";
    if (k >= 0.61) return "substantial agreement";
    if (k >= 0.41) return "moderate agreement";
    if (k >= 0.21) return "fair agreement";
    if (k > 0.0) return "slight agreement";
    return "poor/none";
}

std::size_t sample_size(std::size_t population, int confidence_pct, double interval_pct) {
    if (population < 1) throw std::invalid_argument("population must be >= 1");
    if (interval_pct <= 0) throw std::invalid_argument("interval must be positive");
    double z = 0.0;
    switch (confidence_pct) {
        case 90: z = 1.645; break;
        case 95: z = 1.96; break;
        case 99: z = 2.576; break;
        default: throw std::invalid_argument("confidence level must be 90, 95 or 99");
    }
    const double e = interval_pct / 100.0;
    const double n0 = z * z * 0.25 / (e * e);
    const double adjusted = n0 / (1.0 + (n0 - 1.0) / static_cast<double>(population));
    auto n = static_cast<std::size_t>(std::llround(adjusted));
    n = std::max<std::size_t>(n, 1);
    return std::min(n, population);
}

// --- rendering ---------------------------------------------------------------

void write_heatmap_csv(const Heatmap& h, std::ostream& out) {
    out << "n_added,n_removed,count,proportion\n";
    for (std::size_t a = 0; a <= h.max_axis; ++a)
        for (std::size_t r = 0; r <= h.max_axis; ++r)
            out << a << ',' << r << ',' << h.counts[a][r] << ','
                << h.proportion(a, r) << '\n';
}

void write_accum_csv(const AccumCurve& c, std::ostream& out) {
    out << "t,count,proportion\n";
    for (std::size_t t = 0; t < c.cumulative.size(); ++t)
        out << t << ',' << c.cumulative[t] << ','
            << format_ratio(c.cumulative[t], c.population_size, 4) << '\n';
}

void write_frequency_csv(const FrequencyTable& t, std::ostream& out) {
    out << "key,n,pro\n";
    for (const auto& row : t.rows) {
        if (row.key.find_first_of(",\"\n") != std::string::npos) {
            out << '"';
            for (char ch : row.key) {
                if (ch == '"') out << '"';
                out << ch;
            }
            out << '"';
        } else {
            out << row.key;
        }
        out << ',' << row.n << ',' << format_ratio(row.n, t.denominator, 2) << '\n';
    }
}

void write_intersection_csv(const IntersectionStats& s, std::ostream& out) {
    out << "n_intersect,n_one_line,n_micro,pct_one_line,pct_micro\n";
    out << s.n_intersect << ',' << s.n_one_line << ',' << s.n_micro << ','
        << s.pct_one_line() << ',' << s.pct_micro() << '\n';
}

void write_corrective_csv(const CorrectiveComparison& c, std::ostream& out) {
    out << "population,n,n_corrective,proportion\n";
    out << "micro," << c.n_micro << ',' << c.n_corrective_micro << ','
        << format_ratio(c.n_corrective_micro, c.n_micro ? c.n_micro : 1, 4) << '\n';
    out << "non_micro," << c.n_non_micro << ',' << c.n_corrective_non_micro << ','
        << format_ratio(c.n_corrective_non_micro, c.n_non_micro ? c.n_non_micro : 1, 4)
        << '\n';
}

std::string heatmap_json(const Heatmap& h) {
    json cells = json::array();
    for (std::size_t a = 0; a <= h.max_axis; ++a)
        for (std::size_t r = 0; r <= h.max_axis; ++r)
            cells.push_back({{"n_added", a},
                             {"n_removed", r},
                             {"count", h.counts[a][r]},
                             {"proportion", h.proportion(a, r)}});
    const json j = {{"population", to_string(h.population)},
                    {"population_size", h.population_size},
                    {"max_axis", h.max_axis},
                    {"tail_count", h.tail_count},
                    {"cells", cells}};
    return j.dump(2);
}

std::string accum_json(const AccumCurve& c) {
    json points = json::array();
    for (std::size_t t = 0; t < c.cumulative.size(); ++t)
        points.push_back({{"t", t},
                          {"count", c.cumulative[t]},
                          {"proportion", format_ratio(c.cumulative[t], c.population_size, 4)}});
    const json j = {{"population", to_string(c.population)},
                    {"population_size", c.population_size},
                    {"points", points}};
    return j.dump(2);
}

std::string frequency_json(const FrequencyTable& t) {
    json rows = json::array();
    for (const auto& row : t.rows)
        rows.push_back({{"key", row.key},
                        {"n", row.n},
                        {"pro", format_ratio(row.n, t.denominator, 2)}});
    const json j = {{"denominator", t.denominator}, {"rows", rows}};
    return j.dump(2);
}

std::string intersection_json(const IntersectionStats& s) {
    const json j = {{"n_intersect", s.n_intersect},
                    {"n_one_line", s.n_one_line},
                    {"n_micro", s.n_micro},
                    {"pct_one_line", s.pct_one_line()},
                    {"pct_micro", s.pct_micro()}};
    return j.dump(2);
}

std::string corrective_json(const CorrectiveComparison& c) {
    const json j = {{"n_micro", c.n_micro},
                    {"n_non_micro", c.n_non_micro},
                    {"n_corrective_micro", c.n_corrective_micro},
                    {"n_corrective_non_micro", c.n_corrective_non_micro},
                    {"pct_corrective_micro", c.pct_corrective_micro()},
                    {"pct_corrective_non_micro", c.pct_corrective_non_micro()}};
    return j.dump(2);
}

}  // namespace tokmine
