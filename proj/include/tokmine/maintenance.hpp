#pragma once

#include <set>
#include <string>
#include <vector>

namespace tokmine {

/// Porter stemmer (the classic reference formulation). Input is expected to
/// be lowercase; words of length <= 2 pass through unchanged.
std::string porter_stem(std::string word);

/// True for words on the frozen standard English stopword list.
bool is_stopword(const std::string& word);

/// Lowercase, word-tokenize (hyphen is word-internal), drop stopwords and
/// punctuation, Porter-stem what remains.
std::vector<std::string> preprocess_message(const std::string& message);

enum class MaintenanceCategory { Corrective, Adaptive, Perfective };
std::string_view to_string(MaintenanceCategory c);

struct KeywordScheme {
    std::vector<std::string> corrective;
    std::vector<std::string> adaptive;
    std::vector<std::string> perfective;

    /// The fixed default lists.
    static const KeywordScheme& defaults();
    /// Override from a small TOML file: category = ["kw", ...] lines.
    static KeywordScheme from_toml_file(const std::string& path);
};

enum class MatchMode {
    PerToken,    // keyword contained in some stemmed token
    WholeString  // keyword contained in the space-joined stemmed message
};

/// Maintenance categories whose keyword list matches the message; empty set
/// means unlabeled. Multi-label output is expected.
std::set<MaintenanceCategory> classify_maintenance(
    const std::string& message, const KeywordScheme& scheme = KeywordScheme::defaults(),
    MatchMode mode = MatchMode::PerToken);

}  // namespace tokmine
