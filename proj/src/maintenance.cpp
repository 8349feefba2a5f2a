#include "tokmine/maintenance.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace tokmine {

namespace {

// ---------------------------------------------------------------------------
// Porter stemmer. Follows the reference implementation: a buffer b[0..k],
// a mark j set by suffix matches, and the measure m() counted over b[0..j].
// ---------------------------------------------------------------------------
class Porter {
public:
    explicit Porter(std::string word) : b_(std::move(word)), k_(static_cast<int>(b_.size()) - 1) {}

    std::string run() {
        if (k_ <= 1) return b_;
        step1ab();
        step1c();
        step2();
        step3();
        step4();
        step5();
        b_.resize(static_cast<std::size_t>(k_ + 1));
        return b_;
    }

private:
    std::string b_;
    int k_;
    int j_ = 0;

    bool cons(int i) const {
        switch (b_[static_cast<std::size_t>(i)]) {
            case 'a': case 'e': case 'i': case 'o': case 'u':
                return false;
            case 'y':
                return i == 0 ? true : !cons(i - 1);
            default:
                return true;
        }
    }

    // consonant-sequence count of b[0..j]
    int m() const {
        int n = 0;
        int i = 0;
        for (;;) {
            if (i > j_) return n;
            if (!cons(i)) break;
            ++i;
        }
        ++i;
        for (;;) {
            for (;;) {
                if (i > j_) return n;
                if (cons(i)) break;
                ++i;
            }
            ++i;
            ++n;
            for (;;) {
                if (i > j_) return n;
                if (!cons(i)) break;
                ++i;
            }
            ++i;
        }
    }

    bool vowel_in_stem() const {
        for (int i = 0; i <= j_; ++i)
            if (!cons(i)) return true;
        return false;
    }

    bool doublec(int i) const {
        if (i < 1) return false;
        if (b_[static_cast<std::size_t>(i)] != b_[static_cast<std::size_t>(i - 1)]) return false;
        return cons(i);
    }

    // consonant-vowel-consonant ending at i, final consonant not w, x or y
    bool cvc(int i) const {
        if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) return false;
        const char c = b_[static_cast<std::size_t>(i)];
        return c != 'w' && c != 'x' && c != 'y';
    }

    bool ends(std::string_view s) {
        const int len = static_cast<int>(s.size());
        if (len > k_ + 1) return false;
        if (b_.compare(static_cast<std::size_t>(k_ - len + 1), static_cast<std::size_t>(len),
                       s) != 0)
            return false;
        j_ = k_ - len;
        return true;
    }

    void set_to(std::string_view s) {
        b_.replace(static_cast<std::size_t>(j_ + 1),
                   static_cast<std::size_t>(k_ - j_), s);
        k_ = j_ + static_cast<int>(s.size());
    }

    void replace_if_stem(std::string_view s) {
        if (m() > 0) set_to(s);
    }

    void step1ab() {
        if (b_[static_cast<std::size_t>(k_)] == 's') {
            if (ends("sses")) k_ -= 2;
            else if (ends("ies")) set_to("i");
            else if (b_[static_cast<std::size_t>(k_ - 1)] != 's') --k_;
        }
        if (ends("eed")) {
            if (m() > 0) --k_;
        } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
            k_ = j_;
            if (ends("at")) set_to("ate");
            else if (ends("bl")) set_to("ble");
            else if (ends("iz")) set_to("ize");
            else if (doublec(k_)) {
                --k_;
                const char c = b_[static_cast<std::size_t>(k_)];
                if (c == 'l' || c == 's' || c == 'z') ++k_;
            } else {
                j_ = k_;
                if (m() == 1 && cvc(k_)) set_to("e");
            }
        }
    }

    void step1c() {
        if (ends("y") && vowel_in_stem()) b_[static_cast<std::size_t>(k_)] = 'i';
    }

    void step2() {
        if (k_ < 1) return;
        switch (b_[static_cast<std::size_t>(k_ - 1)]) {
            case 'a':
                if (ends("ational")) { replace_if_stem("ate"); break; }
                if (ends("tional")) { replace_if_stem("tion"); break; }
                break;
            case 'c':
                if (ends("enci")) { replace_if_stem("ence"); break; }
                if (ends("anci")) { replace_if_stem("ance"); break; }
                break;
            case 'e':
                if (ends("izer")) { replace_if_stem("ize"); break; }
                break;
            case 'l':
                if (ends("bli")) { replace_if_stem("ble"); break; }
                if (ends("alli")) { replace_if_stem("al"); break; }
                if (ends("entli")) { replace_if_stem("ent"); break; }
                if (ends("eli")) { replace_if_stem("e"); break; }
                if (ends("ousli")) { replace_if_stem("ous"); break; }
                break;
            case 'o':
                if (ends("ization")) { replace_if_stem("ize"); break; }
                if (ends("ation")) { replace_if_stem("ate"); break; }
                if (ends("ator")) { replace_if_stem("ate"); break; }
                break;
            case 's':
                if (ends("alism")) { replace_if_stem("al"); break; }
                if (ends("iveness")) { replace_if_stem("ive"); break; }
                if (ends("fulness")) { replace_if_stem("ful"); break; }
                if (ends("ousness")) { replace_if_stem("ous"); break; }
                break;
            case 't':
                if (ends("aliti")) { replace_if_stem("al"); break; }
                if (ends("iviti")) { replace_if_stem("ive"); break; }
                if (ends("biliti")) { replace_if_stem("ble"); break; }
                break;
            case 'g':
                if (ends("logi")) { replace_if_stem("log"); break; }
                break;
            default:
                break;
        }
    }

    void step3() {
        switch (b_[static_cast<std::size_t>(k_)]) {
            case 'e':
                if (ends("icate")) { replace_if_stem("ic"); break; }
                if (ends("ative")) { replace_if_stem(""); break; }
                if (ends("alize")) { replace_if_stem("al"); break; }
                break;
            case 'i':
                if (ends("iciti")) { replace_if_stem("ic"); break; }
                break;
            case 'l':
                if (ends("ical")) { replace_if_stem("ic"); break; }
                if (ends("ful")) { replace_if_stem(""); break; }
                break;
            case 's':
                if (ends("ness")) { replace_if_stem(""); break; }
                break;
            default:
                break;
        }
    }

    void step4() {
        if (k_ < 1) return;
        switch (b_[static_cast<std::size_t>(k_ - 1)]) {
            case 'a': if (ends("al")) break; return;
            case 'c': if (ends("ance")) break; if (ends("ence")) break; return;
            case 'e': if (ends("er")) break; return;
            case 'i': if (ends("ic")) break; return;
            case 'l': if (ends("able")) break; if (ends("ible")) break; return;
            case 'n':
                if (ends("ant")) break;
                if (ends("ement")) break;
                if (ends("ment")) break;
                if (ends("ent")) break;
                return;
            case 'o':
                if (ends("ion") && j_ >= 0 &&
                    (b_[static_cast<std::size_t>(j_)] == 's' ||
                     b_[static_cast<std::size_t>(j_)] == 't'))
                    break;
                if (ends("ou")) break;
                return;
            case 's': if (ends("ism")) break; return;
            case 't': if (ends("ate")) break; if (ends("iti")) break; return;
            case 'u': if (ends("ous")) break; return;
            case 'v': if (ends("ive")) break; return;
            case 'z': if (ends("ize")) break; return;
            default: return;
        }
        if (m() > 1) k_ = j_;
    }

    void step5() {
        j_ = k_;
        if (b_[static_cast<std::size_t>(k_)] == 'e') {
            const int a = m();
            if (a > 1 || (a == 1 && !cvc(k_ - 1))) --k_;
        }
        if (b_[static_cast<std::size_t>(k_)] == 'l' && doublec(k_) && m() > 1) --k_;
    }
};

// Frozen standard English stopword list, applied before stemming.
const std::unordered_set<std::string>& stopwords() {
    static const std::unordered_set<std::string> kSet = {
        "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you",
        "your", "yours", "yourself", "yourselves", "he", "him", "his",
        "himself", "she", "her", "hers", "herself", "it", "its", "itself",
        "they", "them", "their", "theirs", "themselves", "what", "which",
        "who", "whom", "this", "that", "these", "those", "am", "is", "are",
        "was", "were", "be", "been", "being", "have", "has", "had", "having",
        "do", "does", "did", "doing", "a", "an", "the", "and", "but", "if",
        "or", "because", "as", "until", "while", "of", "at", "by", "for",
        "with", "about", "against", "between", "into", "through", "during",
        "before", "after", "above", "below", "to", "from", "up", "down", "in",
        "out", "on", "off", "over", "under", "again", "further", "then",
        "once", "here", "there", "when", "where", "why", "how", "all", "any",
        "both", "each", "few", "more", "most", "other", "some", "such", "no",
        "nor", "not", "only", "own", "same", "so", "than", "too", "very",
        "s", "t", "can", "will", "just", "don", "should", "now", "d", "ll",
        "m", "o", "re", "ve", "y", "ain", "aren", "couldn", "didn", "doesn",
        "hadn", "hasn", "haven", "isn", "ma", "mightn", "mustn", "needn",
        "shan", "shouldn", "wasn", "weren", "won", "wouldn"};
    return kSet;
}

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

}  // namespace

std::string porter_stem(std::string word) { return Porter(std::move(word)).run(); }

bool is_stopword(const std::string& word) { return stopwords().count(word) > 0; }

std::vector<std::string> preprocess_message(const std::string& message) {
    std::string lower;
    lower.reserve(message.size());
    for (char c : message)
        lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));

    std::vector<std::string> stems;
    std::size_t i = 0;
    while (i < lower.size()) {
        if (!is_word_char(lower[i])) {
            ++i;
            continue;
        }
        // a word is alnum runs joined by single interior hyphens ("clean-up")
        std::size_t end = i;
        while (end < lower.size() &&
               (is_word_char(lower[end]) ||
                (lower[end] == '-' && end + 1 < lower.size() && is_word_char(lower[end + 1]) &&
                 end > i)))
            ++end;
        std::string word = lower.substr(i, end - i);
        i = end;
        if (word.empty() || is_stopword(word)) continue;
        stems.push_back(porter_stem(std::move(word)));
    }
    return stems;
}

std::string_view to_string(MaintenanceCategory c) {
    switch (c) {
        case MaintenanceCategory::Corrective: return "corrective";
        case MaintenanceCategory::Adaptive: return "adaptive";
        case MaintenanceCategory::Perfective: return "perfective";
    }
    return "corrective";
}

const KeywordScheme& KeywordScheme::defaults() {
    static const KeywordScheme kDefaults = {
        {"fix", "esolv", "clos", "handl", "issue", "defect", "bug", "problem", "ticket"},
        {"add", "new", "introduc", "implement", "implemented", "extend", "feature", "support"},
        {"refactor", "re-factor", "reimplement", "re-implement", "design", "replac",
         "modify", "updat", "upgrad", "cleanup", "clean-up"}};
    return kDefaults;
}

KeywordScheme KeywordScheme::from_toml_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw std::runtime_error("cannot read keyword file: " + path);
    KeywordScheme scheme;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto fail = [&](const std::string& why) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + why);
        };
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos || line[start] == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail("expected: category = [\"kw\", ...]");
        std::string key = line.substr(start, eq - start);
        key.erase(key.find_last_not_of(" \t") + 1);
        std::vector<std::string>* target = nullptr;
        if (key == "corrective") target = &scheme.corrective;
        else if (key == "adaptive") target = &scheme.adaptive;
        else if (key == "perfective") target = &scheme.perfective;
        else fail("unknown category: " + key);

        const std::size_t open = line.find('[', eq);
        const std::size_t close = line.rfind(']');
        if (open == std::string::npos || close == std::string::npos || close < open)
            fail("expected a [\"...\"] array");
        std::size_t pos = open + 1;
        while (pos < close) {
            const std::size_t q1 = line.find('"', pos);
            if (q1 == std::string::npos || q1 > close) break;
            const std::size_t q2 = line.find('"', q1 + 1);
            if (q2 == std::string::npos || q2 > close) fail("unterminated string");
            target->push_back(line.substr(q1 + 1, q2 - q1 - 1));
            pos = q2 + 1;
        }
    }
    return scheme;
}

std::set<MaintenanceCategory> classify_maintenance(const std::string& message,
                                                   const KeywordScheme& scheme,
                                                   MatchMode mode) {
    const std::vector<std::string> stems = preprocess_message(message);
    std::string joined;
    if (mode == MatchMode::WholeString) {
        for (const std::string& s : stems) {
            if (!joined.empty()) joined += ' ';
            joined += s;
        }
    }
    const auto matches = [&](const std::vector<std::string>& keywords) {
        for (const std::string& kw : keywords) {
            if (kw.empty()) continue;
            if (mode == MatchMode::WholeString) {
                if (joined.find(kw) != std::string::npos) return true;
            } else {
                for (const std::string& stem : stems)
                    if (stem.find(kw) != std::string::npos) return true;
            }
        }
        return false;
    };

    std::set<MaintenanceCategory> out;
    if (matches(scheme.corrective)) out.insert(MaintenanceCategory::Corrective);
    if (matches(scheme.adaptive)) out.insert(MaintenanceCategory::Adaptive);
    if (matches(scheme.perfective)) out.insert(MaintenanceCategory::Perfective);
    return out;
}

}  // namespace tokmine
