#pragma once

#include <string>
#include <vector>

namespace fixtures {

// Commit messages with hand-derived category labels. The labels were worked
// out by tracing the frozen stemmer and stopword list by hand, including the
// awkward cases the stemmer produces (e.g. "added" stems to "ad", "issue" to
// "issu"), so they document the matcher's real behavior.
struct GoldenMessage {
    std::string message;
    bool corrective = false;
    bool adaptive = false;
    bool perfective = false;
};

inline const std::vector<GoldenMessage>& golden_messages() {
    static const std::vector<GoldenMessage> kMessages = {
        {"Fixed the NULL pointer", true, false, false},
        {"Resolve deadlock on shutdown", true, false, false},
        {"resolves races in the scheduler", true, false, false},
        {"Close the file handle before returning", true, false, false},
        {"closing stale connections", true, false, false},
        {"Handled edge case in parser", true, false, false},
        {"Workaround for compiler defect 8841", true, false, false},
        {"bug in ring buffer wraparound", true, false, false},
        // substring matching fires "add" inside "address" too
        {"address review problems", true, true, false},
        {"see ticket 311", true, false, false},
        {"fixup after bad rebase", true, false, false},
        {"Add support for new fix", true, true, false},
        {"add pagination to the search endpoint", false, true, false},
        {"introduce a connection pool", false, true, false},
        {"implemented retry logic", false, true, false},
        {"Implement the snapshot protocol", false, true, false},
        {"extend timeout configuration", false, true, false},
        {"new parser for ISO dates", false, true, false},
        {"support utf8 filenames", false, true, false},
        {"refactor the worker pool", false, false, true},
        {"re-factor startup sequence", false, false, true},
        {"redesign of the cache layer", false, false, true},
        {"replace strcpy with strlcpy", false, false, true},
        {"updated the build images", false, false, true},
        {"upgrade openssl to 3.0", false, false, true},
        {"cleanup dead code", false, false, true},
        {"clean-up trailing whitespace", false, false, true},
        {"Fix build and add upgrade notes", true, true, true},
        {"Merge branch maintenance", false, false, false},
        {"typo in docs", false, false, false},
        // stemming quirks: these words lose their keyword under the stemmer
        {"modify retry strategy", false, false, false},
        {"Adding more logging", false, false, false},
        {"issue 42 in tracker", false, false, false},
    };
    return kMessages;
}

}  // namespace fixtures
