#pragma once

#include <functional>
#include <string>

#include "tokmine/commit.hpp"
#include "tokmine/history.hpp"

namespace tokmine {

/// Comparison lines for a source file: comments stripped, whitespace removed,
/// lines that end up empty dropped. Element order follows the file.
std::vector<LineUnit> diffable_lines(const std::string& source, Language language);

/// Line and token diffs for one file's pre/post images. Returns false when the
/// file should be skipped (no effective line change, or lexing had to recover).
bool diff_file(const std::string& path, Language language, const std::string& old_text,
               const std::string& new_text, FileChange& out, std::string* warn = nullptr);

/// Walk the history and emit one CommitRecord per studied commit, oldest
/// first. Non-source files and comment/whitespace-only changes are excluded;
/// commits left with no surviving file are not emitted. `skip` (optional)
/// suppresses work for already-ingested commits.
void mine(HistoryReader& history, const MineConfig& config,
          const std::function<void(CommitRecord)>& sink,
          const std::function<bool(const std::string&)>& skip = nullptr);

}  // namespace tokmine
