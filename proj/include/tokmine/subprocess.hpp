#pragma once

#include <string>
#include <vector>

namespace tokmine {

struct CommandResult {
    int status = -1;
    std::string output;  // captured stdout, binary-safe

    bool ok() const { return status == 0; }
};

/// Run a command (argv form, no shell) and capture stdout. stderr is passed
/// through. `cwd` when non-empty is the working directory of the child.
CommandResult run_command(const std::vector<std::string>& argv, const std::string& cwd = {});

}  // namespace tokmine
