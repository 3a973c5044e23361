#pragma once

#include <string>
#include <vector>

namespace sotp {

struct CommandResult {
    int exit_code = -1;
    std::string out;
    std::string err;
    bool exec_failed = false;  // the executable could not be started
};

/// Runs `argv` in `working_dir` (empty keeps the current directory) and
/// captures stdout/stderr. No shell is involved.
CommandResult run_command(const std::vector<std::string>& argv, const std::string& working_dir = {});

}  // namespace sotp
