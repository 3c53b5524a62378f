#pragma once

#include <cstdio>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>

#ifndef VIFRAG_FIXTURES_DIR
#define VIFRAG_FIXTURES_DIR "tests/fixtures"
#endif
#ifndef VIFRAG_CLI_PATH
#define VIFRAG_CLI_PATH "./vifrag"
#endif

namespace testsupport {

inline std::filesystem::path fixture(const std::string& name) {
    return std::filesystem::path(VIFRAG_FIXTURES_DIR) / name;
}

inline std::string cli_path() { return VIFRAG_CLI_PATH; }

struct CommandResult {
    int exit_code = -1;
    std::string output;  // stdout only
};

/// Runs a shell command, capturing stdout; stderr goes to /dev/null so test
/// logs stay readable.
inline CommandResult run_command(const std::string& command) {
    CommandResult result;
    std::string full = command + " 2>/dev/null";
    FILE* pipe = ::popen(full.c_str(), "r");
    if (!pipe) throw std::runtime_error("popen failed for: " + command);
    char buf[4096];
    size_t n;
    while ((n = ::fread(buf, 1, sizeof(buf), pipe)) > 0) result.output.append(buf, n);
    int status = ::pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

}  // namespace testsupport
