#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "hjhopf/config.hpp"

namespace hjhopf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitInconclusive = 4;

struct Invocation {
    std::string command;
    std::vector<std::string> args;  // positional arguments of the command
    ConfigFile config;
};

const std::vector<std::string>& command_names();

/// Runs one command. The primary artifact goes to [output] path (or `out`); failures
/// produce an error record on `out`, a message on `err` and a nonzero exit code.
int run(const Invocation& inv, std::ostream& out, std::ostream& err);

/// Writes the machine-readable error record and returns `code`.
int report_error(const std::string& command, const std::string& kind, const std::string& message, int code,
                 std::ostream& out, std::ostream& err);

}  // namespace hjhopf::cli
