#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "floquet/config.hpp"

namespace floquet::cli {

inline constexpr const char* toolkit_version = "0.1.0";

enum ExitCode : int { exit_ok = 0, exit_schema = 2, exit_solver = 3 };

/// Everything a task produces, held in memory until the run succeeds.
struct TaskOutput {
  std::vector<std::pair<std::string, std::string>> files;  // name, contents
  std::vector<std::string> warnings;
  json checks = json::object();
  double summary = 0.0;
};

/// Runs the configured task without touching the filesystem.
TaskOutput execute(const RunConfig& cfg);

/// Writes via a temporary file in the same directory and rename.
void write_atomic(const std::string& path, const std::string& contents);

int run_command(const std::string& config_path, const std::vector<std::string>& overrides,
                std::ostream& out, std::ostream& err);

/// Worker count: FLOQUET_WORKERS if set, else the config's `workers`.
int sweep_command(const std::string& config_path, const std::string& parameter,
                  const std::string& values, const std::vector<std::string>& overrides,
                  std::ostream& out, std::ostream& err);

int validate_command(const std::string& config_path, const std::vector<std::string>& overrides,
                     std::ostream& out, std::ostream& err);

}  // namespace floquet::cli
