#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "cavity/cli/config.hpp"

namespace cavity::cli {

// Numeric table; NaN marks a point that could not be evaluated.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// Header row plus one line per row, 17 significant digits, '\n' endings.
std::string to_csv(const Table& table);
// Inverse of to_csv. Throws std::runtime_error on malformed input.
Table read_csv(std::string_view text);

struct Artifact {
  std::string name;  // appended to the output prefix
  std::string content;
};

struct RunResult {
  std::vector<Artifact> files;
  // Some point failed to converge or was flagged; see the flag columns.
  bool flagged = false;
};

// Everything a command produces, without touching the file system.
RunResult execute(const RunConfig& config);

// Computes, writes <prefix><name> for every artifact and reports on `log`.
// Returns 0, or 2 when the result is flagged. File errors throw.
int run(const RunConfig& config, std::ostream& log);

// Tables of the individual commands.
Table figure3_table(const RunConfig& config);

}  // namespace cavity::cli
