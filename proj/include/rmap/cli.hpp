#pragma once

// Command-line driver. run() parses a full argument list (without the program
// name), writes records to `out` and diagnostics to `err`, and returns the
// exit code: 0 success, 2 usage or domain error, 1 computation error.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rmap::cli {

struct OutputRecord {
  std::string command;
  std::vector<std::pair<std::string, std::string>> parameters;  // as given
  std::vector<std::pair<std::string, double>> values;
  std::vector<std::pair<std::string, double>> errors;  // error estimates
  std::vector<std::pair<std::string, bool>> checks;
  std::optional<std::uint64_t> seed;
  std::optional<double> wall_time;  // seconds; omitted under --quiet
  std::string status = "ok";
  std::string reason;  // set when status is "error"
};

enum class Format { json, csv };

/// One JSON object per line.
std::string to_json(const OutputRecord& r);
/// Rows "command,record,field,value"; the header is written separately.
std::string to_csv(const OutputRecord& r, std::size_t index);
std::string csv_header();

/// Default worker count: $RMAP_WORKERS if set to a positive integer, else 1.
unsigned default_workers();

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rmap::cli
