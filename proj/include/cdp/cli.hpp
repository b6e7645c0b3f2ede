#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cdp/depth.hpp"
#include "cdp/region_nd.hpp"
#include "cdp/simulate.hpp"

namespace cdp {

/// Exit codes; 0 means a report was produced.
enum ExitCode : int {
  exit_ok = 0,
  exit_internal = 1,
  exit_usage = 2,
  exit_invalid_argument = 3,
  exit_parse = 4,
  exit_io = 5,
  exit_degenerate = 6,
};

/// Reads `columns` comma-separated numeric columns. A first line that is not
/// numeric is taken as a header; blank lines are skipped. NaN, non-numeric
/// fields and wrong column counts throw Error(parse) naming the line.
Matrix read_csv(std::istream& in, std::size_t columns);
Matrix read_csv_file(const std::string& path, std::size_t columns);

nlohmann::ordered_json to_json(const RegionND& region);
nlohmann::ordered_json to_json(const ExperimentSpec& spec);
nlohmann::ordered_json to_json(const UniformityReport& report);

/// Runs one command (args excludes the program name). The JSON report goes
/// to `out` and, with --out, to that file; errors go to `err` as a JSON
/// object {"error": category, "message": text}.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cdp
