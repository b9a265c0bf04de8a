#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "navier_bubble/dimension.hpp"
#include "navier_bubble/kfield.hpp"

namespace navier_bubble::cli {

enum class OutputFormat { json, csv };

const char* to_string(OutputFormat f);

struct RunConfig {
  std::string subcommand;
  int dim = 5;
  std::string k = "const:1";
  // unset: json, except csv for landscape and solve-radial
  std::optional<OutputFormat> format;
  // subcommand flags by long name without dashes; switches hold "true"
  std::map<std::string, std::string> options;
  // "tol" (quadrature and series), "newton-tol" (radial Newton)
  std::map<std::string, double> tolerances;
  std::uint64_t seed = 0;

  OutputFormat effective_format() const;
  bool operator==(const RunConfig&) const = default;
};

// --help or --version was given; text is what to print.
struct InfoRequested {
  std::string text;
};

// Parses argv[1..] (subcommand first). Unknown flags and malformed values throw
// UsageError; --help and --version throw InfoRequested.
RunConfig parse_args(const std::vector<std::string>& args);
// Canonical argument list; parse_args(format_args(c)) == c.
std::vector<std::string> format_args(const RunConfig& config);

// const:<c> | quad:<a>,<b> | gauss:<A>,<s> | poly:<c0>,<c1>,...
// ParseError carries the offending character position.
KField parse_k_descriptor(const std::string& s);
// Comma-separated point; a single value a stands for (a, 0, ..., 0).
Point parse_point(const std::string& s, const Dimension& dim);
std::vector<double> parse_list(const std::string& s);

struct Report {
  RunConfig config;
  std::string version;
  std::string timestamp;
  nlohmann::ordered_json payload;
  std::vector<std::string> warnings;
  // table body for csv output
  std::string csv;
  int exit_code = 0;
};

inline constexpr const char* kSchema = "navier_bubble.report/1";
const char* version();

// Dispatches to the owning module. Domain diagnostics set exit_code 1;
// UsageError and NumericalError propagate.
Report run(const RunConfig& config);
std::string render(const Report& report);

// %.16e
std::string csv_number(double v);

// Whole front end: parse, run, render. Returns the process exit code.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace navier_bubble::cli
