#pragma once

// Run configuration for the command-line front end. Settings come from three
// layers, later ones winning: built-in defaults, a flat key=value file, flags.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "robin/square_spectrum.hpp"

namespace robin::cli {

struct RunConfig {
  std::string command;
  double h = -1.0;
  double h_min = -20.0;
  double h_max = -0.01;
  std::vector<PairIndex> pairs;
  int k = 9;
  double theta = 0.0;
  int theta_samples = 0;   // 0: command default
  int resolution = 0;      // 0: command default
  std::string out;
  std::string svg;
  std::optional<double> tol_root;
  unsigned seed = 42;
};

// Keys accepted in files and as --key flags.
const std::vector<std::string>& config_keys();

// Parses "key = value" lines; '#' starts a comment, blank lines are skipped.
// Unknown keys and malformed lines raise ConfigError with the line number.
std::map<std::string, std::string> parse_config_text(std::string_view text);
std::map<std::string, std::string> load_config_file(const std::string& path);

// Applies one setting; ConfigError on a bad value. "pair" appends, and a
// value may hold several pairs separated by ';'.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

// Radians, or one of the exact tokens pi/4, pi/2, 3pi/4, pi.
double parse_theta(std::string_view s);
// "p,q" with non-negative integers.
PairIndex parse_pair(std::string_view s);
double parse_double(std::string_view s, const std::string& what);
int parse_int(std::string_view s, const std::string& what);

// Range checks plus the per-command requirements (one pair for nodal and
// sweep-theta, at least two for crossings).
void validate(const RunConfig& cfg);

}  // namespace robin::cli
