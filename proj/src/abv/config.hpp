#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "abv/report.hpp"

namespace abv {

// Run configuration. All quantities are dimensionless; grid bounds are
// half-line coordinates, field extent is the side length of the periodic
// square. File values are overridden by CLI flags.
struct CommandConfig {
  std::string command = "all";
  std::vector<double> p_list;        // empty = per-command defaults
  bool p_explicit_empty = false;     // a `p` key was given with no values
  double grid_min = 1e-6;
  double grid_max = 1e6;
  int grid_n = 4000;
  int field_n = 256;
  double extent = 8.0;
  std::uint64_t seed = 12345;
  std::map<std::string, double> tolerances;  // per-check overrides
  std::string output_path;

  void validate() const;
  double tolerance_or(const std::string& check, double fallback) const;

  Json to_json() const;

  // flat key-value text format: `key = value`, `#` comments
  std::string to_file_format() const;
  static CommandConfig from_file_format(const std::string& text);
  void save(const std::string& path) const;
  static CommandConfig load(const std::string& path);
};

const std::vector<std::string>& known_commands();

}  // namespace abv
