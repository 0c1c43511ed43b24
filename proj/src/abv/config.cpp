#include "abv/config.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "abv/errors.hpp"

namespace abv {

const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> cmds = {"pointwise", "norms",    "stretch",
                                                "crosscheck2d", "heat", "all"};
  return cmds;
}

void CommandConfig::validate() const {
  const auto& cmds = known_commands();
  require(std::find(cmds.begin(), cmds.end(), command) != cmds.end(),
          ErrorCode::InvalidArgument, "unknown command: " + command);
  require(!(p_explicit_empty && p_list.empty()), ErrorCode::InvalidArgument,
          "p list given but empty");
  for (double p : p_list)
    require(std::isfinite(p) && p > 1.0, ErrorCode::InvalidArgument,
            "p values must lie in (1, inf)");
  require(grid_min > 0.0 && grid_max > grid_min, ErrorCode::InvalidArgument,
          "need 0 < grid.min < grid.max");
  require(grid_n >= 16 && grid_n <= 2'000'000, ErrorCode::InvalidArgument,
          "grid.n out of range");
  require(field_n >= 32 && (field_n & (field_n - 1)) == 0,
          ErrorCode::InvalidArgument, "field.n must be a power of two >= 32");
  require(extent > 0.0, ErrorCode::InvalidArgument, "field.extent must be positive");
  for (const auto& [k, v] : tolerances)
    require(std::isfinite(v) && v > 0.0, ErrorCode::InvalidArgument,
            "tolerance override must be positive: " + k);
}

double CommandConfig::tolerance_or(const std::string& check, double fallback) const {
  auto it = tolerances.find(check);
  return it == tolerances.end() ? fallback : it->second;
}

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Json CommandConfig::to_json() const {
  Json j;
  j["command"] = command;
  j["p"] = p_list;
  j["grid"] = Json{{"min", grid_min}, {"max", grid_max}, {"n", grid_n}};
  j["field"] = Json{{"n", field_n}, {"extent", extent}};
  j["seed"] = seed;
  Json tol = Json::object();
  for (const auto& [k, v] : tolerances) tol[k] = v;
  j["tolerances"] = std::move(tol);
  j["out"] = output_path;
  return j;
}

std::string CommandConfig::to_file_format() const {
  std::ostringstream os;
  os << "# abverify run configuration (all quantities dimensionless)\n";
  os << "command = " << command << "\n";
  if (!p_list.empty()) {
    os << "p = ";
    for (std::size_t i = 0; i < p_list.size(); ++i)
      os << (i ? ", " : "") << fmt_double(p_list[i]);
    os << "\n";
  }
  os << "grid.min = " << fmt_double(grid_min) << "\n";
  os << "grid.max = " << fmt_double(grid_max) << "\n";
  os << "grid.n = " << grid_n << "\n";
  os << "field.n = " << field_n << "\n";
  os << "field.extent = " << fmt_double(extent) << "\n";
  os << "seed = " << seed << "\n";
  for (const auto& [k, v] : tolerances)
    os << "tol." << k << " = " << fmt_double(v) << "\n";
  if (!output_path.empty()) os << "out = " << output_path << "\n";
  return os.str();
}

CommandConfig CommandConfig::from_file_format(const std::string& text) {
  CommandConfig cfg;
  cfg.p_list.clear();
  std::istringstream in(text);
  std::string line;
  const auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    const auto b = s.find_last_not_of(" \t\r\n");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorCode::InvalidArgument,
            "config line missing '=': " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "command") {
      cfg.command = value;
    } else if (key == "p") {
      std::istringstream vs(value);
      std::string tok;
      while (std::getline(vs, tok, ',')) {
        const std::string t = trim(tok);
        if (!t.empty()) cfg.p_list.push_back(std::stod(t));
      }
      cfg.p_explicit_empty = cfg.p_list.empty();
    } else if (key == "grid.min") {
      cfg.grid_min = std::stod(value);
    } else if (key == "grid.max") {
      cfg.grid_max = std::stod(value);
    } else if (key == "grid.n") {
      cfg.grid_n = std::stoi(value);
    } else if (key == "field.n") {
      cfg.field_n = std::stoi(value);
    } else if (key == "field.extent") {
      cfg.extent = std::stod(value);
    } else if (key == "seed") {
      cfg.seed = std::strtoull(value.c_str(), nullptr, 10);
    } else if (key == "out") {
      cfg.output_path = value;
    } else if (key.rfind("tol.", 0) == 0) {
      cfg.tolerances[key.substr(4)] = std::stod(value);
    } else {
      fail(ErrorCode::InvalidArgument, "unknown config key: " + key);
    }
  }
  return cfg;
}

void CommandConfig::save(const std::string& path) const {
  std::ofstream out(path);
  require(out.good(), ErrorCode::Io, "cannot open " + path);
  out << to_file_format();
  require(out.good(), ErrorCode::Io, "write failed for " + path);
}

CommandConfig CommandConfig::load(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::Io, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_file_format(buf.str());
}

}  // namespace abv
