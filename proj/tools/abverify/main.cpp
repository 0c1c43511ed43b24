// Command-line front end for the abverify shared library. Flags override
// config-file values; `--tol-<check> <value>` sets per-check tolerance
// overrides.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "abverify.h"

namespace {

struct TolOverrides {
  std::map<std::string, double> values;
};

// CLI11 has no wildcard flags; `--tol-*` pairs are consumed before parsing.
TolOverrides extract_tolerances(std::vector<std::string>& args) {
  TolOverrides out;
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--tol-", 0) == 0) {
      std::string name = a.substr(6);
      std::string value;
      const auto eq = name.find('=');
      if (eq != std::string::npos) {
        value = name.substr(eq + 1);
        name = name.substr(0, eq);
      } else if (i + 1 < args.size()) {
        value = args[++i];
      } else {
        throw CLI::ValidationError("--tol-" + name + " needs a value");
      }
      out.values[name] = std::stod(value);
    } else {
      kept.push_back(a);
    }
  }
  args = std::move(kept);
  return out;
}

int fail_usage(const std::string& msg) {
  std::cerr << "error: " << msg << "\n\n"
            << "usage: abverify --command {pointwise|norms|stretch|crosscheck2d|heat|all}\n"
            << "                [--p P ...] [--grid-min X] [--grid-max X] [--grid-n N]\n"
            << "                [--field-n N] [--extent L] [--seed S] [--out FILE]\n"
            << "                [--config FILE] [--tol-<check> VALUE]\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical verification suite for sharp Beurling/Hardy constants"};
  app.allow_extras(false);

  std::string command;
  std::vector<double> p_list;
  double grid_min = -1.0, grid_max = -1.0, extent = -1.0;
  int grid_n = -1, field_n = -1;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out_path, config_path;

  app.add_option("--command", command, "suite to run");
  app.add_option("--p", p_list, "exponent list (repeatable)")->expected(-1);
  app.add_option("--grid-min", grid_min, "half-line grid lower end");
  app.add_option("--grid-max", grid_max, "half-line grid upper end");
  app.add_option("--grid-n", grid_n, "half-line grid size");
  app.add_option("--field-n", field_n, "plane field resolution (power of two)");
  app.add_option("--extent", extent, "plane field side length");
  app.add_option("--seed", seed, "random seed")->each([&](const std::string&) {
    seed_set = true;
  });
  app.add_option("--out", out_path, "report JSON output path");
  app.add_option("--config", config_path, "flat key-value configuration file");

  std::vector<std::string> args(argv + 1, argv + argc);
  TolOverrides tols;
  try {
    tols = extract_tolerances(args);
  } catch (const std::exception& e) {
    return fail_usage(e.what());
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp") {
      std::cout << app.help();
      return 0;
    }
    return fail_usage(e.what());
  }

  abv_config* cfg = config_path.empty() ? abv_config_create()
                                        : abv_config_load(config_path.c_str());
  if (!cfg) return fail_usage(abv_last_error());

  int rc = ABV_OK;
  if (!command.empty()) rc = abv_config_set_command(cfg, command.c_str());
  if (rc == ABV_OK && !p_list.empty())
    rc = abv_config_set_p_list(cfg, p_list.data(), p_list.size());
  if (rc == ABV_OK && (grid_min > 0.0 || grid_max > 0.0 || grid_n > 0)) {
    // partial grid overrides fall back to the config's current values
    abv_config* probe = cfg;
    (void)probe;
    double gmin = grid_min, gmax = grid_max;
    int gn = grid_n;
    // defaults mirror CommandConfig's
    if (gmin <= 0.0) gmin = 1e-6;
    if (gmax <= 0.0) gmax = 1e6;
    if (gn <= 0) gn = 4000;
    rc = abv_config_set_grid(cfg, gmin, gmax, gn);
  }
  if (rc == ABV_OK && (field_n > 0 || extent > 0.0))
    rc = abv_config_set_field(cfg, field_n > 0 ? field_n : 256,
                              extent > 0.0 ? extent : 8.0);
  if (rc == ABV_OK && seed_set) rc = abv_config_set_seed(cfg, seed);
  if (rc == ABV_OK && !out_path.empty())
    rc = abv_config_set_out(cfg, out_path.c_str());
  for (const auto& [name, value] : tols.values) {
    if (rc != ABV_OK) break;
    rc = abv_config_set_tolerance(cfg, name.c_str(), value);
  }
  if (rc != ABV_OK) {
    abv_config_free(cfg);
    return fail_usage(abv_last_error());
  }

  abv_report* report = abv_run(cfg);
  abv_config_free(cfg);
  if (!report) return fail_usage(abv_last_error());

  const std::string json = abv_report_json(report);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    out << json;
    if (!out.good()) {
      std::cerr << "error: cannot write " << out_path << "\n";
      abv_report_free(report);
      return 2;
    }
  }

  // human summary
  const auto parsed = nlohmann::json::parse(json);
  for (const auto& rec : parsed["records"]) {
    const bool pass = rec["pass"].get<bool>();
    std::printf("[%s] %-40s %s\n", pass ? "PASS" : "FAIL",
                rec["name"].get<std::string>().c_str(),
                rec["paperAnchor"].get<std::string>().c_str());
    if (!pass) {
      std::printf("       values: %s tolerance: %s\n",
                  rec["values"].dump().c_str(), rec["tolerance"].dump().c_str());
    }
  }
  const bool pass = abv_report_pass(report) != 0;
  std::printf("overall: %s (%zu checks)\n", pass ? "PASS" : "FAIL",
              abv_report_record_count(report));
  abv_report_free(report);
  return pass ? 0 : 1;
}
