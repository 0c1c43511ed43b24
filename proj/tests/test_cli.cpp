#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "abv/config.hpp"
#include "abv/report.hpp"

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ABV_CLI_PATH) + " " + args + " > cli_stdout.txt 2> cli_stderr.txt";
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("invalid configuration exits with a usage message") {
  CHECK(run_cli("--command bogus") == 2);
  CHECK(slurp("cli_stderr.txt").find("usage:") != std::string::npos);
  CHECK(run_cli("--no-such-flag") == 2);
  CHECK(run_cli("--command norms --p 0.5 --grid-n 64") == 2);
}

TEST_CASE("help is printed on request") {
  CHECK(run_cli("--help") == 0);
  CHECK(slurp("cli_stdout.txt").find("--command") != std::string::npos);
}

TEST_CASE("a small norms run produces a passing report") {
  const std::string out = "cli_report.json";
  // compact grid: keep the smoke run fast but meaningful at p = 2
  const int rc = run_cli("--command norms --p 2 --grid-min 1e-6 --grid-max 1e6 "
                         "--grid-n 1200 --seed 7 --out " + out);
  CHECK(rc == 0);
  const auto json = abv::Json::parse(slurp(out));
  CHECK(json["schemaVersion"] == 1);
  CHECK(json["command"] == "norms");
  CHECK(json["pass"] == true);
  bool found_hardy = false;
  for (const auto& rec : json["records"])
    if (rec["name"] == "norm-hardy p=2") {
      found_hardy = true;
      const double v = rec["values"]["value"].get<double>();
      CHECK(v > 1.9);
      CHECK(v < 2.04);
    }
  CHECK(found_hardy);
  // witness CSVs are written alongside the report
  CHECK(!slurp(out + ".witness-hardy-p2.csv").empty());
  std::remove(out.c_str());
}

TEST_CASE("reports are byte-identical for a fixed seed (timings aside)") {
  const std::string out = "cli_repeat.json";
  const std::string flags = "--command pointwise --p 1.5 --seed 123 --out " + out;
  CHECK(run_cli(flags) == 0);
  const std::string first = slurp(out);
  CHECK(run_cli(flags) == 0);
  const std::string second = slurp(out);
  const auto ja = abv::Report::strip_timings(abv::Json::parse(first));
  const auto jb = abv::Report::strip_timings(abv::Json::parse(second));
  CHECK(ja.dump() == jb.dump());
  std::remove(out.c_str());
}

TEST_CASE("the all command is deterministic too") {
  // scaled-down grids keep this quick; several gates fail at this resolution,
  // which is fine -- only byte-level reproducibility is under test
  const std::string out = "cli_all.json";
  const std::string flags =
      "--command all --p 1.5 --grid-n 800 --field-n 64 --seed 99 --out " + out;
  run_cli(flags);
  const std::string first = slurp(out);
  run_cli(flags);
  const std::string second = slurp(out);
  REQUIRE(!first.empty());
  const auto ja = abv::Report::strip_timings(abv::Json::parse(first));
  const auto jb = abv::Report::strip_timings(abv::Json::parse(second));
  CHECK(ja.dump() == jb.dump());
  std::remove(out.c_str());
  std::remove((out + ".witness-hardy-p1.5.csv").c_str());
  std::remove((out + ".witness-hardy_minus_id-p1.5.csv").c_str());
  std::remove((out + ".stretch-p1.5.csv").c_str());
}

TEST_CASE("config file values are applied and flags override them") {
  abv::CommandConfig cfg;
  cfg.command = "pointwise";
  cfg.p_list = {1.5};
  cfg.seed = 5;
  cfg.save("cli_config.txt");
  const std::string out = "cli_cfg_report.json";
  CHECK(run_cli("--config cli_config.txt --seed 9 --out " + out) == 0);
  const auto json = abv::Json::parse(slurp(out));
  CHECK(json["command"] == "pointwise");
  CHECK(json["config"]["seed"] == 9);  // flag wins over file
  std::remove("cli_config.txt");
  std::remove(out.c_str());
}

TEST_CASE("tolerance overrides are forwarded") {
  const std::string out = "cli_tol_report.json";
  // an absurdly tight tolerance forces the check to fail -> exit 1
  const int rc = run_cli(
      "--command pointwise --p 1.5 --seed 3 --tol-scaling-ratio 1e-18 --out " +
      out);
  CHECK(rc == 1);
  const auto json = abv::Json::parse(slurp(out));
  CHECK(json["pass"] == false);
  CHECK(json["config"]["tolerances"]["scaling-ratio"].get<double>() == 1e-18);
  std::remove(out.c_str());
}
