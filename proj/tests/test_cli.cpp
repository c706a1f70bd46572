#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "mohardy/config.hpp"
#include "mohardy/csv.hpp"
#include "mohardy/error.hpp"
#include "mohardy/experiments.hpp"

using namespace mohardy;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mohardy_test_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_config(const fs::path& dir, const std::string& body) {
  const fs::path p = dir / "run.cfg";
  std::ofstream(p) << body;
  return p;
}

// Runs the command line tool; skips when the binary was not built.
int run_cli(const std::string& args) {
  const char* exe = std::getenv("MOHARDY_CLI");
  if (!exe) return -1;
  const std::string cmd = std::string("\"") + exe + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto cfg = parse_config("# comment\nexperiment = calderon\nseed = 7\ngrid.L = 8\ngrid.h = 0.25\ngrid.levels = 40\n");
  CHECK(cfg.experiment == "calderon");
  CHECK(cfg.seed == 7u);
  CHECK(cfg.grid.cells == 64);

  CHECK_THROWS_AS(parse_config("seed = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("experiment = x\nbogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("experiment = x\nseed = 1\nseed = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("experiment = x\nseed = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("experiment = x\ngrid.rho = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("experiment = x\ngrowth.kind = power\ngrowth.p = 1.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("experiment = x\ngrowth.kind = log\ngrowth.alpha = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("experiment = x\ngrid.cells = 64\ngrid.h = 0.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("experiment calderon\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("experiment = x\ngrid.L = 16\n"), ConfigError);  // t_max > L

  ExperimentConfig unknown;
  unknown.experiment = "no-such-experiment";
  CHECK_THROWS_AS(run_experiment(unknown), ConfigError);
}

TEST_CASE("experiment registry") {
  const auto& reg = experiment_registry();
  CHECK(reg.size() == 10);
  bool pipeline = false, carleson = false;
  for (const auto& e : reg) {
    pipeline |= e.name == "pipeline";
    carleson |= e.name == "carleson";
  }
  CHECK(pipeline);
  CHECK(carleson);
  const std::string text = list_experiments();
  CHECK(std::count(text.begin(), text.end(), '\n') == 10);
}

TEST_CASE("float formatting keeps 17 significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.0) == "0");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(std::stod(format_double(-2.5e-300)) == -2.5e-300);
}

TEST_CASE("CSV writer quoting") {
  const auto dir = scratch("csv");
  {
    CsvWriter w(dir / "t.csv", {"name", "value", "count"});
    w.row({std::string("a,b"), 0.5, std::int64_t{3}});
  }
  CHECK(slurp(dir / "t.csv") == "name,value,count\n\"a,b\",0.5,3\n");
}

TEST_CASE("library runs write CSVs") {
  const auto dir = scratch("lib");
  SUBCASE("plancherel") {
    auto cfg = parse_config("experiment = plancherel\nrun.samples = 3\n");
    cfg.out = dir;
    const auto r = run_experiment(cfg);
    CHECK(r.passed());
    const auto rows = read_csv(dir / "plancherel_ratios.csv");
    REQUIRE(rows.size() == 4);
    const auto& header = rows[0];
    const auto col = std::find(header.begin(), header.end(), "ratio") - header.begin();
    REQUIRE(col < static_cast<long>(header.size()));
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][col]) > 0.0);
  }
  SUBCASE("tent-decompose") {
    auto cfg = parse_config("experiment = tent-decompose\nrun.samples = 2\n");
    cfg.out = dir;
    CHECK(run_experiment(cfg).passed());
    CHECK(fs::exists(dir / "tent-decompose_checks.csv"));
  }
}

TEST_CASE("command line exit codes") {
  if (!std::getenv("MOHARDY_CLI")) return;
  const auto dir = scratch("exe");
  const auto out = (dir / "out").string();

  CHECK(run_cli("list") == kExitOk);
  CHECK(run_cli("") == kExitConfigError);
  CHECK(run_cli("run " + (dir / "missing.cfg").string()) == kExitConfigError);

  const auto bad = write_config(dir, "experiment = calderon\ngrid.rho = 0.5\n");
  CHECK(run_cli("run " + bad.string()) == kExitConfigError);

  const auto good = write_config(dir, "experiment = calderon\nrun.samples = 2\n");
  CHECK(run_cli("run " + good.string() + " --out " + out + " --seed 3 --threads 2") == kExitOk);
  CHECK(fs::exists(fs::path(out) / "calderon_checks.csv"));

  const auto failing = write_config(dir, "experiment = lemma52\ngrowth.kind = power\ngrowth.p = 0.5\n"
                                         "run.epsilon = 0.1\nrun.refine = false\n");
  CHECK(run_cli("run " + failing.string() + " --out " + out) == kExitAssertionFailed);
}
