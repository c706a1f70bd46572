// Command line runner: `mohardy run <config>` and `mohardy list`.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mohardy/error.hpp"
#include "mohardy/experiments.hpp"
#include "mohardy/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Musielak-Orlicz Hardy space experiments"};
  app.require_subcommand(1);

  unsigned threads = 1;
  app.add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 256u));

  auto* run = app.add_subcommand("run", "run the experiment described by a config file");
  std::string config_path;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  run->add_option("config", config_path, "key=value config file")->required();
  run->add_option("--out", out, "output directory (overrides 'out')");
  run->add_option("--seed", seed, "random seed (overrides 'seed')");
  run->add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 256u));

  auto* list = app.add_subcommand("list", "list the available experiments");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : mohardy::kExitConfigError;
  }

  mohardy::set_worker_threads(threads);
  if (list->parsed()) {
    std::cout << mohardy::list_experiments();
    return 0;
  }
  std::optional<std::filesystem::path> out_dir;
  if (out) out_dir = *out;
  try {
    return mohardy::run_from_file(config_path, out_dir, seed, std::cout);
  } catch (const mohardy::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return mohardy::kExitAssertionFailed;
  }
}
