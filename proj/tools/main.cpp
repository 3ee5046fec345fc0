// Command-line front end: subcommand dispatch, config loading, flag
// overrides. All real work lives in the library.
#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "inswap/cli.hpp"
#include "inswap/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Tempered-dynamics experiments: simulation, rate evaluation, "
               "ergodic control, and constrained-rate tables"};
  app.require_subcommand(1);

  struct Flags {
    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int jobs = 0;
  };
  Flags flags;

  const std::vector<std::string> names{"simulate", "tables", "value-function",
                                       "diagnose", "rate"};
  const std::vector<std::string> blurbs{
      "run the swap-coupled or infinite-swapping simulator",
      "constrained-rate sweep over asymmetry and mass deficit",
      "single-temperature constrained value function and tilt factors",
      "association-constrained minimizer distance report",
      "one-off rate-function evaluation"};
  for (std::size_t i = 0; i < names.size(); ++i) {
    CLI::App* sub = app.add_subcommand(names[i], blurbs[i]);
    sub->add_option("--config", flags.config_path, "JSON config file");
    sub->add_option("--out", flags.out_dir, "output directory")
        ->capture_default_str();
    sub->add_option("--seed", flags.seed, "override config seed")
        ->each([&](const std::string&) { flags.seed_set = true; });
    sub->add_option("--jobs", flags.jobs, "override config worker count")
        ->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  inswap::Config cfg;
  try {
    if (!flags.config_path.empty()) {
      cfg = inswap::load_config(flags.config_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  if (flags.seed_set) cfg.seed = flags.seed;
  if (flags.jobs > 0) cfg.jobs = flags.jobs;

  const std::string name = app.get_subcommands().front()->get_name();
  return inswap::run_command(name, cfg, flags.out_dir);
}
