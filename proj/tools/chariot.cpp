#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chariot/scenario.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool degrees = false;
  bool svg = false;
  std::vector<std::string> sets;
  std::string surface;
};

void add_common(CLI::App* sub, Flags& f, bool config_required) {
  auto* cfg = sub->add_option("config", f.config, "Scenario file (TOML)");
  if (config_required) cfg->required();
  cfg->check(CLI::ExistingFile);
  sub->add_option("--out", f.out, "Output directory (overrides [output].dir)");
  sub->add_option("--seed", f.seed, "Seed for sampled points and pairs");
  sub->add_flag("--degrees", f.degrees, "Report angles in degrees");
  sub->add_flag("--svg", f.svg, "Also write SVG plots");
  sub->add_option("--set", f.sets, "TOML snippet merged over the config, e.g. 'command.grid = 16'");
  sub->add_option("--surface", f.surface, "Surface shorthand kind:p1,p2,... (e.g. sphere:2)");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw chariot::Error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"South-pointing chariot geometry toolkit"};
  app.require_subcommand(1);
  Flags flags;
  std::string chosen;

  for (const std::string& name : chariot::scenario_commands()) {
    auto* sub = app.add_subcommand(name, "Run the " + name + " computation");
    add_common(sub, flags, false);
    sub->callback([&chosen, name] { chosen = name; });
  }
  auto* run = app.add_subcommand("run", "Run the command named in the config");
  add_common(run, flags, true);

  CLI11_PARSE(app, argc, argv);

  chariot::RunOptions opts;
  if (!flags.out.empty()) opts.out_dir = flags.out;
  opts.seed = flags.seed;
  opts.degrees = flags.degrees;
  opts.svg = flags.svg;
  opts.overrides = flags.sets;
  if (!flags.surface.empty()) opts.surface = flags.surface;
  if (!chosen.empty()) opts.command = chosen;

  try {
    const std::string text = flags.config.empty() ? std::string() : read_file(flags.config);
    const auto result =
        chariot::run_scenario(text, opts, flags.config.empty() ? "command line" : flags.config);
    for (const auto& [key, value] : result.summary) std::cout << key << " = " << value << '\n';
    return 0;
  } catch (const chariot::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
