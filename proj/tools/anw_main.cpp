#include "anw/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
  CLI::App app{"Gaussian-state simulation of nonlinear waveguide arrays"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", std::string(anw::kToolVersion));

  std::string config_path, out_path, format;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "YAML configuration file")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "output file (stdout when omitted)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  auto* seed_opt = app.add_option("--seed", seed, "random seed");
  app.fallthrough();

  const char* help[] = {
      "linear supermodes and propagation constants",
      "covariance matrix at each z",
      "Bloch-Messiah squeezing K^2(z) per nonlinear supermode",
      "nullifier variances and VLF margins",
      "nullifier variances over the (c0, eta) plane",
      "optimized pump strength per z",
      "exact and first-order gains under a QPM grating",
  };
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < anw::all_commands().size(); ++i)
    subs.push_back(app.add_subcommand(std::string(anw::to_string(anw::all_commands()[i])), help[i]));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : anw::kExitConfig;
  }

  anw::Command cmd = anw::Command::supermodes;
  for (std::size_t i = 0; i < subs.size(); ++i)
    if (subs[i]->parsed()) cmd = anw::all_commands()[i];

  anw::RunConfig cfg;
  try {
    std::ifstream in(config_path);
    std::stringstream text;
    text << in.rdbuf();
    cfg = anw::parse_config(text.str());
    if (!format.empty()) cfg.output.format = anw::output_format_from_string(format);
    if (!out_path.empty()) cfg.output.path = out_path;
    if (*seed_opt) cfg.seed = seed;
  } catch (const std::exception& e) {
    std::cerr << config_path << ": " << e.what() << "\n";
    return anw::kExitConfig;
  }
  return anw::run_command(cmd, cfg, std::cout, std::cerr);
}
