#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "specpol/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Second-order spectra of truncated moment matrices"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  std::string format;
  std::int64_t n = -1;
  for (const auto& name : specpol::subcommands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "experiment config (JSON)")->required();
    sub->add_option("--out", out, "output file (default: stdout)");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--n", n, "run a single n instead of n_list")->check(CLI::NonNegativeNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : specpol::kExitConfig;
  }

  specpol::RunOptions opts;
  opts.config_path = config;
  if (!out.empty()) opts.out_path = out;
  if (!format.empty()) opts.format = specpol::format_from_string(format);
  if (n >= 0) opts.n = n;
  return specpol::run(app.get_subcommands().front()->get_name(), opts, std::cout, std::cerr);
}
