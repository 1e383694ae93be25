// nbgas: batch verification runner. The JSON report goes to the configured
// path (stdout when none); a one-line-per-check summary goes to stderr.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nbgas/cli.hpp"
#include "nbgas/errors.hpp"

namespace {

void summarize(const nbgas::cli::Report& rep) {
  for (const auto& r : rep.checks) {
    std::fprintf(stderr, "%s  %s / %s", r.pass ? "ok  " : "FAIL", r.check.c_str(), r.name.c_str());
    if (r.residual) std::fprintf(stderr, "  residual=%.3e", *r.residual);
    if (r.order) std::fprintf(stderr, "  order=%.3f", *r.order);
    if (!r.note.empty()) std::fprintf(stderr, "  (%s)", r.note.c_str());
    std::fprintf(stderr, "\n");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nested Bethe ansatz workbench for the lattice two-component Bose gas"};
  app.require_subcommand(1);
  std::string config_path;
  std::vector<std::string> sets;
  for (const char* name : {"verify", "scan", "solve", "zero-modes"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--set", sets, "override a config field, key=value (repeatable)");
  }
  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    const auto cfg = nbgas::cli::load_config(config_path, sets);
    const int workers = nbgas::cli::worker_count();
    const auto rep = nbgas::cli::run_command(command, cfg, workers);
    nbgas::cli::write_outputs(rep, cfg);
    if (cfg.output_json.empty()) std::cout << rep.to_json().dump(2) << '\n';
    summarize(rep);
    return rep.ok() ? 0 : 1;
  } catch (const nbgas::CapacityError& e) {
    std::cerr << "nbgas: " << e.what() << " (dimension " << e.dimension() << ")\n";
    return 2;
  } catch (const nbgas::Error& e) {
    std::cerr << "nbgas: " << e.what() << '\n';
    return 2;
  }
}
