#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"
#include "flowroute/errors.hpp"

int main(int argc, char** argv) {
  using namespace flowroute;
  CLI::App app{"Time-optimal route planning through time-varying currents"};
  app.require_subcommand(1);

  std::string scenario;
  cli::RunFlags flags;
  std::string algo;
  double tol = 0.0;

  for (const char* name : {"plan", "smooth", "departure", "oracle", "bench"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--scenario", scenario, "Scenario JSON file")->required();
    sub->add_option("--out", flags.out, "Output directory")->required();
    sub->add_option("--jobs", flags.jobs, "Worker threads for departure and bench")->check(CLI::PositiveNumber);
    sub->add_option("--algo", algo, "Search variant")->check(CLI::IsMember({"tve", "itve", "astar", "ztve", "zatve"}));
    sub->add_option("--tol", tol, "Step-size control tolerance")->check(CLI::PositiveNumber);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    // usage errors share the invalid-input status; no output directory is known yet
    app.exit(e);
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  if (!algo.empty()) flags.algo = parse_algorithm(algo);
  if (sub->count("--tol") > 0) flags.tol = tol;
  return cli::run_subcommand(sub->get_name(), scenario, flags);
}
