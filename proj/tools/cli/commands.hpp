#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scenario.hpp"

namespace flowroute::cli {

enum class Command { kPlan, kSmooth, kDeparture, kOracle, kBench };

std::string_view to_string(Command c);
/// Throws ArgumentError for an unknown name.
Command parse_command(std::string_view name);

struct RunFlags {
  std::filesystem::path out;
  /// Worker cap for departure and bench; other commands run on one thread.
  unsigned jobs = 1;
  std::optional<Algorithm> algo;
  std::optional<double> tol;
};

/// In-memory output file; written only after the command succeeded.
struct Artifact {
  std::string name;
  std::string content;
};

std::uint64_t fnv1a64(std::string_view bytes);

/// Runs the command on an already loaded scenario, flag overrides applied by
/// the caller. The returned list excludes the manifest.
std::vector<Artifact> run_command(Command cmd, const Scenario& sc, unsigned jobs);

/// Manifest body: command, output-affecting flags, resolved scenario and the
/// size and checksum of every artifact.
std::string manifest_json(Command cmd, const RunFlags& flags, const Scenario& sc, const std::vector<Artifact>& artifacts);

/// Load, run, write artifacts and manifest into flags.out. On failure writes
/// error.json there (when possible) and returns a nonzero status:
/// 2 for invalid input, 3 when no route or trajectory exists, 1 otherwise.
int run_subcommand(std::string_view cmd, const std::filesystem::path& scenario_path, const RunFlags& flags);

}  // namespace flowroute::cli
