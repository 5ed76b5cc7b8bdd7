#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "flowroute/cost.hpp"
#include "flowroute/departure.hpp"
#include "flowroute/flowfield.hpp"
#include "flowroute/graph.hpp"
#include "flowroute/search.hpp"

namespace flowroute::cli {

/// Schema violation; `field` is the dotted path of the offending entry.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class FieldKind { kJet, kUniform, kGrid };

struct FieldSpec {
  FieldKind kind = FieldKind::kJet;
  JetParams jet;
  CurrentSample uniform;
  /// Gridded source, resolved against the scenario's directory.
  std::filesystem::path path;
  std::string format;  // "csv" or "flowgrid"
  GridInterpolation interp;
};

struct DepartureSpec {
  TimeWindow window;
  std::optional<double> dt;
  std::optional<double> tol;
  std::optional<double> horizon;
  Minimizer method = Minimizer::kBrent;
  /// Index into Scenario::starts.
  std::size_t start = 0;
};

struct OracleSpec {
  int starts = 64;
  double rho = 0.0;  // resolved: cell / 10 unless given
  double dt = 0.01;
  double max_time = 0.0;
};

/// Fully resolved scenario: every default is materialized and `resolved`
/// echoes the effective configuration.
struct Scenario {
  std::string name;
  FieldSpec field_spec;
  std::shared_ptr<const FlowField> field;
  GridSpec grid;
  VehicleSpec vehicle;
  std::vector<Vec2> starts;
  Vec2 goal;
  double t0 = 0.0;
  Algorithm algorithm = Algorithm::kZaStarTve;
  double delta_phi_max_deg = 28.0;
  double v_current_max = 0.0;
  TimeWindow v_current_max_window;
  int optdir_steps = 4;
  StepControl step;
  std::vector<Polygon> obstacles;
  DepartureSpec departure;
  OracleSpec oracle;

  /// Search options for algorithm `a` with the scenario's tuning applied.
  SearchOptions search_options(Algorithm a, double t_start) const;
  nlohmann::json resolved() const;
};

/// Parses and validates; relative file paths are taken from `base_dir`.
Scenario parse_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace flowroute::cli
