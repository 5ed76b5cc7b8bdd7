#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "flowroute/cost.hpp"
#include "flowroute/flowfield.hpp"
#include "flowroute/graph.hpp"
#include "flowroute/route.hpp"

namespace flowroute {

/// Instrumentation of one search. cfc/cmc follow the cost function only;
/// current samples spent predicting optimal directions are kept separately.
struct PlanStats {
  std::uint64_t cfc = 0;                // cost-function (edge travel time) calls
  std::uint64_t cmc = 0;                // current-model samples inside those calls
  std::uint64_t visited_edges = 0;      // edges whose cost was evaluated
  std::uint64_t scanned_edges = 0;      // out-edges looked at, evaluated or not
  std::uint64_t expanded_vertices = 0;  // EXTRACT-MIN count
  std::uint64_t closed_skips = 0;       // successors already BLACK
  std::uint64_t dominance_skips = 0;
  std::uint64_t zermelo_pruned = 0;
  std::uint64_t optdir_calls = 0;
  std::uint64_t optdir_fallbacks = 0;
  std::uint64_t optdir_cmc = 0;
  double wall_seconds = 0.0;
};

/// The five named search variants.
enum class Algorithm { kTve, kItve, kAStarTve, kZtve, kZaStarTve };

std::string_view to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view name);
inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::kTve, Algorithm::kItve, Algorithm::kAStarTve,
                                               Algorithm::kZtve, Algorithm::kZaStarTve};

struct SearchOptions {
  bool use_heuristic = false;
  bool use_zermelo_filter = false;
  /// Evaluate (u, v) only when d[u] < d[v].
  bool skip_dominated = false;
  /// Half-width of the accepted course window around the predicted optimal course.
  double delta_phi_max = 28.0 * std::numbers::pi / 180.0;
  double t0 = 0.0;
  /// Upper bound of current speed over the mission; feeds the A* heuristic.
  double v_current_max = 0.0;
  /// RK4 steps used to predict the optimal course at each expansion.
  int optdir_steps = 4;
  /// Called at each EXTRACT-MIN with (vertex, d, f).
  std::function<void(VertexId, double, double)> on_extract;

  static SearchOptions for_algorithm(Algorithm a);
  void validate() const;
};

struct SearchResult {
  Route route;
  std::vector<VertexId> vertices;
  PlanStats stats;
};

class NoRouteError : public std::runtime_error {
 public:
  NoRouteError(const std::string& what, PlanStats stats) : std::runtime_error(what), stats_(stats) {}
  const PlanStats& stats() const noexcept { return stats_; }

 private:
  PlanStats stats_;
};

/// Straight-line travel time at the best conceivable ground speed.
double heuristic(Vec2 u, Vec2 goal, double vehicle_speed, double v_current_max);

/// The edge the vehicle arrived on, with departure and arrival times.
struct PrevEdge {
  Vec2 from;
  Vec2 to;
  double t_from = 0.0;
  double t_to = 0.0;
};

struct OptimalCourse {
  double course = 0.0;  // course over ground, radians
  bool fallback = false;
  std::uint64_t cmc = 0;
};

/// Predicts the time-optimal course leaving prev.to. Starts at the midpoint of
/// the previous edge with the heading that reproduces that edge's course, then
/// integrates the optimal heading law for one previous-edge traversal time and
/// returns the final course over ground. Falls back to the previous edge's
/// course when no heading can hold it.
OptimalCourse cal_optdir(const FlowField& f, const PrevEdge& prev, const VehicleSpec& veh, int steps = 4);

/// Label-setting search with on-the-fly time-dependent edge costs.
SearchResult plan(const GeoGraph& graph, const FlowField& f, VertexId source, VertexId goal, const VehicleSpec& veh,
                  const StepControl& ctl, const SearchOptions& opt);

}  // namespace flowroute
