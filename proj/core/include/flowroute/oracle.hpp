#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

#include "flowroute/cost.hpp"
#include "flowroute/flowfield.hpp"

namespace flowroute {

struct TrajectoryState {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;  // wrapped to (-pi, pi]
};

struct Trajectory {
  std::vector<TrajectoryState> states;
  /// Integration stopped early because the vehicle left the field's domain.
  bool exited = false;
  /// Field samples plus gradient evaluations.
  std::uint64_t evaluations = 0;
};

/// RK4 integration of the vehicle motion with the time-optimal heading law from
/// t0 to t_end (the last step is shortened to land on t_end). Leaving `domain`,
/// or the field's own bounds when no domain is given, truncates the trajectory
/// and sets `exited`.
Trajectory integrate_zermelo(const FlowField& f, Vec2 start, double theta0, double t0, double t_end, double dt,
                             double speed, double depth = 0.0, std::optional<Box> domain = std::nullopt);

struct ShootingOptions {
  /// Initial headings tried, evenly spread over the full circle.
  int starts = 64;
  /// Accepted miss distance at the goal; a tenth of the default 0.4 cell.
  double rho = 0.04;
  double dt = 0.01;
  /// Longest flight considered; <= 0 selects 4 * straight-line distance / speed.
  double max_time = 0.0;
  std::optional<Box> domain;
  unsigned jobs = 1;
};

struct OracleResult {
  Trajectory trajectory;  // ends at the point of closest approach to the goal
  double travel_time = 0.0;
  double theta0 = 0.0;
  double miss = 0.0;
  std::uint64_t shots = 0;
};

class UnreachableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shooting on the initial heading. Each shot is scored by its signed miss at
/// the closest approach to the goal (positive when the goal lies to the left of
/// the motion); sign changes between neighbouring headings are bisected.
/// Among the shots that pass within rho, the earliest arrival wins.
OracleResult solve_bvp_shooting(const FlowField& f, Vec2 start, Vec2 goal, double t0, const VehicleSpec& veh,
                                const ShootingOptions& opt = {});

/// Writes t,x,y,theta rows with a header line.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace flowroute
