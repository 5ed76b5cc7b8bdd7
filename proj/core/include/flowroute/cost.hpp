#pragma once

#include <cstdint>
#include <optional>

#include "flowroute/flowfield.hpp"
#include "flowroute/geometry.hpp"

namespace flowroute {

/// Simplified saw-tooth dive: the glider cycles between climb-to and dive-up depths.
struct DiveProfile {
  double z_climbto = 0.0;
  double z_diveup = 0.0;
  /// Through-water distance per unit horizontal distance (>= 1).
  double glide_factor = 1.0;
  /// Uniform depth samples between the two turning depths.
  int depth_levels = 5;
};

struct VehicleSpec {
  /// Speed through the water.
  double speed = 0.5;
  /// Depth at which straight-line edge costs sample the field.
  double depth = 0.0;
  std::optional<DiveProfile> dive;

  void validate() const;
};

/// Step-size control of the along-edge travel-time integration. Step sizes are
/// fractions of the edge length.
struct StepControl {
  double h0 = 0.25;
  double tol = 1e-3;
  double h_min = 1.0 / 256.0;
  double h_max = 1.0;
  double penalty_weight = 1e12;

  void validate() const;
};

struct EdgeCost {
  double travel_time = 0.0;
  bool feasible = true;
  std::uint64_t cmc = 0;  // current-model samples taken
};

/// Ground speed along `dir` when the vehicle holds that track through `current`:
/// the forward intersection of the track line with the circle of radius `speed`
/// centred on the current vector. nullopt when the discriminant is not positive.
std::optional<double> speed_along_path(Vec2 dir, CurrentSample current, double speed);

/// Heading (through the water) that keeps the ground track on `dir`, or nullopt
/// if no heading makes forward progress along it.
std::optional<double> heading_for_course(Vec2 dir, CurrentSample current, double speed);

/// Time to run the straight segment a -> b starting at t_start. The segment is
/// split adaptively; each piece uses the mean of the currents at its ends.
/// Infeasible (no real or non-positive ground speed) pieces make the whole edge
/// cost exactly ctl.penalty_weight.
EdgeCost edge_travel_time(const FlowField& f, Vec2 a, Vec2 b, double t_start, const VehicleSpec& veh,
                          const StepControl& ctl);

/// Travel time under the simplified dive profile: ceil(1/h0) equal pieces, each
/// using the depth-averaged current at the piece midpoint and midpoint time, with
/// the horizontal speed budget reduced by the glide factor.
EdgeCost dive_profile_travel_time(const FlowField& f, Vec2 a, Vec2 b, double t_start, const VehicleSpec& veh,
                                  const StepControl& ctl);

/// Dispatches to the dive-profile cost when the vehicle carries a profile.
EdgeCost vehicle_travel_time(const FlowField& f, Vec2 a, Vec2 b, double t_start, const VehicleSpec& veh,
                             const StepControl& ctl);

}  // namespace flowroute
