#pragma once

#include <span>
#include <string>
#include <vector>

#include "flowroute/cost.hpp"
#include "flowroute/flowfield.hpp"
#include "flowroute/graph.hpp"
#include "flowroute/route.hpp"

namespace flowroute {

/// Arrival time at every waypoint when the legs are run back to back from t0.
/// A leg that touches an obstacle or is infeasible costs ctl.penalty_weight,
/// and every later leg then adds penalty_weight without sampling the field.
std::vector<double> travel_time_via(const FlowField& f, std::span<const Vec2> pts, double t0, const VehicleSpec& veh,
                                    const StepControl& ctl, const std::vector<Polygon>& obstacles = {});

struct SmoothResult {
  Route route;
  std::size_t passes = 0;
  /// Empty unless the input was returned untouched for a reason.
  std::string diagnostic;
};

/// Greedy time-aware waypoint merging. A direct leg from the current anchor to a
/// later waypoint replaces the intermediate ones only if it reaches that waypoint
/// strictly earlier and does not delay the goal. Repeats until a pass removes
/// nothing.
SmoothResult smooth_route(const FlowField& f, const Route& route, const std::vector<Polygon>& obstacles,
                          const VehicleSpec& veh, const StepControl& ctl);

}  // namespace flowroute
