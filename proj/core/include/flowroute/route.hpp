#pragma once

#include <iosfwd>
#include <vector>

#include "flowroute/geometry.hpp"

namespace flowroute {

/// Waypoints with the arrival time at each; arrival.front() is the departure time.
struct Route {
  std::vector<Vec2> waypoints;
  std::vector<double> arrival;

  std::size_t size() const { return waypoints.size(); }
  double departure() const { return arrival.front(); }
  double goal_arrival() const { return arrival.back(); }
  double travel_time() const { return arrival.back() - arrival.front(); }
  double length() const;
};

/// CSV with header `idx,x,y,t_arrival`.
void write_route_csv(std::ostream& out, const Route& r);
Route read_route_csv(std::istream& in);

}  // namespace flowroute
