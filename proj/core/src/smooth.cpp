#include "flowroute/smooth.hpp"

#include "flowroute/errors.hpp"

namespace flowroute {

namespace {

// Arrivals closer than this do not count as "strictly earlier".
constexpr double kEarlierSlack = 1e-9;

class LegTimer {
 public:
  LegTimer(const FlowField& f, const VehicleSpec& veh, const StepControl& ctl, const std::vector<Polygon>& obstacles)
      : f_(f), veh_(veh), ctl_(ctl), obstacles_(obstacles) {}

  /// Arrival at q leaving p at time t.
  double arrive(Vec2 p, Vec2 q, double t) const {
    if (t >= ctl_.penalty_weight) return t + ctl_.penalty_weight;
    if (segment_blocked({p, q}, obstacles_)) return t + ctl_.penalty_weight;
    return t + vehicle_travel_time(f_, p, q, t, veh_, ctl_).travel_time;
  }

 private:
  const FlowField& f_;
  const VehicleSpec& veh_;
  const StepControl& ctl_;
  const std::vector<Polygon>& obstacles_;
};

std::vector<Vec2> smoothing_pass(const LegTimer& timer, const std::vector<Vec2>& wp, const std::vector<double>& tt) {
  const std::size_t n = wp.size();
  if (n <= 2) return wp;

  std::vector<Vec2> out{wp[0]};
  double t_anchor = tt[0];  // arrival at the anchor wp[anchor]
  std::size_t anchor = 0;
  std::size_t j = 1;         // anchor -> wp[j] is the current direct leg
  double t_j = tt[1];        // arrival at wp[j] on the current path
  double best_goal = tt[n - 1];

  while (j + 1 < n) {
    const std::size_t k = j + 1;
    const double t_direct = timer.arrive(wp[anchor], wp[k], t_anchor);
    const double t_via = timer.arrive(wp[j], wp[k], t_j);
    bool merge = t_direct < t_via - kEarlierSlack;
    double goal_direct = 0.0;
    if (merge) {
      goal_direct = t_direct;
      for (std::size_t m = k; m + 1 < n; ++m) goal_direct = timer.arrive(wp[m], wp[m + 1], goal_direct);
      merge = goal_direct <= best_goal;
    }
    if (merge) {
      j = k;
      t_j = t_direct;
      best_goal = goal_direct;
    } else {
      out.push_back(wp[j]);
      anchor = j;
      t_anchor = t_j;
      j = k;
      t_j = t_via;
    }
  }
  out.push_back(wp[n - 1]);
  return out;
}

}  // namespace

std::vector<double> travel_time_via(const FlowField& f, std::span<const Vec2> pts, double t0, const VehicleSpec& veh,
                                    const StepControl& ctl, const std::vector<Polygon>& obstacles) {
  if (pts.size() < 2) throw ArgumentError("travel_time_via: need at least two waypoints");
  const LegTimer timer(f, veh, ctl, obstacles);
  std::vector<double> arrival{t0};
  arrival.reserve(pts.size());
  for (std::size_t i = 1; i < pts.size(); ++i) arrival.push_back(timer.arrive(pts[i - 1], pts[i], arrival.back()));
  return arrival;
}

SmoothResult smooth_route(const FlowField& f, const Route& route, const std::vector<Polygon>& obstacles,
                          const VehicleSpec& veh, const StepControl& ctl) {
  if (route.size() != route.arrival.size() || route.size() < 2) {
    throw ArgumentError("smooth_route: route needs matching waypoints and arrivals, at least two");
  }
  SmoothResult result;
  result.route = route;
  std::vector<Vec2> wp = route.waypoints;
  std::vector<double> tt = travel_time_via(f, wp, route.departure(), veh, ctl, obstacles);
  if (tt.back() >= ctl.penalty_weight) {
    result.diagnostic = "input route contains infeasible or obstructed legs; returned unchanged";
    return result;
  }

  const LegTimer timer(f, veh, ctl, obstacles);
  for (;;) {
    ++result.passes;
    std::vector<Vec2> next = smoothing_pass(timer, wp, tt);
    const bool same_count = next.size() == wp.size();
    wp = std::move(next);
    tt = travel_time_via(f, wp, route.departure(), veh, ctl, obstacles);
    if (same_count) break;
  }
  result.route.waypoints = wp;
  result.route.arrival = tt;
  return result;
}

}  // namespace flowroute
