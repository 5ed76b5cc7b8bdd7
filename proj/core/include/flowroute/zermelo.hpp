#pragma once

#include <cstdint>

#include "flowroute/flowfield.hpp"

namespace flowroute {

/// Position and heading of a vehicle steering by the time-optimal control law.
struct NavState {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
};

/// Time-optimal heading rate for the local current gradient:
///   dtheta/dt = -u_y cos^2 + (u_x - v_y) cos sin + v_x sin^2.
inline double heading_rate(const CurrentGradient& g, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return -g.u_y * c * c + (g.u_x - g.v_y) * c * s + g.v_x * s * s;
}

/// Right-hand side of the motion + heading system. Counts one sample and one
/// gradient evaluation per call in `calls`.
inline NavState nav_derivative(const FlowField& f, const NavState& s, double t, double speed, double depth,
                               std::uint64_t& calls) {
  const Vec2 p{s.x, s.y};
  const CurrentSample c = f.sample(p, depth, t);
  const CurrentGradient g = f.gradient(p, depth, t);
  calls += 2;
  return {c.u + speed * std::cos(s.theta), c.v + speed * std::sin(s.theta), heading_rate(g, s.theta)};
}

/// Classic fourth-order Runge-Kutta step of size dt.
inline NavState rk4_step(const FlowField& f, const NavState& s, double t, double dt, double speed, double depth,
                         std::uint64_t& calls) {
  auto add = [](const NavState& a, const NavState& k, double h) {
    return NavState{a.x + h * k.x, a.y + h * k.y, a.theta + h * k.theta};
  };
  const NavState k1 = nav_derivative(f, s, t, speed, depth, calls);
  const NavState k2 = nav_derivative(f, add(s, k1, 0.5 * dt), t + 0.5 * dt, speed, depth, calls);
  const NavState k3 = nav_derivative(f, add(s, k2, 0.5 * dt), t + 0.5 * dt, speed, depth, calls);
  const NavState k4 = nav_derivative(f, add(s, k3, dt), t + dt, speed, depth, calls);
  return {s.x + dt / 6.0 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x), s.y + dt / 6.0 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y),
          s.theta + dt / 6.0 * (k1.theta + 2 * k2.theta + 2 * k3.theta + k4.theta)};
}

}  // namespace flowroute
