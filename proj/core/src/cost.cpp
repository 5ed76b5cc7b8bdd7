#include "flowroute/cost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "flowroute/errors.hpp"

namespace flowroute {

void VehicleSpec::validate() const {
  if (!(speed > 0.0) || !std::isfinite(speed)) throw ArgumentError("vehicle speed must be positive");
  if (dive) {
    if (!(dive->z_climbto >= 0.0)) throw ArgumentError("dive profile: climb-to depth must be >= 0");
    if (!(dive->z_diveup > dive->z_climbto)) throw ArgumentError("dive profile: dive-up depth must exceed climb-to depth");
    if (!(dive->glide_factor >= 1.0)) throw ArgumentError("dive profile: glide factor must be >= 1");
    if (dive->depth_levels < 2) throw ArgumentError("dive profile: need at least 2 depth levels");
  }
}

void StepControl::validate() const {
  if (!(h_min > 0.0 && h_min <= h0 && h0 <= h_max && h_max <= 1.0)) {
    throw ArgumentError("step control requires 0 < h_min <= h0 <= h_max <= 1");
  }
  if (!(tol > 0.0)) throw ArgumentError("step control tolerance must be positive");
  if (!(penalty_weight > 0.0) || !std::isfinite(penalty_weight)) {
    throw ArgumentError("penalty weight must be positive and finite");
  }
}

std::optional<double> speed_along_path(Vec2 dir, CurrentSample current, double speed) {
  const Vec2 c = current.vec();
  const double along = dot(dir, c);
  const double disc = along * along + speed * speed - dot(c, c);
  if (!(disc > 0.0)) return std::nullopt;
  return along + std::sqrt(disc);
}

std::optional<double> heading_for_course(Vec2 dir, CurrentSample current, double speed) {
  const auto ground = speed_along_path(dir, current, speed);
  if (!ground || !(*ground > 0.0)) return std::nullopt;
  const Vec2 through_water = dir * *ground - current.vec();
  return course_of(through_water);
}

namespace {

CurrentSample mean(CurrentSample a, CurrentSample b) { return {0.5 * (a.u + b.u), 0.5 * (a.v + b.v)}; }

EdgeCost infeasible(const StepControl& ctl, std::uint64_t cmc) { return {ctl.penalty_weight, false, cmc}; }

struct Piece {
  double dt = 0.0;
  bool ok = false;
  CurrentSample end;
};

}  // namespace

EdgeCost edge_travel_time(const FlowField& f, Vec2 a, Vec2 b, double t_start, const VehicleSpec& veh,
                          const StepControl& ctl) {
  const double length = distance(a, b);
  if (!(length > 0.0)) throw ArgumentError("edge_travel_time: zero-length edge");
  const Vec2 dir = (b - a) / length;
  std::uint64_t cmc = 0;

  auto position = [&](double s) { return s >= 1.0 ? b : a + (b - a) * s; };
  auto sample = [&](double s, double t) {
    ++cmc;
    return f.sample(position(s), veh.depth, t);
  };
  // One piece [s0, s0 + h]: the end current is taken at the arrival time
  // predicted from the start current, the mean current gives a speed, and the
  // end current is sampled once more at the arrival time that speed implies.
  auto piece = [&](double s0, double t0, CurrentSample c_start, double h) {
    Piece p;
    const double len = h * length;
    const auto v_start = speed_along_path(dir, c_start, veh.speed);
    const double v_pred = (v_start && *v_start > 0.0) ? *v_start : veh.speed;
    p.end = sample(s0 + h, t0 + len / v_pred);
    auto v = speed_along_path(dir, mean(c_start, p.end), veh.speed);
    if (v && *v > 0.0) {
      p.end = sample(s0 + h, t0 + len / *v);
      v = speed_along_path(dir, mean(c_start, p.end), veh.speed);
    }
    if (v && *v > 0.0) {
      p.ok = true;
      p.dt = len / *v;
    }
    return p;
  };

  double s = 0.0;
  double t = t_start;
  double h = ctl.h0;
  double total = 0.0;
  CurrentSample c0 = sample(0.0, t);
  std::optional<Piece> cached_half;  // first half of a rejected step, reusable as the next coarse step

  while (s < 1.0) {
    if (s + h >= 1.0 - 1e-12) h = 1.0 - s;
    const Piece coarse = cached_half ? *cached_half : piece(s, t, c0, h);
    cached_half.reset();
    const Piece half1 = piece(s, t, c0, 0.5 * h);
    if (!half1.ok) return infeasible(ctl, cmc);
    const Piece half2 = piece(s + 0.5 * h, t + half1.dt, half1.end, 0.5 * h);
    if (!half2.ok) return infeasible(ctl, cmc);
    const double fine = half1.dt + half2.dt;
    const bool can_refine = 0.5 * h >= ctl.h_min;

    double err = 0.0;
    if (!coarse.ok) {
      err = std::numeric_limits<double>::infinity();
    } else {
      err = std::abs(coarse.dt - fine) / fine;
    }
    if (err > ctl.tol && can_refine) {
      h *= 0.5;
      cached_half = half1;
      continue;
    }
    // Local extrapolation of the second-order piece rule when the pair agrees.
    const double accepted = err <= ctl.tol ? fine + (fine - coarse.dt) / 3.0 : fine;
    total += accepted;
    t += accepted;
    s += h;
    c0 = half2.end;
    if (err <= 0.25 * ctl.tol) h = std::min(2.0 * h, ctl.h_max);
  }
  return {total, true, cmc};
}

EdgeCost dive_profile_travel_time(const FlowField& f, Vec2 a, Vec2 b, double t_start, const VehicleSpec& veh,
                                  const StepControl& ctl) {
  if (!veh.dive) throw ArgumentError("dive_profile_travel_time: vehicle has no dive profile");
  const double length = distance(a, b);
  if (!(length > 0.0)) throw ArgumentError("dive_profile_travel_time: zero-length edge");
  const DiveProfile& dp = *veh.dive;
  const Vec2 dir = (b - a) / length;
  const double budget = veh.speed / dp.glide_factor;
  const auto pieces = static_cast<std::size_t>(std::ceil(1.0 / ctl.h0 - 1e-12));
  const double len = length / static_cast<double>(pieces);
  const auto levels = static_cast<std::size_t>(dp.depth_levels);

  std::uint64_t cmc = 0;
  double t = t_start;
  double total = 0.0;
  double v_pred = budget;
  for (std::size_t k = 0; k < pieces; ++k) {
    const double s_mid = (static_cast<double>(k) + 0.5) / static_cast<double>(pieces);
    const Vec2 p_mid = a + (b - a) * s_mid;
    const double t_mid = t + 0.5 * len / v_pred;
    CurrentSample avg;
    for (std::size_t i = 0; i < levels; ++i) {
      const double z = dp.z_climbto + (dp.z_diveup - dp.z_climbto) * static_cast<double>(i) /
                                          static_cast<double>(levels - 1);
      const CurrentSample c = f.sample(p_mid, z, t_mid);
      ++cmc;
      avg.u += c.u;
      avg.v += c.v;
    }
    avg.u /= static_cast<double>(levels);
    avg.v /= static_cast<double>(levels);
    const auto v = speed_along_path(dir, avg, budget);
    if (!v || !(*v > 0.0)) return infeasible(ctl, cmc);
    const double dt = len / *v;
    total += dt;
    t += dt;
    v_pred = *v;
  }
  return {total, true, cmc};
}

EdgeCost vehicle_travel_time(const FlowField& f, Vec2 a, Vec2 b, double t_start, const VehicleSpec& veh,
                             const StepControl& ctl) {
  return veh.dive ? dive_profile_travel_time(f, a, b, t_start, veh, ctl) : edge_travel_time(f, a, b, t_start, veh, ctl);
}

}  // namespace flowroute
