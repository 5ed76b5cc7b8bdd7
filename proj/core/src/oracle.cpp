#include "flowroute/oracle.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "flowroute/errors.hpp"
#include "flowroute/grid_io.hpp"
#include "flowroute/zermelo.hpp"
#include "flowroute/parallel.hpp"

namespace flowroute {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kBisectionSteps = 60;
constexpr int kApproachSteps = 80;  // golden-section steps locating the closest approach

struct Shot {
  double miss = kInf;  // signed
  double t_arrival = kInf;
  std::vector<TrajectoryState> states;
  std::uint64_t evaluations = 0;
};

TrajectoryState step_from(const FlowField& f, const TrajectoryState& s, double h, double speed, double depth,
                          std::uint64_t& calls) {
  const NavState n = rk4_step(f, {s.x, s.y, s.theta}, s.t, h, speed, depth, calls);
  return {s.t + h, n.x, n.y, wrap_angle(n.theta)};
}

double dist_to(const TrajectoryState& s, Vec2 goal) { return distance({s.x, s.y}, goal); }

Shot shoot(const FlowField& f, Vec2 start, Vec2 goal, double theta0, double t0, double t_cap, const VehicleSpec& veh,
           const ShootingOptions& opt) {
  Shot shot;
  Trajectory traj = integrate_zermelo(f, start, theta0, t0, t0 + t_cap, opt.dt, veh.speed, veh.depth, opt.domain);
  shot.evaluations = traj.evaluations;
  std::vector<TrajectoryState>& st = traj.states;
  if (st.empty()) return shot;

  std::size_t k = 0;
  for (std::size_t i = 1; i < st.size(); ++i) {
    if (dist_to(st[i], goal) < dist_to(st[k], goal)) k = i;
  }
  // the closest approach lies within one step either side of the closest sample
  const std::size_t i0 = k == 0 ? 0 : k - 1;
  const std::size_t i1 = std::min(k + 1, st.size() - 1);
  TrajectoryState best = st[k];
  if (i1 > i0) {
    double a = 0.0;
    double b = st[i1].t - st[i0].t;
    try {
      auto g = [&](double tau) { return dist_to(step_from(f, st[i0], tau, veh.speed, veh.depth, shot.evaluations), goal); };
      constexpr double r = 0.3819660112501051;
      double x1 = a + r * (b - a), x2 = b - r * (b - a);
      double g1 = g(x1), g2 = g(x2);
      for (int it = 0; it < kApproachSteps && b - a > 1e-13; ++it) {
        if (g1 <= g2) {
          b = x2, x2 = x1, g2 = g1;
          x1 = a + r * (b - a), g1 = g(x1);
        } else {
          a = x1, x1 = x2, g1 = g2;
          x2 = b - r * (b - a), g2 = g(x2);
        }
      }
      const TrajectoryState cand = step_from(f, st[i0], g1 <= g2 ? x1 : x2, veh.speed, veh.depth, shot.evaluations);
      if (dist_to(cand, goal) < dist_to(best, goal)) best = cand;
    } catch (const DomainError&) {
      // refinement stepped outside the domain; keep the sampled closest point
    }
  }

  const Vec2 p{best.x, best.y};
  const CurrentSample c = f.sample(p, veh.depth, best.t);
  ++shot.evaluations;
  const Vec2 vel = c.vec() + unit_from_angle(best.theta) * veh.speed;
  const double side = cross(vel, goal - p);
  shot.miss = (side < 0.0 ? -1.0 : 1.0) * distance(p, goal);
  shot.t_arrival = best.t;
  st.resize(best.t > st[i0].t ? i0 + 1 : k + 1);
  if (best.t > st.back().t) st.push_back(best);
  shot.states = std::move(st);
  return shot;
}

}  // namespace

Trajectory integrate_zermelo(const FlowField& f, Vec2 start, double theta0, double t0, double t_end, double dt,
                             double speed, double depth, std::optional<Box> domain) {
  if (!(dt > 0.0)) throw ArgumentError("integrate_zermelo: dt must be positive");
  if (!(t_end >= t0)) throw ArgumentError("integrate_zermelo: t_end precedes t0");
  if (!domain) domain = f.bounds();
  Trajectory traj;
  TrajectoryState s{t0, start.x, start.y, wrap_angle(theta0)};
  if (domain && !domain->contains(start, 1e-12)) {
    traj.exited = true;
    return traj;
  }
  traj.states.push_back(s);
  const auto steps = static_cast<std::size_t>(std::ceil((t_end - t0) / dt - 1e-9));
  for (std::size_t i = 0; i < steps; ++i) {
    const double h = i + 1 == steps ? t_end - s.t : dt;
    if (!(h > 0.0)) break;
    TrajectoryState next;
    try {
      next = step_from(f, s, h, speed, depth, traj.evaluations);
    } catch (const DomainError&) {
      traj.exited = true;
      break;
    }
    if (domain && !domain->contains({next.x, next.y}, 1e-12)) {
      traj.exited = true;
      break;
    }
    s = next;
    traj.states.push_back(s);
  }
  return traj;
}

OracleResult solve_bvp_shooting(const FlowField& f, Vec2 start, Vec2 goal, double t0, const VehicleSpec& veh,
                                const ShootingOptions& opt) {
  veh.validate();
  if (opt.starts < 2) throw ArgumentError("shooting needs at least two initial headings");
  if (!(opt.rho > 0.0) || !(opt.dt > 0.0)) throw ArgumentError("shooting rho and dt must be positive");
  const std::optional<Box> domain = opt.domain ? opt.domain : f.bounds();
  if (domain && !domain->contains(goal, 1e-12)) throw ArgumentError("goal lies outside the field domain");
  if (domain && !domain->contains(start, 1e-12)) throw ArgumentError("start lies outside the field domain");

  OracleResult result;
  const double dist0 = distance(start, goal);
  if (dist0 <= opt.rho) {
    result.trajectory.states.push_back({t0, start.x, start.y, 0.0});
    result.miss = dist0;
    return result;
  }
  const double t_cap = opt.max_time > 0.0 ? opt.max_time : 4.0 * dist0 / veh.speed;
  ShootingOptions run = opt;
  run.domain = domain;

  const auto n = static_cast<std::size_t>(opt.starts);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
  std::vector<double> theta(n);
  for (std::size_t i = 0; i < n; ++i) theta[i] = -std::numbers::pi + step * static_cast<double>(i);
  std::vector<Shot> grid(n);
  detail::parallel_for(n, opt.jobs, [&](std::size_t i) {
    grid[i] = shoot(f, start, goal, theta[i], t0, t_cap, veh, run);
    grid[i].states.clear();
  });

  struct Candidate {
    double theta = 0.0;
    Shot shot;
  };
  std::vector<Candidate> roots(n);
  std::vector<char> found(n, 0);
  std::vector<std::uint64_t> shots(n, 0);
  std::vector<std::uint64_t> evals(n, 0);
  detail::parallel_for(n, opt.jobs, [&](std::size_t i) {
    const Shot& lo_shot = grid[i];
    const Shot& hi_shot = grid[(i + 1) % n];
    if (!std::isfinite(lo_shot.miss) || !std::isfinite(hi_shot.miss)) return;
    if ((lo_shot.miss < 0.0) == (hi_shot.miss < 0.0)) return;
    double lo = theta[i];
    double hi = theta[i] + step;
    double m_lo = lo_shot.miss;
    Candidate best{lo, lo_shot};
    for (int it = 0; it < kBisectionSteps; ++it) {
      const double mid = 0.5 * (lo + hi);
      Shot s = shoot(f, start, goal, mid, t0, t_cap, veh, run);
      ++shots[i];
      evals[i] += s.evaluations;
      s.states.clear();
      if (std::abs(s.miss) < std::abs(best.shot.miss)) best = {mid, s};
      if ((s.miss < 0.0) == (m_lo < 0.0)) {
        lo = mid;
        m_lo = s.miss;
      } else {
        hi = mid;
      }
    }
    roots[i] = best;
    found[i] = 1;
  });

  result.shots = n;
  const Candidate* pick = nullptr;
  auto consider = [&](const Candidate& c) {
    if (!(std::abs(c.shot.miss) <= opt.rho)) return;
    if (!pick || c.shot.t_arrival < pick->shot.t_arrival) pick = &c;
  };
  std::vector<Candidate> direct;
  direct.reserve(n);
  for (std::size_t i = 0; i < n; ++i) direct.push_back({theta[i], grid[i]});
  for (std::size_t i = 0; i < n; ++i) {
    result.shots += shots[i];
    if (found[i]) consider(roots[i]);
  }
  for (const auto& c : direct) consider(c);
  if (!pick) throw UnreachableError("no initial heading reaches the goal within the time cap");

  Shot final_shot = shoot(f, start, goal, pick->theta, t0, t_cap, veh, run);
  result.trajectory.states = std::move(final_shot.states);
  for (const auto& g : grid) result.trajectory.evaluations += g.evaluations;
  for (const auto e : evals) result.trajectory.evaluations += e;
  result.theta0 = wrap_angle(pick->theta);
  result.miss = final_shot.miss;
  result.travel_time = final_shot.t_arrival - t0;
  return result;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,x,y,theta\n";
  for (const auto& s : traj.states) {
    os << format_double(s.t) << ',' << format_double(s.x) << ',' << format_double(s.y) << ','
       << format_double(s.theta) << '\n';
  }
}

}  // namespace flowroute
