#include "flowroute/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "flowroute/errors.hpp"
#include "flowroute/indexed_heap.hpp"
#include "flowroute/zermelo.hpp"

namespace flowroute {

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kTve: return "tve";
    case Algorithm::kItve: return "itve";
    case Algorithm::kAStarTve: return "astar";
    case Algorithm::kZtve: return "ztve";
    case Algorithm::kZaStarTve: return "zatve";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : kAllAlgorithms) {
    if (to_string(a) == name) return a;
  }
  throw ArgumentError("unknown algorithm '" + std::string(name) + "' (tve|itve|astar|ztve|zatve)");
}

SearchOptions SearchOptions::for_algorithm(Algorithm a) {
  SearchOptions o;
  o.skip_dominated = a != Algorithm::kTve;
  o.use_heuristic = a == Algorithm::kAStarTve || a == Algorithm::kZaStarTve;
  o.use_zermelo_filter = a == Algorithm::kZtve || a == Algorithm::kZaStarTve;
  return o;
}

void SearchOptions::validate() const {
  if (!(delta_phi_max > 0.0 && delta_phi_max <= std::numbers::pi)) {
    throw ArgumentError("delta_phi_max must lie in (0, pi]");
  }
  if (use_heuristic && !(v_current_max >= 0.0)) throw ArgumentError("v_current_max must be >= 0");
  if (use_zermelo_filter && optdir_steps < 1) throw ArgumentError("optdir_steps must be >= 1");
}

double heuristic(Vec2 u, Vec2 goal, double vehicle_speed, double v_current_max) {
  return distance(u, goal) / (vehicle_speed + v_current_max);
}

OptimalCourse cal_optdir(const FlowField& f, const PrevEdge& prev, const VehicleSpec& veh, int steps) {
  OptimalCourse out;
  const Vec2 delta = prev.to - prev.from;
  const double len = norm(delta);
  if (!(len > 0.0)) throw ArgumentError("cal_optdir: degenerate previous edge");
  const Vec2 dir = delta / len;
  out.course = course_of(dir);
  const double duration = prev.t_to - prev.t_from;
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    out.fallback = true;
    return out;
  }

  const Vec2 mid = prev.from + delta * 0.5;
  double t = 0.5 * (prev.t_from + prev.t_to);
  try {
    const CurrentSample c_mid = f.sample(mid, veh.depth, t);
    ++out.cmc;
    const auto theta0 = heading_for_course(dir, c_mid, veh.speed);
    if (!theta0) {
      out.fallback = true;
      return out;
    }
    NavState s{mid.x, mid.y, *theta0};
    const double dt = duration / steps;
    for (int i = 0; i < steps; ++i) {
      s = rk4_step(f, s, t, dt, veh.speed, veh.depth, out.cmc);
      t += dt;
    }
    const CurrentSample c_end = f.sample({s.x, s.y}, veh.depth, t);
    ++out.cmc;
    const Vec2 ground = c_end.vec() + unit_from_angle(s.theta) * veh.speed;
    if (norm(ground) == 0.0) {
      out.fallback = true;
      return out;
    }
    out.course = course_of(ground);
  } catch (const DomainError&) {
    // prediction ran off a bounded field; leave the successors unfiltered
    out.course = course_of(dir);
    out.fallback = true;
  }
  return out;
}

namespace {

enum class Color : std::uint8_t { kWhite, kGray, kBlack };

}  // namespace

SearchResult plan(const GeoGraph& graph, const FlowField& f, VertexId source, VertexId goal, const VehicleSpec& veh,
                  const StepControl& ctl, const SearchOptions& opt) {
  const auto wall_start = std::chrono::steady_clock::now();
  veh.validate();
  ctl.validate();
  opt.validate();
  const std::size_t n = graph.vertex_count();
  if (source >= n || goal >= n) throw ArgumentError("plan: source or goal is not a graph vertex");

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> d(n, kInf);
  std::vector<VertexId> pi(n, kNoVertex);
  std::vector<Color> color(n, Color::kWhite);
  IndexedMinHeap queue(n);
  PlanStats stats;

  const Vec2 goal_pos = graph.position(goal);
  auto h = [&](VertexId v) {
    return opt.use_heuristic ? heuristic(graph.position(v), goal_pos, veh.speed, opt.v_current_max) : 0.0;
  };

  d[source] = opt.t0;
  color[source] = Color::kGray;
  queue.insert(source, opt.t0 + h(source));

  auto finish = [&] {
    stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  };

  bool reached = false;
  while (!queue.empty()) {
    const double f_u = queue.key(queue.top());
    const auto u = static_cast<VertexId>(queue.extract_min());
    color[u] = Color::kBlack;
    ++stats.expanded_vertices;
    if (opt.on_extract) opt.on_extract(u, d[u], f_u);
    if (d[u] >= ctl.penalty_weight) break;  // only infeasible edges lead further
    if (u == goal) {
      reached = true;
      break;
    }

    const Vec2 pu = graph.position(u);
    bool filter = false;
    double phi_opt = 0.0;
    if (opt.use_zermelo_filter && pi[u] != kNoVertex) {
      const OptimalCourse oc = cal_optdir(f, {graph.position(pi[u]), pu, d[pi[u]], d[u]}, veh, opt.optdir_steps);
      ++stats.optdir_calls;
      stats.optdir_cmc += oc.cmc;
      if (oc.fallback) {
        ++stats.optdir_fallbacks;
      } else {
        filter = true;
        phi_opt = oc.course;
      }
    }

    for (const Edge& e : graph.out_edges(u)) {
      const VertexId v = e.to;
      ++stats.scanned_edges;
      if (color[v] == Color::kBlack) {
        ++stats.closed_skips;
        continue;
      }
      if (opt.skip_dominated && d[u] >= d[v]) {
        ++stats.dominance_skips;
        continue;
      }
      if (filter && angle_between(course_of(e.dir), phi_opt) > opt.delta_phi_max) {
        ++stats.zermelo_pruned;
        continue;
      }
      const EdgeCost w = vehicle_travel_time(f, pu, graph.position(v), d[u], veh, ctl);
      ++stats.cfc;
      ++stats.visited_edges;
      stats.cmc += w.cmc;
      const double d_v = d[u] + w.travel_time;
      if (d_v < d[v]) {
        d[v] = d_v;
        pi[v] = u;
        color[v] = Color::kGray;
        queue.insert_or_decrease(v, d_v + h(v));
      }
    }
  }
  finish();
  if (!reached) throw NoRouteError("goal unreachable from source", stats);

  SearchResult result;
  for (VertexId v = goal; v != kNoVertex; v = pi[v]) result.vertices.push_back(v);
  std::reverse(result.vertices.begin(), result.vertices.end());
  for (VertexId v : result.vertices) {
    result.route.waypoints.push_back(graph.position(v));
    result.route.arrival.push_back(d[v]);
  }
  result.stats = stats;
  return result;
}

}  // namespace flowroute
