#include <gtest/gtest.h>

#include <queue>
#include <random>

#include "flowroute/errors.hpp"
#include "flowroute/search.hpp"

namespace flowroute {
namespace {

struct Classic {
  std::vector<double> dist;
  std::vector<VertexId> parent;
};

/// Textbook Dijkstra with lazy deletion; weights are the still-water edge costs.
Classic classic_dijkstra(const GeoGraph& g, const FlowField& f, VertexId source, const VehicleSpec& veh,
                         const StepControl& ctl) {
  Classic c{std::vector<double>(g.vertex_count(), std::numeric_limits<double>::infinity()),
            std::vector<VertexId>(g.vertex_count(), kNoVertex)};
  using Item = std::pair<double, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  std::vector<char> done(g.vertex_count(), 0);
  c.dist[source] = 0.0;
  pq.push({0.0, source});
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (done[u]) continue;
    done[u] = 1;
    for (const Edge& e : g.out_edges(u)) {
      if (done[e.to]) continue;
      const double w = edge_travel_time(f, g.position(u), g.position(e.to), 0.0, veh, ctl).travel_time;
      if (d + w < c.dist[e.to]) {
        c.dist[e.to] = d + w;
        c.parent[e.to] = u;
        pq.push({c.dist[e.to], e.to});
      }
    }
  }
  return c;
}

std::vector<VertexId> path_to(const Classic& c, VertexId goal) {
  std::vector<VertexId> p;
  for (VertexId v = goal; v != kNoVertex; v = c.parent[v]) p.insert(p.begin(), v);
  return p;
}

TEST(Plan, ZeroCurrentEqualsClassicDijkstra) {
  const UniformField still({0, 0});
  const GeoGraph g = build_sector_grid({{0, 0, 6, 4}, 0.5, 3});
  const VehicleSpec veh;
  const StepControl ctl;
  const VertexId src = g.vertex_at(1, 2);
  const Classic ref = classic_dijkstra(g, still, src, veh, ctl);
  for (auto [i, j] : {std::pair{11, 7}, {12, 0}, {0, 8}, {7, 3}, {5, 5}}) {
    const VertexId goal = g.vertex_at(i, j);
    for (Algorithm a : kAllAlgorithms) {
      SearchOptions o = SearchOptions::for_algorithm(a);
      const SearchResult r = plan(g, still, src, goal, veh, ctl, o);
      EXPECT_EQ(r.route.goal_arrival(), ref.dist[goal]) << to_string(a) << " goal " << i << "," << j;
      // equal-length lattice paths tie; only variants that settle vertices in
      // Dijkstra order are bound to pick the same one
      if (!o.use_heuristic && !o.use_zermelo_filter) {
        EXPECT_EQ(r.vertices, path_to(ref, goal)) << to_string(a);
      }
      EXPECT_GE(r.route.travel_time(), distance(g.position(src), g.position(goal)) / veh.speed - 1e-12);
    }
  }
}

TEST(Plan, StraightRouteCostIsDistanceOverSpeed) {
  const UniformField still({0, 0});
  const GeoGraph g = build_sector_grid({{0, 0, 4, 4}, 0.5, 3});
  const SearchResult r = plan(g, still, g.vertex_at(1, 1), g.vertex_at(7, 4), {}, {}, {});
  EXPECT_NEAR(r.route.travel_time(), std::hypot(3.0, 1.5) / 0.5, 1e-12);
  EXPECT_EQ(r.route.size(), 4u);  // three (2,1) steps
}

TEST(Plan, SkipRuleNeverChangesRouteOrCost) {
  const JetField f;
  const GeoGraph g = build_sector_grid({{0, -3.2, 10, 3.2}, 0.4, 3});
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const VertexId s = static_cast<VertexId>(rng() % g.vertex_count());
    const VertexId t = static_cast<VertexId>(rng() % g.vertex_count());
    if (s == t) continue;
    SearchOptions plain;
    SearchOptions skip;
    skip.skip_dominated = true;
    const SearchResult a = plan(g, f, s, t, {}, {}, plain);
    const SearchResult b = plan(g, f, s, t, {}, {}, skip);
    EXPECT_EQ(a.vertices, b.vertices);
    EXPECT_EQ(a.route.goal_arrival(), b.route.goal_arrival());
    EXPECT_LE(b.stats.cfc, a.stats.cfc);
  }
}

TEST(Plan, VariantsAgreeOnJetAndOrderCalls) {
  const JetField f;
  const GridSpec spec{{0, -3.2, 10, 3.2}, 0.4, 3};
  const GeoGraph g = build_sector_grid(spec);
  const double vmax = max_current_speed(f, spec.bounds, {0, 40}).speed;
  const VertexId src = g.nearest_vertex({6.4, -0.4});
  const VertexId goal = g.nearest_vertex({9.6, -2.8});
  std::vector<SearchResult> r;
  for (Algorithm a : kAllAlgorithms) {
    SearchOptions o = SearchOptions::for_algorithm(a);
    o.v_current_max = vmax;
    r.push_back(plan(g, f, src, goal, {}, {}, o));
  }
  for (const auto& x : r) {
    EXPECT_EQ(x.vertices, r[0].vertices);
    EXPECT_EQ(x.route.goal_arrival(), r[0].route.goal_arrival());
  }
  EXPECT_LE(r[4].stats.cfc, r[3].stats.cfc);
  EXPECT_LE(r[3].stats.cfc, r[1].stats.cfc);
  EXPECT_LE(r[1].stats.cfc, r[0].stats.cfc);
  EXPECT_LE(r[2].stats.cfc, r[1].stats.cfc);
  EXPECT_EQ(r[0].stats.optdir_calls, 0u);
  EXPECT_GT(r[4].stats.zermelo_pruned, 0u);
  EXPECT_EQ(r[0].stats.cfc, r[0].stats.visited_edges);
}

TEST(Plan, RouteArrivalsAreConsistentWithEdgeCosts) {
  const JetField f;
  const GeoGraph g = build_sector_grid({{0, -3.2, 10, 3.2}, 0.4, 3});
  const SearchResult r = plan(g, f, g.nearest_vertex({2.0, 0.0}), g.nearest_vertex({9.6, -2.8}), {}, {}, {});
  for (std::size_t i = 1; i < r.route.size(); ++i) {
    const EdgeCost e = edge_travel_time(f, r.route.waypoints[i - 1], r.route.waypoints[i], r.route.arrival[i - 1], {}, {});
    EXPECT_EQ(r.route.arrival[i], r.route.arrival[i - 1] + e.travel_time);
  }
}

TEST(Plan, HeuristicIsAdmissibleInStillWater) {
  const UniformField still({0, 0});
  const GeoGraph g = build_sector_grid({{0, 0, 3, 3}, 0.5, 3});
  const VertexId goal = g.vertex_at(5, 2);
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (v == goal) continue;
    const SearchResult r = plan(g, still, v, goal, {}, {}, {});
    EXPECT_LE(heuristic(g.position(v), g.position(goal), 0.5, 0.0), r.route.travel_time() + 1e-12);
  }
}

TEST(Plan, ExtractCallbackSeesMonotoneKeys) {
  const JetField f;
  const GeoGraph g = build_sector_grid({{0, -2, 5, 2}, 0.5, 2});
  SearchOptions o;
  double last = -1.0;
  bool monotone = true;
  o.on_extract = [&](VertexId, double, double key) {
    monotone = monotone && key >= last;
    last = key;
  };
  plan(g, f, g.vertex_at(0, 4), g.vertex_at(10, 2), {}, {}, o);
  EXPECT_TRUE(monotone);
}

TEST(Plan, UnreachableGoalRaisesWithStats) {
  const UniformField still({0, 0});
  const Polygon wall{{1.9, -0.5}, {2.1, -0.5}, {2.1, 4.5}, {1.9, 4.5}};
  const GeoGraph g = build_sector_grid({{0, 0, 4, 4}, 0.5, 3}, {wall});
  try {
    plan(g, still, g.vertex_at(0, 0), g.vertex_at(8, 8), {}, {}, {});
    FAIL() << "expected NoRouteError";
  } catch (const NoRouteError& e) {
    EXPECT_GT(e.stats().expanded_vertices, 0u);
  }
}

TEST(Plan, StrongCurrentBlocksUpstreamRoute) {
  const UniformField river({-0.7, 0.0});
  const GeoGraph g = build_sector_grid({{0, 0, 3, 1}, 0.5, 1});
  EXPECT_THROW(plan(g, river, g.vertex_at(0, 1), g.vertex_at(6, 1), {}, {}, {}), NoRouteError);
  const SearchResult down = plan(g, river, g.vertex_at(6, 1), g.vertex_at(0, 1), {}, {}, {});
  EXPECT_NEAR(down.route.travel_time(), 3.0 / 1.2, 1e-12);
}

TEST(Plan, RejectsInvalidInput) {
  const UniformField still({0, 0});
  const GeoGraph g = build_sector_grid({{0, 0, 1, 1}, 0.5, 1});
  EXPECT_THROW(plan(g, still, 0, 999, {}, {}, {}), ArgumentError);
  SearchOptions o;
  o.delta_phi_max = 0.0;
  EXPECT_THROW(plan(g, still, 0, 1, {}, {}, o), ArgumentError);
  EXPECT_THROW(parse_algorithm("dijkstra"), ArgumentError);
  EXPECT_EQ(parse_algorithm("zatve"), Algorithm::kZaStarTve);
}

TEST(CalOptdir, UniformCurrentKeepsCourse) {
  const UniformField f({0.2, -0.1});
  const VehicleSpec veh;
  const PrevEdge prev{{0, 0}, {0.4, 0.8}, 1.0, 3.0};
  const OptimalCourse oc = cal_optdir(f, prev, veh);
  EXPECT_FALSE(oc.fallback);
  EXPECT_NEAR(oc.course, course_of({0.4, 0.8}), 1e-12);
  EXPECT_EQ(oc.cmc, 2u + 4u * 8u);
}

TEST(CalOptdir, ShearTurnsTheCourse) {
  // u = 0.3 y: heading rate -u_y cos^2 turns a due-east heading clockwise
  const LinearField f({0, 0}, {0, 0.3, 0, 0});
  const OptimalCourse oc = cal_optdir(f, {{0, 0}, {1, 0}, 0.0, 2.0}, {});
  EXPECT_FALSE(oc.fallback);
  EXPECT_LT(oc.course, 0.0);
}

TEST(CalOptdir, FallsBackWhenCourseCannotBeHeld) {
  const UniformField f({0.0, 0.9});
  const OptimalCourse oc = cal_optdir(f, {{0, 0}, {1, 0}, 0.0, 2.0}, {});
  EXPECT_TRUE(oc.fallback);
  EXPECT_DOUBLE_EQ(oc.course, 0.0);
}

}  // namespace
}  // namespace flowroute
