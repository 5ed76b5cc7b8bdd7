#include <gtest/gtest.h>

#include "flowroute/errors.hpp"
#include "flowroute/search.hpp"
#include "flowroute/smooth.hpp"

namespace flowroute {
namespace {

Route make_route(const FlowField& f, std::vector<Vec2> pts, const std::vector<Polygon>& obstacles = {}) {
  Route r;
  r.waypoints = std::move(pts);
  r.arrival = travel_time_via(f, r.waypoints, 0.0, {}, {}, obstacles);
  return r;
}

TEST(TravelTimeVia, SumsLegs) {
  const UniformField still({0, 0});
  const std::vector<Vec2> pts{{0, 0}, {3, 4}, {3, 5}};
  EXPECT_EQ(travel_time_via(still, pts, 1.0, {}, {}), (std::vector<double>{1.0, 11.0, 13.0}));
  EXPECT_THROW(travel_time_via(still, std::vector<Vec2>{{0, 0}}, 0.0, {}, {}), ArgumentError);
}

TEST(TravelTimeVia, BlockedLegAddsPenaltyAndStaysPenalized) {
  const UniformField still({0, 0});
  const Polygon box{{1, -1}, {2, -1}, {2, 1}, {1, 1}};
  StepControl ctl;
  ctl.penalty_weight = 1e6;
  const std::vector<Vec2> pts{{0, 0}, {3, 0}, {4, 0}};
  const auto t = travel_time_via(still, pts, 0.0, {}, ctl, {box});
  EXPECT_EQ(t[1], 1e6);
  EXPECT_EQ(t[2], 2e6);
}

TEST(SmoothRoute, StillWaterZigZagCollapses) {
  const UniformField still({0, 0});
  const Route r = make_route(still, {{0, 0}, {1, 1}, {2, 0}, {3, 1}, {4, 0}});
  const SmoothResult s = smooth_route(still, r, {}, {}, {});
  EXPECT_EQ(s.route.waypoints, (std::vector<Vec2>{{0, 0}, {4, 0}}));
  EXPECT_NEAR(s.route.goal_arrival(), 8.0, 1e-12);
  EXPECT_TRUE(s.diagnostic.empty());
}

TEST(SmoothRoute, ObstacleKeepsDetour) {
  const UniformField still({0, 0});
  const Polygon rock{{1.8, -0.5}, {2.2, -0.5}, {2.2, 0.5}, {1.8, 0.5}};
  const Route r = make_route(still, {{0, 0}, {1, 0}, {2, 1}, {3, 0}, {4, 0}});
  const SmoothResult s = smooth_route(still, r, {rock}, {}, {});
  for (std::size_t i = 1; i < s.route.size(); ++i) {
    EXPECT_FALSE(segment_blocked({s.route.waypoints[i - 1], s.route.waypoints[i]}, {rock}));
  }
  EXPECT_LE(s.route.goal_arrival(), r.goal_arrival());
  EXPECT_LT(s.route.size(), r.size());
}

TEST(SmoothRoute, JetRoutesNeverArriveLaterAndAreStable) {
  const JetField jet;
  const GeoGraph g = build_sector_grid({{0, -3.2, 10, 3.2}, 0.4, 3});
  for (Vec2 start : {Vec2{2.0, 0.0}, Vec2{4.8, 1.6}, Vec2{2.4, -3.2}}) {
    const SearchResult sr = plan(g, jet, g.nearest_vertex(start), g.nearest_vertex({9.6, -2.8}), {}, {}, {});
    const SmoothResult s = smooth_route(jet, sr.route, {}, {}, {});
    EXPECT_LE(s.route.goal_arrival(), sr.route.goal_arrival());
    EXPECT_EQ(s.route.waypoints.front(), sr.route.waypoints.front());
    EXPECT_EQ(s.route.waypoints.back(), sr.route.waypoints.back());
    const SmoothResult again = smooth_route(jet, s.route, {}, {}, {});
    EXPECT_EQ(again.route.waypoints, s.route.waypoints) << "smoothing is idempotent";
    EXPECT_EQ(again.passes, 1u);
  }
}

TEST(SmoothRoute, InfeasibleInputReturnedUnchanged) {
  const UniformField river({-0.8, 0});
  Route r;
  r.waypoints = {{0, 0}, {1, 0}, {2, 0}};
  r.arrival = {0, 1, 2};
  const SmoothResult s = smooth_route(river, r, {}, {}, {});
  EXPECT_EQ(s.route.waypoints, r.waypoints);
  EXPECT_FALSE(s.diagnostic.empty());
}

TEST(SmoothRoute, TwoPointRouteUntouched) {
  const UniformField still({0, 0});
  const Route r = make_route(still, {{0, 0}, {1, 0}});
  EXPECT_EQ(smooth_route(still, r, {}, {}, {}).route.waypoints, r.waypoints);
  Route bad = r;
  bad.arrival.pop_back();
  EXPECT_THROW(smooth_route(still, bad, {}, {}, {}), ArgumentError);
}

}  // namespace
}  // namespace flowroute
