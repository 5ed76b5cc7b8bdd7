#include <gtest/gtest.h>

#include <sstream>

#include "flowroute/errors.hpp"
#include "flowroute/oracle.hpp"
#include "flowroute/search.hpp"

namespace flowroute {
namespace {

TEST(IntegrateZermelo, StillWaterIsStraight) {
  const UniformField f({0, 0});
  const Trajectory tr = integrate_zermelo(f, {1, 2}, 0.6, 0.0, 3.0, 0.07, 0.5);
  ASSERT_FALSE(tr.exited);
  const TrajectoryState& s = tr.states.back();
  EXPECT_DOUBLE_EQ(s.t, 3.0);  // last step shortened onto t_end
  EXPECT_NEAR(s.x, 1 + 1.5 * std::cos(0.6), 1e-12);
  EXPECT_NEAR(s.y, 2 + 1.5 * std::sin(0.6), 1e-12);
  EXPECT_DOUBLE_EQ(s.theta, 0.6);
}

TEST(IntegrateZermelo, LinearShearMatchesClosedFormHeading) {
  // u = a y: dtheta/dt = -a cos^2 theta, so tan(theta) = tan(theta0) - a t
  const double a = 0.4;
  const LinearField f({0, 0}, {0, a, 0, 0});
  const Trajectory tr = integrate_zermelo(f, {0, 0}, 0.3, 0.0, 2.0, 0.01, 0.5);
  EXPECT_NEAR(std::tan(tr.states.back().theta), std::tan(0.3) - a * 2.0, 1e-9);
}

TEST(IntegrateZermelo, LeavingTheDomainStops) {
  const UniformField f({0.2, 0});
  const Trajectory tr = integrate_zermelo(f, {0, 0}, 0.0, 0.0, 10.0, 0.1, 0.5, 0.0, Box{-1, -1, 1, 1});
  EXPECT_TRUE(tr.exited);
  EXPECT_LE(tr.states.back().x, 1.0);
  EXPECT_GT(tr.states.back().x, 0.9);
  EXPECT_THROW(integrate_zermelo(f, {0, 0}, 0.0, 0.0, 1.0, 0.0, 0.5), ArgumentError);
}

TEST(Shooting, UniformCurrentGivesClosedFormTime) {
  const CurrentSample c{0.15, -0.2};
  const UniformField f(c);
  const Vec2 start{0, 0};
  const Vec2 goal{3, 1};
  const VehicleSpec veh;
  const OracleResult r = solve_bvp_shooting(f, start, goal, 0.0, veh);
  const Vec2 dir = (goal - start) / distance(start, goal);
  const double expected = distance(start, goal) / *speed_along_path(dir, c, veh.speed);
  // arrival is the closest approach; the miss is far below the accepted radius
  EXPECT_NEAR(r.travel_time, expected, 1e-6);
  EXPECT_LT(std::abs(r.miss), 1e-6);
  EXPECT_NEAR(r.theta0, *heading_for_course(dir, c, veh.speed), 1e-6);
}

TEST(Shooting, OpposingCurrentIsUnreachable) {
  const UniformField f({-0.8, 0.0});
  EXPECT_THROW(solve_bvp_shooting(f, {0, 0}, {2, 0}, 0.0, {}), UnreachableError);
}

TEST(Shooting, ValidatesInput) {
  const UniformField f({0, 0});
  ShootingOptions o;
  o.starts = 1;
  EXPECT_THROW(solve_bvp_shooting(f, {0, 0}, {1, 0}, 0.0, {}, o), ArgumentError);
  ShootingOptions boxed;
  boxed.domain = Box{0, 0, 1, 1};
  EXPECT_THROW(solve_bvp_shooting(f, {0, 0}, {2, 0}, 0.0, {}, boxed), ArgumentError);
  const OracleResult here = solve_bvp_shooting(f, {0, 0}, {0.01, 0}, 0.0, {});
  EXPECT_EQ(here.travel_time, 0.0);
}

TEST(Shooting, JetOptimumBeatsGraphRouteByLittle) {
  const JetField f;
  const GridSpec spec{{0, -3.2, 10, 3.2}, 0.4, 3};
  const GeoGraph g = build_sector_grid(spec);
  const Vec2 start{6.4, -0.4};
  const Vec2 goal{9.6, -2.8};
  const SearchResult route = plan(g, f, g.nearest_vertex(start), g.nearest_vertex(goal), {}, {}, {});
  ShootingOptions o;
  o.domain = spec.bounds;
  o.jobs = 4;
  const OracleResult r = solve_bvp_shooting(f, start, goal, 0.0, {}, o);
  EXPECT_LE(r.travel_time, route.route.travel_time());
  EXPECT_LE(route.route.travel_time(), 1.1 * r.travel_time);
  const TrajectoryState& end = r.trajectory.states.back();
  EXPECT_LE(distance({end.x, end.y}, goal), o.rho);
}

TEST(Shooting, JobCountDoesNotChangeResult) {
  const JetField f;
  ShootingOptions a;
  a.domain = Box{0, -3.2, 10, 3.2};
  ShootingOptions b = a;
  b.jobs = 3;
  const OracleResult ra = solve_bvp_shooting(f, {2.0, 0.0}, {9.6, -2.8}, 0.0, {}, a);
  const OracleResult rb = solve_bvp_shooting(f, {2.0, 0.0}, {9.6, -2.8}, 0.0, {}, b);
  EXPECT_EQ(ra.travel_time, rb.travel_time);
  EXPECT_EQ(ra.theta0, rb.theta0);
  EXPECT_EQ(ra.shots, rb.shots);
}

TEST(TrajectoryCsv, HeaderAndRows) {
  Trajectory t;
  t.states = {{0, 1, 2, 0.5}, {0.25, 1.5, 2, 0}};
  std::ostringstream os;
  write_trajectory_csv(os, t);
  EXPECT_EQ(os.str(), "t,x,y,theta\n0,1,2,0.5\n0.25,1.5,2,0\n");
}

}  // namespace
}  // namespace flowroute
