#include <gtest/gtest.h>

#include <atomic>
#include <cmath>

#include "flowroute/departure.hpp"
#include "flowroute/errors.hpp"

namespace flowroute {
namespace {

double bumpy(double t) { return 5.0 + std::sin(t) + 0.3 * std::sin(3.0 * t + 0.4); }

TEST(AkimaSpline, MatchesReferenceImplementation) {
  // reference values from an independent Akima implementation (SciPy)
  const AkimaSpline s({0, 1, 2.5, 3, 4.5, 6, 7}, {3, 1.5, 0.8, 1.2, 2.9, 2.0, 2.5});
  const std::pair<double, double> ref[] = {{0.5, 2.1273852657004833}, {1.7, 0.89316602909024267},
                                           {2.75, 0.97189476061427282}, {3.9, 2.2793364341085267},
                                           {5.2, 2.6276227754977963}, {6.6, 2.1798023529411763}};
  for (auto [x, y] : ref) EXPECT_NEAR(s(x), y, 1e-14) << x;
}

TEST(AkimaSpline, InterpolatesKnotsAndReproducesLines) {
  const std::vector<double> xs{0, 0.5, 2, 2.2, 3, 5};
  std::vector<double> ys;
  for (double x : xs) ys.push_back(1.5 - 0.25 * x);
  const AkimaSpline s(xs, ys);
  for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_DOUBLE_EQ(s(xs[i]), ys[i]);
  for (double x = 0.0; x <= 5.0; x += 0.1) EXPECT_NEAR(s(x), 1.5 - 0.25 * x, 1e-14);
}

TEST(DepartureCurve, LinearBelowFivePoints) {
  const std::vector<SupportPoint> pts{{0, 1}, {1, 3}, {2, 2}, {3, 5}};
  const DepartureCurve c = akima_fit(pts);
  EXPECT_FALSE(c.is_akima());
  EXPECT_DOUBLE_EQ(c(0.5), 2.0);
  std::vector<SupportPoint> more = pts;
  more.push_back({4, 4});
  EXPECT_TRUE(akima_fit(more).is_akima());
}

TEST(DepartureCurve, SkipsInfeasibleAndRejectsDuplicates) {
  const std::vector<SupportPoint> pts{{0, 1}, {1, INFINITY}, {2, 2}};
  const DepartureCurve c = akima_fit(pts);
  EXPECT_EQ(c.knots(), (std::vector<double>{0, 2}));
  const std::vector<SupportPoint> dup{{0, 1}, {1, 2}, {1, 3}};
  EXPECT_THROW(akima_fit(dup), ArgumentError);
  EXPECT_THROW(akima_fit(std::vector<SupportPoint>{{0, INFINITY}}), ArgumentError);
}

TEST(ScanDepartures, CountSpacingAndFailures) {
  const Planner p = [](double t) {
    if (t > 2.9 && t < 3.1) throw std::runtime_error("no route");
    return t * t;
  };
  const auto pts = scan_departures(p, {0.0, 4.0}, 0.5);
  ASSERT_EQ(pts.size(), 9u);
  EXPECT_DOUBLE_EQ(pts[3].t_dep, 1.5);
  EXPECT_DOUBLE_EQ(pts[8].t_dep, 4.0);
  EXPECT_TRUE(std::isinf(pts[6].t_trav));
  EXPECT_EQ(pts[2].t_trav, 1.0);
  // uneven window: last spacing is shorter, end point still sampled
  EXPECT_DOUBLE_EQ(scan_departures(p, {0.0, 1.2}, 0.5).back().t_dep, 1.2);
}

TEST(ScanDepartures, ThreadCountDoesNotChangeTable) {
  const auto a = scan_departures(bumpy, {0.0, 10.0}, 0.1, 1);
  const auto b = scan_departures(bumpy, {0.0, 10.0}, 0.1, 8);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].t_dep, b[i].t_dep);
    EXPECT_EQ(a[i].t_trav, b[i].t_trav);
  }
}

TEST(BracketGlobalMin, BracketsByNeighbouringKnots) {
  std::vector<SupportPoint> pts;
  for (int i = 0; i <= 8; ++i) pts.push_back({i * 1.0, std::pow(i - 5.3, 2.0)});
  const Bracket b = bracket_global_min(akima_fit(pts), pts);
  EXPECT_EQ(b.lo, 4.0);
  EXPECT_EQ(b.hi, 6.0);
  EXPECT_NEAR(b.mid, 5.3, 0.05);
  EXPECT_FALSE(b.at_boundary);
}

TEST(BracketGlobalMin, FlagsBoundaryMinimum) {
  std::vector<SupportPoint> pts;
  for (int i = 0; i <= 6; ++i) pts.push_back({i * 1.0, 1.0 + i});
  const Bracket b = bracket_global_min(akima_fit(pts), pts);
  EXPECT_TRUE(b.at_boundary);
  EXPECT_EQ(b.lo, 0.0);
  EXPECT_EQ(b.mid, 0.0);
}

TEST(RefineMinimum, AllMethodsConvergeWithinTolerance) {
  const Planner p = [](double t) { return 2.0 + (t - 3.3) * (t - 3.3) * (1.0 + 0.1 * t); };
  for (Minimizer m : {Minimizer::kBrent, Minimizer::kGolden, Minimizer::kFibonacci}) {
    const Refinement r = refine_minimum(p, {2.0, 3.0, 4.0}, 1e-6, m);
    EXPECT_NEAR(r.t_opt, 3.3, 1e-5) << static_cast<int>(m);
    EXPECT_EQ(r.evaluations, r.trace.size());
    EXPECT_FALSE(r.non_unimodal);
  }
  // Brent is superlinear on smooth minima
  EXPECT_LT(refine_brent(p, {2.0, 3.0, 4.0}, 1e-6).evaluations,
            refine_minimum(p, {2.0, 3.0, 4.0}, 1e-6, Minimizer::kGolden).evaluations);
}

TEST(RefineMinimum, FallsBackToBetterEndValue) {
  const Planner p = [](double t) { return std::cos(8.0 * t); };
  const Refinement r = refine_minimum(p, {0.0, 0.5, 1.0}, 1e-4, Minimizer::kBrent, -5.0, 2.0);
  EXPECT_EQ(r.t_opt, 0.0);
  EXPECT_EQ(r.t_trav, -5.0);
  EXPECT_TRUE(r.non_unimodal);
}

TEST(RefineMinimum, RejectsBadInput) {
  EXPECT_THROW(refine_brent(bumpy, {2.0, 1.0, 3.0}, 1e-3), ArgumentError);
  EXPECT_THROW(refine_brent(bumpy, {0.0, 1.0, 3.0}, 0.0), ArgumentError);
}

TEST(FindOptimalDeparture, MatchesDenseScanWithFewCalls) {
  std::atomic<int> calls{0};
  const Planner p = [&](double t) {
    ++calls;
    return bumpy(t);
  };
  DepartureOptions opt;
  opt.window = {0.0, 2.0 * std::numbers::pi / 0.4};
  opt.period = 2.0 * std::numbers::pi / 0.4;
  const DepartureResult r = find_optimal_departure(p, p, opt);
  double best_t = 0.0;
  double best = INFINITY;
  int dense = 0;
  for (double t = opt.window.start; t <= opt.window.end; t += 0.01, ++dense) {
    if (bumpy(t) < best) best = bumpy(t), best_t = t;
  }
  EXPECT_NEAR(r.t_opt, best_t, 0.01);
  EXPECT_LE(r.t_trav, best + 1e-9);
  EXPECT_EQ(static_cast<int>(r.planner_calls), calls.load());
  EXPECT_LE(4 * calls.load(), dense);
  EXPECT_DOUBLE_EQ(r.dt, *opt.period / 8.0);
  EXPECT_DOUBLE_EQ(r.tol, r.dt / 100.0);
}

TEST(FindOptimalDeparture, HorizonRejectsLateArrivals) {
  DepartureOptions opt;
  opt.window = {0.0, 10.0};
  opt.horizon = 12.0;
  const Planner p = [](double t) { return 4.0 - 0.2 * t; };  // later is faster, but must land by 12
  const DepartureResult r = find_optimal_departure(p, p, opt);
  EXPECT_LE(r.t_opt + r.t_trav, 12.0 + 1e-12);
  EXPECT_FALSE(r.diagnostics.empty());
}

TEST(FindOptimalDeparture, NothingFeasibleThrows) {
  DepartureOptions opt;
  opt.window = {0.0, 1.0};
  const Planner p = [](double) -> double { throw std::runtime_error("blocked"); };
  EXPECT_THROW(find_optimal_departure(p, p, opt), ArgumentError);
}

TEST(FindOptimalDeparture, CheapSupportPlannerIsOnlyUsedForTheScan) {
  int fine_calls = 0;
  const Planner coarse = [](double t) { return bumpy(t) + 0.01; };
  const Planner fine = [&](double t) {
    ++fine_calls;
    return bumpy(t);
  };
  DepartureOptions opt;
  opt.window = {0.0, 6.0};
  const DepartureResult r = find_optimal_departure(coarse, fine, opt);
  // the refine planner also prices the two bracket ends
  EXPECT_EQ(static_cast<std::size_t>(fine_calls), r.refinement.evaluations + 2);
  EXPECT_EQ(r.support.size(), 17u);
}

}  // namespace
}  // namespace flowroute
