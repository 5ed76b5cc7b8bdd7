#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flowroute/geometry.hpp"
#include "flowroute/interp.hpp"

namespace flowroute {

/// Travel time for a departure time. May throw; scans record failures as +inf.
using Planner = std::function<double(double t_dep)>;

struct SupportPoint {
  double t_dep = 0.0;
  double t_trav = 0.0;
};

/// Evaluates the planner at ceil(window/dt) + 1 equally spaced departures.
/// Evaluations are independent and run on up to `jobs` threads; the table is
/// identical for any job count.
std::vector<SupportPoint> scan_departures(const Planner& planner, const TimeWindow& window, double dt,
                                          unsigned jobs = 1);

/// Interpolant through the support points: Akima with five or more points,
/// straight lines below that.
class DepartureCurve {
 public:
  DepartureCurve() = default;
  DepartureCurve(std::vector<double> t, std::vector<double> v);

  double operator()(double t) const;
  bool is_akima() const { return akima_; }
  double front() const { return knots_.front(); }
  double back() const { return knots_.back(); }
  const std::vector<double>& knots() const { return knots_; }

 private:
  std::vector<double> knots_;
  bool akima_ = false;
  AkimaSpline spline_;
  LinearCurve line_;
};

/// Fits the finite support points. Duplicate departure times are an error.
DepartureCurve akima_fit(std::span<const SupportPoint> points);

struct Bracket {
  double lo = 0.0;
  double mid = 0.0;
  double hi = 0.0;
  /// The fitted minimum is the first or last support point.
  bool at_boundary = false;
};

/// Locates the global minimum of the fitted curve (dense evaluation, ties to the
/// earlier time) and brackets it by the neighbouring support points.
Bracket bracket_global_min(const DepartureCurve& curve, std::span<const SupportPoint> points);

enum class Minimizer { kBrent, kGolden, kFibonacci };

struct Refinement {
  double t_opt = 0.0;
  double t_trav = 0.0;
  std::size_t evaluations = 0;
  bool non_unimodal = false;
  std::vector<SupportPoint> trace;  // every planner evaluation, in call order
};

/// Derivative-free minimisation inside the bracket until the interval is below
/// tol. Known values at the bracket ends (from the support scan) let the result
/// fall back to an end point when the interior turns out worse.
Refinement refine_minimum(const Planner& planner, const Bracket& bracket, double tol,
                          Minimizer method = Minimizer::kBrent, std::optional<double> f_lo = std::nullopt,
                          std::optional<double> f_hi = std::nullopt);

inline Refinement refine_brent(const Planner& planner, const Bracket& bracket, double tol) {
  return refine_minimum(planner, bracket, tol, Minimizer::kBrent);
}

struct DepartureOptions {
  TimeWindow window;
  /// Support spacing; default period/8 when a period is given, else window/16.
  std::optional<double> dt;
  std::optional<double> period;
  /// Stopping interval of the refinement; default dt/100.
  std::optional<double> tol;
  /// Latest admissible arrival (forecast horizon).
  std::optional<double> horizon;
  Minimizer method = Minimizer::kBrent;
  unsigned jobs = 1;
};

struct DepartureResult {
  std::vector<SupportPoint> support;
  Bracket bracket;
  Refinement refinement;
  double t_opt = 0.0;
  double t_trav = 0.0;
  double dt = 0.0;
  double tol = 0.0;
  std::size_t planner_calls = 0;
  std::vector<std::string> diagnostics;
};

/// Support scan, Akima fit, bracketing and refinement. The support scan may use
/// a cheaper planner than the refinement.
DepartureResult find_optimal_departure(const Planner& support_planner, const Planner& refine_planner,
                                       const DepartureOptions& opt);

}  // namespace flowroute
