#include "flowroute/departure.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "flowroute/errors.hpp"
#include "flowroute/parallel.hpp"

namespace flowroute {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGolden = 0.3819660112501051;  // (3 - sqrt 5) / 2
constexpr int kDenseSamples = 32;                // curve samples per support interval

double safe_eval(const Planner& planner, double t) {
  try {
    const double v = planner(t);
    return std::isfinite(v) ? v : kInf;
  } catch (const std::exception&) {
    return kInf;
  }
}

class Recorder {
 public:
  Recorder(const Planner& planner, Refinement& out) : planner_(planner), out_(out) {}
  double operator()(double t) {
    const double v = safe_eval(planner_, t);
    out_.trace.push_back({t, v});
    ++out_.evaluations;
    return v;
  }

 private:
  const Planner& planner_;
  Refinement& out_;
};

bool all_finite(double a, double b, double c) { return std::isfinite(a) && std::isfinite(b) && std::isfinite(c); }

SupportPoint brent(Recorder& f, double a, double b, double x0, double tol) {
  double x = std::clamp(x0, a, b);
  if (x == a || x == b) x = a + kGolden * (b - a);
  double w = x, v = x;
  double fx = f(x);
  double fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double m = 0.5 * (a + b);
    const double tol1 = 0.25 * tol + 1e-12 * std::abs(x);
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) break;  // b - a <= tol
    bool golden = true;
    if (std::abs(e) > tol1 && all_finite(fx, fw, fv)) {
      const double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double e_prev = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = x < m ? tol1 : -tol1;
        golden = false;
      }
    }
    if (golden) {
      e = x >= m ? a - x : b - x;
      d = kGolden * e;
    }
    const double u = std::abs(d) >= tol1 ? x + d : x + (d > 0.0 ? tol1 : -tol1);
    const double fu = f(u);
    if (fu <= fx) {
      (u >= x ? a : b) = x;
      v = w, fv = fw;
      w = x, fw = fx;
      x = u, fx = fu;
    } else {
      (u < x ? a : b) = u;
      if (fu <= fw || w == x) {
        v = w, fv = fw;
        w = u, fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u, fv = fu;
      }
    }
  }
  return {x, fx};
}

SupportPoint golden_section(Recorder& f, double a, double b, double tol) {
  double x1 = a + kGolden * (b - a);
  double x2 = b - kGolden * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1, f2 = f1;
      x1 = a + kGolden * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2, f1 = f2;
      x2 = b - kGolden * (b - a);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? SupportPoint{x1, f1} : SupportPoint{x2, f2};
}

SupportPoint fibonacci_search(Recorder& f, double a, double b, double tol) {
  std::vector<double> fib{1.0, 1.0};
  while (fib.back() < 2.0 * (b - a) / tol || fib.size() < 4) fib.push_back(fib[fib.size() - 1] + fib[fib.size() - 2]);
  std::size_t n = fib.size() - 1;
  double x1 = a + fib[n - 2] / fib[n] * (b - a);
  double x2 = a + fib[n - 1] / fib[n] * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (; n > 3; --n) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1, f2 = f1;
      x1 = a + fib[n - 3] / fib[n - 1] * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2, f1 = f2;
      x2 = a + fib[n - 2] / fib[n - 1] * (b - a);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? SupportPoint{x1, f1} : SupportPoint{x2, f2};
}

}  // namespace

std::vector<SupportPoint> scan_departures(const Planner& planner, const TimeWindow& window, double dt, unsigned jobs) {
  if (!(dt > 0.0)) throw ArgumentError("scan_departures: dt must be positive");
  if (!(window.end >= window.start)) throw ArgumentError("scan_departures: empty departure window");
  const double len = window.length();
  const auto intervals = static_cast<std::size_t>(std::max(1.0, std::ceil(len / dt - 1e-9)));
  const std::size_t count = len > 0.0 ? intervals + 1 : 1;
  std::vector<SupportPoint> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i].t_dep = i + 1 == count ? window.end : window.start + len * static_cast<double>(i) / intervals;
  }

  detail::parallel_for(count, jobs, [&](std::size_t i) { out[i].t_trav = safe_eval(planner, out[i].t_dep); });
  return out;
}

DepartureCurve::DepartureCurve(std::vector<double> t, std::vector<double> v) : knots_(t) {
  if (t.size() != v.size() || t.empty()) throw ArgumentError("departure curve needs matching, non-empty samples");
  if (t.size() >= 5) {
    akima_ = true;
    spline_ = AkimaSpline(std::move(t), std::move(v));
  } else if (t.size() >= 2) {
    line_ = LinearCurve(std::move(t), std::move(v));
  } else {
    line_ = LinearCurve({t[0], t[0] + 1.0}, {v[0], v[0]});
  }
}

double DepartureCurve::operator()(double t) const { return akima_ ? spline_(t) : line_(t); }

DepartureCurve akima_fit(std::span<const SupportPoint> points) {
  std::vector<SupportPoint> pts;
  for (const auto& p : points) {
    if (std::isfinite(p.t_trav)) pts.push_back(p);
  }
  if (pts.empty()) throw ArgumentError("akima_fit: no finite support points");
  std::stable_sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.t_dep < b.t_dep; });
  std::vector<double> t, v;
  for (const auto& p : pts) {
    if (!t.empty() && p.t_dep == t.back()) throw ArgumentError("akima_fit: duplicate departure time");
    t.push_back(p.t_dep);
    v.push_back(p.t_trav);
  }
  return DepartureCurve(std::move(t), std::move(v));
}

Bracket bracket_global_min(const DepartureCurve& curve, [[maybe_unused]] std::span<const SupportPoint> points) {
  const std::vector<double>& knots = curve.knots();
  const std::size_t n = knots.size();
  if (n == 1) return {knots[0], knots[0], knots[0], true};

  double t_best = knots[0];
  double v_best = curve(knots[0]);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (int k = 1; k <= kDenseSamples; ++k) {
      const double t = k == kDenseSamples ? knots[i + 1] : knots[i] + (knots[i + 1] - knots[i]) * k / kDenseSamples;
      const double v = curve(t);
      if (v < v_best) v_best = v, t_best = t;
    }
  }

  // nearest support point, ties to the earlier one
  std::size_t j = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(knots[i] - t_best) < std::abs(knots[j] - t_best)) j = i;
  }
  Bracket b;
  b.mid = t_best;
  b.lo = knots[j == 0 ? 0 : j - 1];
  b.hi = knots[j + 1 == n ? n - 1 : j + 1];
  if (j == 0) b.hi = knots[1];
  if (j + 1 == n) b.lo = knots[n - 2];
  b.at_boundary = t_best == knots.front() || t_best == knots.back();
  return b;
}

Refinement refine_minimum(const Planner& planner, const Bracket& bracket, double tol, Minimizer method,
                          std::optional<double> f_lo, std::optional<double> f_hi) {
  if (!(tol > 0.0)) throw ArgumentError("refine_minimum: tol must be positive");
  if (!(bracket.lo <= bracket.mid && bracket.mid <= bracket.hi)) throw ArgumentError("refine_minimum: bad bracket");
  Refinement out;
  Recorder f(planner, out);
  SupportPoint best{bracket.mid, kInf};
  if (bracket.hi - bracket.lo > tol) {
    switch (method) {
      case Minimizer::kBrent: best = brent(f, bracket.lo, bracket.hi, bracket.mid, tol); break;
      case Minimizer::kGolden: best = golden_section(f, bracket.lo, bracket.hi, tol); break;
      case Minimizer::kFibonacci: best = fibonacci_search(f, bracket.lo, bracket.hi, tol); break;
    }
  } else if (!f_lo && !f_hi) {
    best = {bracket.mid, f(bracket.mid)};
  }

  // a unimodal function never exceeds its larger end value inside the bracket
  if (f_lo && f_hi && std::isfinite(*f_lo) && std::isfinite(*f_hi)) {
    const double ceiling = std::max(*f_lo, *f_hi);
    for (const auto& p : out.trace) {
      if (p.t_trav > ceiling * (1.0 + 1e-9)) out.non_unimodal = true;
    }
  }
  if (f_lo && *f_lo <= best.t_trav) {
    if (!bracket.at_boundary && std::isfinite(best.t_trav)) out.non_unimodal = true;
    best = {bracket.lo, *f_lo};
  }
  if (f_hi && *f_hi < best.t_trav) {
    if (!bracket.at_boundary && std::isfinite(best.t_trav)) out.non_unimodal = true;
    best = {bracket.hi, *f_hi};
  }
  out.t_opt = best.t_dep;
  out.t_trav = best.t_trav;
  return out;
}

DepartureResult find_optimal_departure(const Planner& support_planner, const Planner& refine_planner,
                                       const DepartureOptions& opt) {
  if (!(opt.window.end >= opt.window.start)) throw ArgumentError("departure window end precedes its start");
  DepartureResult r;
  if (opt.dt) {
    r.dt = *opt.dt;
  } else if (opt.period) {
    r.dt = *opt.period / 8.0;
  } else {
    r.dt = opt.window.length() / 16.0;
  }
  if (!(r.dt > 0.0)) throw ArgumentError("support spacing must be positive");
  r.tol = opt.tol.value_or(r.dt / 100.0);
  if (!(r.tol > 0.0)) throw ArgumentError("refinement tolerance must be positive");

  auto clip = [&opt](const Planner& p) -> Planner {
    if (!opt.horizon) return p;
    return [&p, horizon = *opt.horizon](double t) {
      const double v = p(t);
      return t + v > horizon ? kInf : v;
    };
  };
  const Planner support = clip(support_planner);
  const Planner refine = clip(refine_planner);

  r.support = scan_departures(support, opt.window, r.dt, opt.jobs);
  r.planner_calls = r.support.size();
  std::size_t failed = 0;
  for (const auto& p : r.support) failed += std::isfinite(p.t_trav) ? 0 : 1;
  if (failed == r.support.size()) throw ArgumentError("no feasible departure in the window");
  if (failed > 0) {
    r.diagnostics.push_back(std::to_string(failed) + " support departures infeasible or beyond the horizon");
  }

  const DepartureCurve curve = akima_fit(r.support);
  r.bracket = bracket_global_min(curve, r.support);

  // end values are only reusable when both planners agree
  std::optional<double> f_lo, f_hi;
  if (&support_planner == &refine_planner) {
    for (const auto& p : r.support) {
      if (p.t_dep == r.bracket.lo && std::isfinite(p.t_trav)) f_lo = p.t_trav;
      if (p.t_dep == r.bracket.hi && std::isfinite(p.t_trav)) f_hi = p.t_trav;
    }
  } else {
    Refinement ends;
    Recorder rec(refine, ends);
    f_lo = rec(r.bracket.lo);
    if (r.bracket.hi != r.bracket.lo) f_hi = rec(r.bracket.hi);
    r.planner_calls += ends.evaluations;
  }

  r.refinement = refine_minimum(refine, r.bracket, r.tol, opt.method, f_lo, f_hi);
  r.planner_calls += r.refinement.evaluations;
  if (r.bracket.at_boundary) r.diagnostics.push_back("optimum at the edge of the departure window");
  if (r.refinement.non_unimodal) r.diagnostics.push_back("travel time is not unimodal inside the bracket");
  if (!std::isfinite(r.refinement.t_trav)) throw ArgumentError("refinement found no feasible departure");
  r.t_opt = r.refinement.t_opt;
  r.t_trav = r.refinement.t_trav;
  return r;
}

}  // namespace flowroute
