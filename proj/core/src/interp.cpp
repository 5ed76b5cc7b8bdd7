#include "flowroute/interp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "flowroute/errors.hpp"

namespace flowroute {

Interp1D parse_interp1d(std::string_view name) {
  if (name == "nearest") return Interp1D::kNearest;
  if (name == "linear") return Interp1D::kLinear;
  if (name == "cubic") return Interp1D::kCubic;
  if (name == "akima") return Interp1D::kAkima;
  throw ArgumentError("unknown 1-D interpolation method '" + std::string(name) + "'");
}

Interp2D parse_interp2d(std::string_view name) {
  if (name == "nearest") return Interp2D::kNearest;
  if (name == "bilinear") return Interp2D::kBilinear;
  if (name == "bicubic") return Interp2D::kBicubic;
  throw ArgumentError("unknown 2-D interpolation method '" + std::string(name) + "'");
}

std::string_view to_string(Interp1D m) {
  switch (m) {
    case Interp1D::kNearest: return "nearest";
    case Interp1D::kLinear: return "linear";
    case Interp1D::kCubic: return "cubic";
    case Interp1D::kAkima: return "akima";
  }
  return "?";
}

std::string_view to_string(Interp2D m) {
  switch (m) {
    case Interp2D::kNearest: return "nearest";
    case Interp2D::kBilinear: return "bilinear";
    case Interp2D::kBicubic: return "bicubic";
  }
  return "?";
}

std::size_t min_samples(Interp1D m) {
  switch (m) {
    case Interp1D::kNearest: return 1;
    case Interp1D::kLinear: return 2;
    case Interp1D::kCubic:
    case Interp1D::kAkima: return 3;
  }
  return 1;
}

namespace {

void check_knots(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw ArgumentError("knot and value counts differ");
  if (xs.size() < 2) throw ArgumentError("need at least two knots");
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) throw ArgumentError("knots must be strictly increasing (duplicate abscissa?)");
  }
}

double hermite(double x0, double x1, double y0, double y1, double d0, double d1, double x) {
  const double h = x1 - x0;
  const double s = (x - x0) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
}

// Akima node derivatives. m holds n-1 secant slopes; four ghost slopes are
// extrapolated linearly at each end.
std::vector<double> akima_slopes(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  std::vector<double> m(n + 3);
  for (std::size_t i = 0; i + 1 < n; ++i) m[i + 2] = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
  m[1] = 2 * m[2] - m[3];
  m[0] = 2 * m[1] - m[2];
  m[n + 1] = 2 * m[n] - m[n - 1];
  m[n + 2] = 2 * m[n + 1] - m[n];

  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) {
    // slopes m_{i-2}, m_{i-1}, m_i, m_{i+1} live at m[i], m[i+1], m[i+2], m[i+3]
    const double w1 = std::abs(m[i + 3] - m[i + 2]);
    const double w2 = std::abs(m[i + 1] - m[i]);
    if (w1 + w2 == 0.0) {
      t[i] = 0.5 * (m[i + 1] + m[i + 2]);
    } else {
      t[i] = (w1 * m[i + 1] + w2 * m[i + 2]) / (w1 + w2);
    }
  }
  return t;
}

}  // namespace

AkimaSpline::AkimaSpline(std::vector<double> xs, std::vector<double> ys) : xs_(std::move(xs)), ys_(std::move(ys)) {
  check_knots(xs_, ys_);
  if (xs_.size() == 2) {
    const double m = (ys_[1] - ys_[0]) / (xs_[1] - xs_[0]);
    slopes_ = {m, m};
  } else {
    slopes_ = akima_slopes(xs_, ys_);
  }
}

double AkimaSpline::operator()(double x) const {
  const std::size_t i = locate_interval(xs_, x);
  if (x == xs_[i]) return ys_[i];
  if (x == xs_[i + 1]) return ys_[i + 1];
  return hermite(xs_[i], xs_[i + 1], ys_[i], ys_[i + 1], slopes_[i], slopes_[i + 1], x);
}

LinearCurve::LinearCurve(std::vector<double> xs, std::vector<double> ys) : xs_(std::move(xs)), ys_(std::move(ys)) {
  check_knots(xs_, ys_);
}

double LinearCurve::operator()(double x) const {
  if (x <= xs_.front()) return ys_.front();
  if (x >= xs_.back()) return ys_.back();
  const std::size_t i = locate_interval(xs_, x);
  const double s = (x - xs_[i]) / (xs_[i + 1] - xs_[i]);
  return ys_[i] + s * (ys_[i + 1] - ys_[i]);
}

std::size_t locate_interval(std::span<const double> xs, double x) {
  if (xs.size() < 2) return 0;
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t i = it == xs.begin() ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
  return std::min(i, xs.size() - 2);
}

void catmull_rom_weights(double s, double (&w)[4]) {
  const double s2 = s * s;
  const double s3 = s2 * s;
  w[0] = 0.5 * (-s3 + 2 * s2 - s);
  w[1] = 0.5 * (3 * s3 - 5 * s2 + 2);
  w[2] = 0.5 * (-3 * s3 + 4 * s2 + s);
  w[3] = 0.5 * (s3 - s2);
}

double interpolate_1d(Interp1D method, std::span<const double> xs, std::span<const double> ys, double x) {
  const std::size_t n = xs.size();
  if (n == 1) return ys[0];
  const std::size_t i = locate_interval(xs, x);
  switch (method) {
    case Interp1D::kNearest: {
      // ties go to the lower sample
      return (x - xs[i] <= xs[i + 1] - x) ? ys[i] : ys[i + 1];
    }
    case Interp1D::kLinear: {
      const double s = (x - xs[i]) / (xs[i + 1] - xs[i]);
      return ys[i] + s * (ys[i + 1] - ys[i]);
    }
    case Interp1D::kCubic: {
      if (n == 2) return interpolate_1d(Interp1D::kLinear, xs, ys, x);
      // Catmull-Rom on a possibly non-uniform axis: centred-difference tangents,
      // one-sided at the ends.
      auto tangent = [&](std::size_t k) {
        if (k == 0) return (ys[1] - ys[0]) / (xs[1] - xs[0]);
        if (k == n - 1) return (ys[n - 1] - ys[n - 2]) / (xs[n - 1] - xs[n - 2]);
        return (ys[k + 1] - ys[k - 1]) / (xs[k + 1] - xs[k - 1]);
      };
      if (x == xs[i]) return ys[i];
      return hermite(xs[i], xs[i + 1], ys[i], ys[i + 1], tangent(i), tangent(i + 1), x);
    }
    case Interp1D::kAkima: {
      if (n == 2) return interpolate_1d(Interp1D::kLinear, xs, ys, x);
      // Akima node slopes depend on at most three secants either side, so a
      // six-sample window reproduces the global interpolant.
      const std::size_t lo = i >= 2 ? i - 2 : 0;
      const std::size_t hi = std::min(n - 1, i + 3);
      AkimaSpline local(std::vector<double>(xs.begin() + lo, xs.begin() + hi + 1),
                        std::vector<double>(ys.begin() + lo, ys.begin() + hi + 1));
      return local(x);
    }
  }
  return ys[i];
}

}  // namespace flowroute
