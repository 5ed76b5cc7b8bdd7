#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace flowroute {

/// One-dimensional methods used across depth and time, and for departure curves.
enum class Interp1D { kNearest, kLinear, kCubic, kAkima };

/// Two-dimensional methods used within a depth layer.
enum class Interp2D { kNearest, kBilinear, kBicubic };

Interp1D parse_interp1d(std::string_view name);
Interp2D parse_interp2d(std::string_view name);
std::string_view to_string(Interp1D m);
std::string_view to_string(Interp2D m);

/// Minimum number of samples an axis needs for the method.
std::size_t min_samples(Interp1D m);

/// Piecewise-cubic Akima interpolant. Falls back to straight lines for two
/// points; needs at least three points for the Akima end conditions.
class AkimaSpline {
 public:
  AkimaSpline() = default;
  AkimaSpline(std::vector<double> xs, std::vector<double> ys);

  double operator()(double x) const;
  std::size_t size() const { return xs_.size(); }
  const std::vector<double>& knots() const { return xs_; }
  const std::vector<double>& values() const { return ys_; }

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
  std::vector<double> slopes_;  // node derivatives
};

/// Piecewise-linear interpolant; clamps outside the knot range.
class LinearCurve {
 public:
  LinearCurve() = default;
  LinearCurve(std::vector<double> xs, std::vector<double> ys);
  double operator()(double x) const;

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
};

/// Index i with xs[i] <= x < xs[i+1], clamped to [0, n-2]. xs must be strictly increasing.
std::size_t locate_interval(std::span<const double> xs, double x);

/// Interpolates samples (xs, ys) at x using only the local stencil the method needs.
/// xs strictly increasing, x within [xs.front(), xs.back()].
double interpolate_1d(Interp1D method, std::span<const double> xs, std::span<const double> ys, double x);

/// Catmull-Rom weights for fractional offset s in [0, 1) over samples p[-1..2].
void catmull_rom_weights(double s, double (&w)[4]);

}  // namespace flowroute
