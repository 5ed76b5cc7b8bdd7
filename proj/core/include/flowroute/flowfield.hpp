#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "flowroute/geometry.hpp"
#include "flowroute/interp.hpp"

namespace flowroute {

/// Horizontal current (u east, v north).
struct CurrentSample {
  double u = 0.0;
  double v = 0.0;

  Vec2 vec() const { return {u, v}; }
  double speed() const { return std::hypot(u, v); }
};

/// Spatial partial derivatives of the current components.
struct CurrentGradient {
  double u_x = 0.0;
  double u_y = 0.0;
  double v_x = 0.0;
  double v_y = 0.0;
};

/// Spatial sampling resolution a field suggests for dense scans.
struct Resolution {
  double dx = 0.0;
  double dy = 0.0;
  double dt = 0.0;
};

/// Source of currents at (position, depth, time). Implementations are
/// immutable after construction and safe to share between threads.
class FlowField {
 public:
  virtual ~FlowField() = default;

  virtual CurrentSample sample(Vec2 p, double z, double t) const = 0;
  virtual CurrentGradient gradient(Vec2 p, double z, double t) const = 0;

  /// Spatial extent; nullopt for unbounded analytic fields.
  virtual std::optional<Box> bounds() const { return std::nullopt; }
  virtual std::optional<TimeWindow> time_window() const { return std::nullopt; }
  /// Period of the dominant time oscillation, if the field has one.
  virtual std::optional<double> dominant_period() const { return std::nullopt; }
  virtual std::optional<Resolution> resolution() const { return std::nullopt; }
};

/// Parameters of the meandering-jet stream function.
struct JetParams {
  double B0 = 1.2;
  double eps = 0.3;
  double omega = 0.4;
  double phase = std::numbers::pi / 2.0;
  double k = 0.84;
  double c = 0.12;

  void validate() const;
};

/// Eastward meandering jet: stream function
///   phi = 1 - tanh((y - B(t) cos(k(x - c t))) / sqrt(1 + k^2 B(t)^2 sin^2(k(x - c t))))
/// with B(t) = B0 + eps cos(omega t + phase), u = -dphi/dy, v = dphi/dx.
/// Depth is ignored.
class JetField final : public FlowField {
 public:
  explicit JetField(JetParams p = {});

  CurrentSample sample(Vec2 p, double z, double t) const override;
  CurrentGradient gradient(Vec2 p, double z, double t) const override;
  std::optional<double> dominant_period() const override;

  double amplitude(double t) const;
  double stream_function(Vec2 p, double t) const;
  const JetParams& params() const { return params_; }

 private:
  JetParams params_;
};

/// Spatially uniform, steady current. Mostly for tests and degenerate scenarios.
class UniformField final : public FlowField {
 public:
  explicit UniformField(CurrentSample c) : c_(c) {}
  CurrentSample sample(Vec2, double, double) const override { return c_; }
  CurrentGradient gradient(Vec2, double, double) const override { return {}; }

 private:
  CurrentSample c_;
};

/// Steady linear field (u, v) = offset + J * (x, y). Gradient is J.
class LinearField final : public FlowField {
 public:
  LinearField(CurrentSample offset, CurrentGradient jacobian) : offset_(offset), jac_(jacobian) {}
  CurrentSample sample(Vec2 p, double, double) const override {
    return {offset_.u + jac_.u_x * p.x + jac_.u_y * p.y, offset_.v + jac_.v_x * p.x + jac_.v_y * p.y};
  }
  CurrentGradient gradient(Vec2, double, double) const override { return jac_; }

 private:
  CurrentSample offset_;
  CurrentGradient jac_;
};

/// Interpolation choices of a gridded field.
struct GridInterpolation {
  Interp2D spatial = Interp2D::kBilinear;
  Interp1D depth = Interp1D::kLinear;
  Interp1D time = Interp1D::kLinear;
  /// Time queries up to this far outside the stamps clamp to the boundary field.
  double time_clamp = 0.0;
  /// Difference step for gradients, one-sided within a step of the grid edge; <= 0 selects min(dx, dy) / 100.
  double fd_step = 0.0;
};

/// Raw gridded samples. u and v are indexed [t][z][y][x], row-major.
struct GridData {
  std::size_t nx = 0;
  std::size_t ny = 0;
  Vec2 origin;
  double dx = 0.0;
  double dy = 0.0;
  std::vector<double> depths;
  std::vector<double> times;
  std::vector<double> u;
  std::vector<double> v;

  std::size_t nz() const { return depths.size(); }
  std::size_t nt() const { return times.size(); }
  std::size_t index(std::size_t it, std::size_t iz, std::size_t iy, std::size_t ix) const {
    return ((it * nz() + iz) * ny + iy) * nx + ix;
  }
};

/// Current field interpolated from samples: per depth layer in the plane first,
/// then across depth, then across time.
class GridField final : public FlowField {
 public:
  GridField(GridData data, GridInterpolation interp);

  CurrentSample sample(Vec2 p, double z, double t) const override;
  CurrentGradient gradient(Vec2 p, double z, double t) const override;
  std::optional<Box> bounds() const override;
  std::optional<TimeWindow> time_window() const override;
  std::optional<Resolution> resolution() const override;

  const GridData& data() const { return data_; }
  const GridInterpolation& interpolation() const { return interp_; }
  double fd_step() const { return fd_step_; }

 private:
  double clamp_time(double t) const;
  double layer_value(const std::vector<double>& comp, std::size_t it, std::size_t iz, Vec2 p) const;
  double interpolate(const std::vector<double>& comp, Vec2 p, double z, double t) const;

  GridData data_;
  GridInterpolation interp_;
  double fd_step_ = 0.0;
};

/// Central-difference gradient of any field with step h.
CurrentGradient finite_difference_gradient(const FlowField& f, Vec2 p, double z, double t, double h);

/// Sampling lattice for the maximum-speed scan.
struct SpeedLattice {
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::size_t nt = 0;
};

struct MaxSpeedResult {
  double speed = 0.0;
  SpeedLattice lattice;
};

/// Default lattice: 4 samples per grid cell and per time step for gridded fields,
/// 0.05 length units and 0.25 time units otherwise.
SpeedLattice default_speed_lattice(const FlowField& f, const Box& region, const TimeWindow& window);

/// Largest current magnitude over a regular lattice of region x window at depth z.
MaxSpeedResult max_current_speed(const FlowField& f, const Box& region, const TimeWindow& window,
                                 std::optional<SpeedLattice> lattice = std::nullopt, double z = 0.0);

}  // namespace flowroute
