#include "flowroute/flowfield.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "flowroute/errors.hpp"

namespace flowroute {

// --- meandering jet ---------------------------------------------------------

void JetParams::validate() const {
  if (!(k > 0.0)) throw ArgumentError("jet wavenumber k must be positive");
  if (!(eps >= 0.0)) throw ArgumentError("jet oscillation amplitude eps must be non-negative");
  for (double p : {B0, eps, omega, phase, k, c}) {
    if (!std::isfinite(p)) throw ArgumentError("jet parameters must be finite");
  }
}

JetField::JetField(JetParams p) : params_(p) { params_.validate(); }

double JetField::amplitude(double t) const {
  return params_.B0 + params_.eps * std::cos(params_.omega * t + params_.phase);
}

std::optional<double> JetField::dominant_period() const {
  if (params_.eps == 0.0 || params_.omega == 0.0) return std::nullopt;
  return 2.0 * std::numbers::pi / std::abs(params_.omega);
}

double JetField::stream_function(Vec2 p, double t) const {
  const double B = amplitude(t);
  const double xi = params_.k * (p.x - params_.c * t);
  const double S = std::sin(xi);
  const double D = std::sqrt(1.0 + params_.k * params_.k * B * B * S * S);
  return 1.0 - std::tanh((p.y - B * std::cos(xi)) / D);
}

namespace {

struct JetTerms {
  double S, C, D, N, T, s2, eta_x, D_x;
};

JetTerms jet_terms(const JetParams& jp, double B, Vec2 p, double t) {
  JetTerms j{};
  const double k = jp.k;
  const double xi = k * (p.x - jp.c * t);
  j.S = std::sin(xi);
  j.C = std::cos(xi);
  const double kB = k * B;
  j.D = std::sqrt(1.0 + kB * kB * j.S * j.S);
  j.N = p.y - B * j.C;
  j.T = std::tanh(j.N / j.D);
  j.s2 = 1.0 - j.T * j.T;
  const double k3B2SC = k * k * k * B * B * j.S * j.C;
  j.D_x = k3B2SC / j.D;
  j.eta_x = B * k * j.S / j.D - k3B2SC * j.N / (j.D * j.D * j.D);
  return j;
}

}  // namespace

CurrentSample JetField::sample(Vec2 p, double /*z*/, double t) const {
  const JetTerms j = jet_terms(params_, amplitude(t), p, t);
  return {j.s2 / j.D, -j.s2 * j.eta_x};
}

CurrentGradient JetField::gradient(Vec2 p, double /*z*/, double t) const {
  const double B = amplitude(t);
  const double k = params_.k;
  const JetTerms j = jet_terms(params_, B, p, t);
  const double D2 = j.D * j.D;
  const double D3 = D2 * j.D;
  const double D5 = D3 * D2;
  const double k3B2 = k * k * k * B * B;

  const double eta_xy = -k3B2 * j.S * j.C / D3;
  const double dA1 = B * k * k * j.C / j.D - B * B * B * k * k * k * k * j.S * j.S * j.C / D3;
  const double dA2 = k3B2 * (k * (j.C * j.C - j.S * j.S) * j.N / D3 + j.S * j.C * B * k * j.S / D3 -
                             3.0 * j.S * j.C * j.N * k3B2 * j.S * j.C / D5);
  const double eta_xx = dA1 - dA2;

  CurrentGradient g;
  g.u_y = -2.0 * j.s2 * j.T / D2;
  g.u_x = -2.0 * j.s2 * j.T * j.eta_x / j.D - j.s2 * j.D_x / D2;
  g.v_y = 2.0 * j.s2 * j.T * j.eta_x / j.D - j.s2 * eta_xy;
  g.v_x = 2.0 * j.s2 * j.T * j.eta_x * j.eta_x - j.s2 * eta_xx;
  return g;
}

// --- gridded field ----------------------------------------------------------

GridField::GridField(GridData data, GridInterpolation interp) : data_(std::move(data)), interp_(interp) {
  const auto& d = data_;
  if (d.nx == 0 || d.ny == 0 || d.nz() == 0 || d.nt() == 0) throw ArgumentError("grid dimensions must be positive");
  if (!(d.dx > 0.0) || !(d.dy > 0.0)) throw ArgumentError("grid spacing must be positive");
  const std::size_t total = d.nx * d.ny * d.nz() * d.nt();
  if (d.u.size() != total || d.v.size() != total) {
    throw ArgumentError("grid arrays hold " + std::to_string(d.u.size()) + "/" + std::to_string(d.v.size()) +
                        " values, expected " + std::to_string(total));
  }
  auto increasing = [](const std::vector<double>& a) {
    return std::adjacent_find(a.begin(), a.end(), [](double l, double r) { return !(r > l); }) == a.end();
  };
  if (!increasing(d.depths)) throw ArgumentError("depth levels must be strictly increasing");
  if (!increasing(d.times)) throw ArgumentError("time stamps must be strictly increasing");
  if (d.nz() > 1 && d.nz() < min_samples(interp_.depth)) {
    throw ArgumentError("depth method " + std::string(to_string(interp_.depth)) + " needs at least " +
                        std::to_string(min_samples(interp_.depth)) + " levels");
  }
  if (d.nt() > 1 && d.nt() < min_samples(interp_.time)) {
    throw ArgumentError("time method " + std::string(to_string(interp_.time)) + " needs at least " +
                        std::to_string(min_samples(interp_.time)) + " stamps");
  }
  if (interp_.spatial != Interp2D::kNearest && (d.nx < 2 || d.ny < 2)) {
    throw ArgumentError("planar interpolation needs at least 2x2 samples per layer");
  }
  if (!(interp_.time_clamp >= 0.0)) throw ArgumentError("time clamp tolerance must be non-negative");
  fd_step_ = interp_.fd_step > 0.0 ? interp_.fd_step : std::min(d.dx, d.dy) / 100.0;
}

std::optional<Box> GridField::bounds() const {
  return Box{data_.origin.x, data_.origin.y, data_.origin.x + data_.dx * static_cast<double>(data_.nx - 1),
             data_.origin.y + data_.dy * static_cast<double>(data_.ny - 1)};
}

std::optional<TimeWindow> GridField::time_window() const { return TimeWindow{data_.times.front(), data_.times.back()}; }

std::optional<Resolution> GridField::resolution() const {
  const double dt = data_.nt() > 1 ? (data_.times.back() - data_.times.front()) / static_cast<double>(data_.nt() - 1) : 0.0;
  return Resolution{data_.dx, data_.dy, dt};
}

double GridField::clamp_time(double t) const {
  const double t0 = data_.times.front();
  const double t1 = data_.times.back();
  if (t < t0) {
    if (t0 - t > interp_.time_clamp) throw DomainError("t", "time " + std::to_string(t) + " before first stamp");
    return t0;
  }
  if (t > t1) {
    if (t - t1 > interp_.time_clamp) throw DomainError("t", "time " + std::to_string(t) + " beyond last stamp");
    return t1;
  }
  return t;
}

double GridField::layer_value(const std::vector<double>& comp, std::size_t it, std::size_t iz, Vec2 p) const {
  const auto& d = data_;
  const double gx = (p.x - d.origin.x) / d.dx;
  const double gy = (p.y - d.origin.y) / d.dy;
  const auto nxm = static_cast<double>(d.nx - 1);
  const auto nym = static_cast<double>(d.ny - 1);
  auto at = [&](std::ptrdiff_t ix, std::ptrdiff_t iy) {
    return comp[d.index(it, iz, static_cast<std::size_t>(iy), static_cast<std::size_t>(ix))];
  };

  switch (interp_.spatial) {
    case Interp2D::kNearest: {
      // round half down so a point on a cell midline takes the lower sample
      const auto ix = static_cast<std::ptrdiff_t>(std::clamp(std::ceil(gx - 0.5), 0.0, nxm));
      const auto iy = static_cast<std::ptrdiff_t>(std::clamp(std::ceil(gy - 0.5), 0.0, nym));
      return at(ix, iy);
    }
    case Interp2D::kBilinear: {
      const auto ix = static_cast<std::ptrdiff_t>(std::clamp(std::floor(gx), 0.0, nxm - 1));
      const auto iy = static_cast<std::ptrdiff_t>(std::clamp(std::floor(gy), 0.0, nym - 1));
      const double sx = gx - static_cast<double>(ix);
      const double sy = gy - static_cast<double>(iy);
      const double a = at(ix, iy) + sx * (at(ix + 1, iy) - at(ix, iy));
      const double b = at(ix, iy + 1) + sx * (at(ix + 1, iy + 1) - at(ix, iy + 1));
      return a + sy * (b - a);
    }
    case Interp2D::kBicubic: {
      const auto nx = static_cast<std::ptrdiff_t>(d.nx);
      const auto ny = static_cast<std::ptrdiff_t>(d.ny);
      const auto ix = static_cast<std::ptrdiff_t>(std::clamp(std::floor(gx), 0.0, nxm - 1));
      const auto iy = static_cast<std::ptrdiff_t>(std::clamp(std::floor(gy), 0.0, nym - 1));
      // Ghost samples beyond the edge are linear extrapolations, so linear
      // fields stay exact up to the boundary.
      auto value = [&](std::ptrdiff_t jx, std::ptrdiff_t jy) {
        auto ghost = [&](std::ptrdiff_t j, std::ptrdiff_t n, auto&& f) {
          if (j < 0) return 2.0 * f(0) - f(1);
          if (j >= n) return 2.0 * f(n - 1) - f(n - 2);
          return f(j);
        };
        return ghost(jy, ny, [&](std::ptrdiff_t yy) {
          return ghost(jx, nx, [&](std::ptrdiff_t xx) { return at(xx, yy); });
        });
      };
      double wx[4];
      double wy[4];
      catmull_rom_weights(gx - static_cast<double>(ix), wx);
      catmull_rom_weights(gy - static_cast<double>(iy), wy);
      double acc = 0.0;
      for (int j = 0; j < 4; ++j) {
        double row = 0.0;
        for (int i = 0; i < 4; ++i) row += wx[i] * value(ix - 1 + i, iy - 1 + j);
        acc += wy[j] * row;
      }
      return acc;
    }
  }
  return 0.0;
}

double GridField::interpolate(const std::vector<double>& comp, Vec2 p, double z, double t) const {
  const auto& d = data_;
  const auto& z_axis = d.depths;
  const auto& t_axis = d.times;

  // Only the stencil each 1-D method touches is evaluated in the plane. The
  // window is wide enough that interior tangents match a full-axis evaluation.
  auto stencil = [](Interp1D m, const std::vector<double>& axis, double x) {
    const std::size_t n = axis.size();
    if (n == 1) return std::pair<std::size_t, std::size_t>{0, 0};
    const std::size_t i = locate_interval(axis, x);
    std::size_t reach = 0;
    switch (m) {
      case Interp1D::kNearest:
      case Interp1D::kLinear: reach = 0; break;
      case Interp1D::kCubic: reach = 1; break;
      case Interp1D::kAkima: reach = 2; break;
    }
    const std::size_t lo = i >= reach ? i - reach : 0;
    const std::size_t hi = std::min(n - 1, i + 1 + reach);
    return std::pair<std::size_t, std::size_t>{lo, hi};
  };

  const auto [tz0, tz1] = stencil(interp_.depth, z_axis, z);
  const auto [tt0, tt1] = stencil(interp_.time, t_axis, t);

  std::vector<double> per_time;
  per_time.reserve(tt1 - tt0 + 1);
  std::vector<double> per_depth(tz1 - tz0 + 1);
  for (std::size_t it = tt0; it <= tt1; ++it) {
    for (std::size_t iz = tz0; iz <= tz1; ++iz) per_depth[iz - tz0] = layer_value(comp, it, iz, p);
    if (per_depth.size() == 1) {
      per_time.push_back(per_depth[0]);
    } else {
      per_time.push_back(interpolate_1d(interp_.depth, std::span(z_axis).subspan(tz0, tz1 - tz0 + 1), per_depth, z));
    }
  }
  if (per_time.size() == 1) return per_time[0];
  return interpolate_1d(interp_.time, std::span(t_axis).subspan(tt0, tt1 - tt0 + 1), per_time, t);
}

CurrentSample GridField::sample(Vec2 p, double z, double t) const {
  const Box b = *bounds();
  if (p.x < b.xmin || p.x > b.xmax) throw DomainError("x", "x = " + std::to_string(p.x) + " outside grid");
  if (p.y < b.ymin || p.y > b.ymax) throw DomainError("y", "y = " + std::to_string(p.y) + " outside grid");
  const auto& zs = data_.depths;
  if (zs.size() > 1 && (z < zs.front() || z > zs.back())) {
    throw DomainError("z", "depth " + std::to_string(z) + " outside grid levels");
  }
  if (zs.size() == 1 && z != zs.front()) {
    // single-layer grids are treated as depth-uniform
    z = zs.front();
  }
  t = clamp_time(t);
  return {interpolate(data_.u, p, z, t), interpolate(data_.v, p, z, t)};
}

CurrentGradient GridField::gradient(Vec2 p, double z, double t) const {
  const Box b = *bounds();
  if (!b.contains(p)) throw DomainError(p.x < b.xmin || p.x > b.xmax ? "x" : "y", "gradient query outside the grid");
  // the stencil is clipped to the grid, turning into a one-sided difference at the edges
  const double h = fd_step_;
  const double x0 = std::max(p.x - h, b.xmin);
  const double x1 = std::min(p.x + h, b.xmax);
  const double y0 = std::max(p.y - h, b.ymin);
  const double y1 = std::min(p.y + h, b.ymax);
  const CurrentSample xp = sample({x1, p.y}, z, t);
  const CurrentSample xm = sample({x0, p.y}, z, t);
  const CurrentSample yp = sample({p.x, y1}, z, t);
  const CurrentSample ym = sample({p.x, y0}, z, t);
  const double ix = 1.0 / (x1 - x0);
  const double iy = 1.0 / (y1 - y0);
  return {(xp.u - xm.u) * ix, (yp.u - ym.u) * iy, (xp.v - xm.v) * ix, (yp.v - ym.v) * iy};
}

CurrentGradient finite_difference_gradient(const FlowField& f, Vec2 p, double z, double t, double h) {
  const CurrentSample xp = f.sample({p.x + h, p.y}, z, t);
  const CurrentSample xm = f.sample({p.x - h, p.y}, z, t);
  const CurrentSample yp = f.sample({p.x, p.y + h}, z, t);
  const CurrentSample ym = f.sample({p.x, p.y - h}, z, t);
  const double inv = 1.0 / (2.0 * h);
  return {(xp.u - xm.u) * inv, (yp.u - ym.u) * inv, (xp.v - xm.v) * inv, (yp.v - ym.v) * inv};
}

// --- maximum speed scan -----------------------------------------------------

SpeedLattice default_speed_lattice(const FlowField& f, const Box& region, const TimeWindow& window) {
  double sx = 0.05;
  double sy = 0.05;
  double st = 0.25;
  if (auto r = f.resolution()) {
    sx = r->dx / 4.0;
    sy = r->dy / 4.0;
    if (r->dt > 0.0) st = r->dt / 4.0;
  }
  auto count = [](double extent, double step) {
    return static_cast<std::size_t>(std::ceil(extent / step - 1e-9)) + 1;
  };
  return {count(region.width(), sx), count(region.height(), sy),
          window.length() > 0.0 ? count(window.length(), st) : 1};
}

MaxSpeedResult max_current_speed(const FlowField& f, const Box& region, const TimeWindow& window,
                                 std::optional<SpeedLattice> lattice, double z) {
  if (region.degenerate()) throw ArgumentError("max_current_speed: empty region");
  if (window.length() < 0.0) throw ArgumentError("max_current_speed: negative time window");
  const SpeedLattice lat = lattice ? *lattice : default_speed_lattice(f, region, window);
  if (lat.nx < 2 || lat.ny < 2 || lat.nt < 1) throw ArgumentError("max_current_speed: lattice too coarse");
  auto node = [](double lo, double hi, std::size_t i, std::size_t n) {
    if (n == 1) return lo;
    return i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  double best = 0.0;
  for (std::size_t it = 0; it < lat.nt; ++it) {
    const double t = node(window.start, window.end, it, lat.nt);
    for (std::size_t iy = 0; iy < lat.ny; ++iy) {
      const double y = node(region.ymin, region.ymax, iy, lat.ny);
      for (std::size_t ix = 0; ix < lat.nx; ++ix) {
        const double x = node(region.xmin, region.xmax, ix, lat.nx);
        best = std::max(best, f.sample({x, y}, z, t).speed());
      }
    }
  }
  return {best, lat};
}

}  // namespace flowroute
