#include "flowroute/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "flowroute/errors.hpp"
#include "flowroute/grid_io.hpp"

namespace flowroute {

void GridSpec::validate() const {
  if (!(cell > 0.0) || !std::isfinite(cell)) throw ArgumentError("grid cell size must be positive");
  if (bounds.degenerate()) throw ArgumentError("grid bounds are degenerate");
  if (sectors < 1 || sectors > 3) throw ArgumentError("sector count must be 1, 2 or 3");
}

std::vector<std::pair<int, int>> sector_offsets(int sectors) {
  std::vector<std::pair<int, int>> out;
  for (int j = -sectors; j <= sectors; ++j) {
    for (int i = -sectors; i <= sectors; ++i) {
      if (i == 0 && j == 0) continue;
      if (std::gcd(std::abs(i), std::abs(j)) != 1) continue;
      out.emplace_back(i, j);
    }
  }
  std::sort(out.begin(), out.end(), [](auto a, auto b) {
    return std::atan2(a.second, a.first) < std::atan2(b.second, b.first);
  });
  return out;
}

namespace {

void check_polygon(const Polygon& poly) {
  if (poly.size() < 3) throw ArgumentError("degenerate polygon: fewer than 3 vertices");
  double area2 = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) area2 += cross(poly[i], poly[(i + 1) % poly.size()]);
  if (area2 == 0.0 || !std::isfinite(area2)) throw ArgumentError("degenerate polygon: zero area");
}

int orientation(Vec2 a, Vec2 b, Vec2 c) {
  const double v = cross(b - a, c - a);
  return (v > 0.0) - (v < 0.0);
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

// Closed segment intersection, touching included.
bool segments_touch(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

}  // namespace

bool point_in_polygon(Vec2 p, const Polygon& poly) {
  const std::size_t n = poly.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = poly[j];
    const Vec2 b = poly[i];
    if (orientation(a, b, p) == 0 && on_segment(a, b, p)) return true;
    if ((b.y > p.y) != (a.y > p.y)) {
      const double x_cross = b.x + (p.y - b.y) * (a.x - b.x) / (a.y - b.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

bool edge_intersects(const Segment& seg, const Polygon& poly) {
  check_polygon(poly);
  for (std::size_t i = 0; i < poly.size(); ++i) {
    if (segments_touch(seg.a, seg.b, poly[i], poly[(i + 1) % poly.size()])) return true;
  }
  // no boundary contact: either wholly inside or wholly outside
  return point_in_polygon(seg.a, poly);
}

bool segment_blocked(const Segment& seg, const std::vector<Polygon>& obstacles) {
  return std::any_of(obstacles.begin(), obstacles.end(), [&](const Polygon& p) { return edge_intersects(seg, p); });
}

VertexId GeoGraph::vertex_at(int i, int j) const {
  if (i < 0 || j < 0 || i >= cols_ || j >= rows_) return kNoVertex;
  return lattice_to_vertex_[static_cast<std::size_t>(j) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(i)];
}

VertexId GeoGraph::nearest_vertex(Vec2 p) const {
  const int i = static_cast<int>(std::lround((p.x - spec_.bounds.xmin) / spec_.cell));
  const int j = static_cast<int>(std::lround((p.y - spec_.bounds.ymin) / spec_.cell));
  const VertexId v = vertex_at(i, j);
  if (v == kNoVertex || distance(position(v), p) > 0.5 * spec_.cell) return kNoVertex;
  return v;
}

void GeoGraph::write_vertices_csv(std::ostream& out) const {
  out << "id,x,y\n";
  for (std::size_t v = 0; v < positions_.size(); ++v) {
    out << v << ',' << format_double(positions_[v].x) << ',' << format_double(positions_[v].y) << '\n';
  }
}

void GeoGraph::write_edges_csv(std::ostream& out) const {
  out << "from,to,length\n";
  for (const Edge& e : edges_) out << e.from << ',' << e.to << ',' << format_double(e.length) << '\n';
}

GeoGraph build_sector_grid(const GridSpec& spec, const std::vector<Polygon>& obstacles) {
  spec.validate();
  for (const auto& poly : obstacles) check_polygon(poly);

  GeoGraph g;
  g.spec_ = spec;
  g.obstacles_ = obstacles;
  const double slack = 1e-9 * spec.cell;
  g.cols_ = static_cast<int>(std::floor(spec.bounds.width() / spec.cell + 1e-9)) + 1;
  g.rows_ = static_cast<int>(std::floor(spec.bounds.height() / spec.cell + 1e-9)) + 1;
  g.lattice_to_vertex_.assign(static_cast<std::size_t>(g.cols_) * static_cast<std::size_t>(g.rows_), kNoVertex);

  for (int j = 0; j < g.rows_; ++j) {
    for (int i = 0; i < g.cols_; ++i) {
      const Vec2 p{spec.bounds.xmin + i * spec.cell, spec.bounds.ymin + j * spec.cell};
      if (!spec.bounds.contains(p, slack)) continue;
      const bool blocked =
          std::any_of(obstacles.begin(), obstacles.end(), [&](const Polygon& poly) { return point_in_polygon(p, poly); });
      if (blocked) continue;
      g.lattice_to_vertex_[static_cast<std::size_t>(j) * static_cast<std::size_t>(g.cols_) + static_cast<std::size_t>(i)] =
          static_cast<VertexId>(g.positions_.size());
      g.positions_.push_back(p);
      g.lattice_.emplace_back(i, j);
    }
  }
  if (g.positions_.empty()) throw ConstructionError("no passable vertices remain after obstacle filtering");

  const auto offsets = sector_offsets(spec.sectors);
  g.offsets_.reserve(g.positions_.size() + 1);
  g.offsets_.push_back(0);
  for (VertexId v = 0; v < g.positions_.size(); ++v) {
    const auto [i, j] = g.lattice_[v];
    for (const auto& [di, dj] : offsets) {
      const VertexId w = g.vertex_at(i + di, j + dj);
      if (w == kNoVertex) continue;
      const Vec2 a = g.positions_[v];
      const Vec2 b = g.positions_[w];
      if (segment_blocked({a, b}, obstacles)) continue;
      const double len = spec.cell * std::hypot(static_cast<double>(di), static_cast<double>(dj));
      const Vec2 dir = Vec2{static_cast<double>(di), static_cast<double>(dj)} /
                       std::hypot(static_cast<double>(di), static_cast<double>(dj));
      g.edges_.push_back({v, w, len, dir});
    }
    g.offsets_.push_back(g.edges_.size());
  }
  return g;
}

}  // namespace flowroute
