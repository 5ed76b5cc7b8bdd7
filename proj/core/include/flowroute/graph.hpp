#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "flowroute/geometry.hpp"

namespace flowroute {

using VertexId = std::uint32_t;
inline constexpr VertexId kNoVertex = static_cast<VertexId>(-1);

/// Simple polygon, vertices in either winding order, not closed explicitly.
using Polygon = std::vector<Vec2>;

struct Segment {
  Vec2 a;
  Vec2 b;
};

/// Rectangular lattice with edges to every coprime offset within `sectors` cells.
struct GridSpec {
  Box bounds;
  double cell = 1.0;
  int sectors = 1;

  void validate() const;
};

struct Edge {
  VertexId from = kNoVertex;
  VertexId to = kNoVertex;
  double length = 0.0;
  Vec2 dir;  // unit vector from -> to
};

/// Planar graph of passable lattice points. Immutable after construction.
class GeoGraph {
 public:
  std::size_t vertex_count() const { return positions_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  Vec2 position(VertexId v) const { return positions_[v]; }
  /// Lattice column/row of the vertex.
  std::pair<int, int> lattice_index(VertexId v) const { return lattice_[v]; }
  std::span<const Edge> out_edges(VertexId v) const {
    return {edges_.data() + offsets_[v], edges_.data() + offsets_[v + 1]};
  }
  std::span<const Edge> edges() const { return edges_; }
  const GridSpec& spec() const { return spec_; }
  const std::vector<Polygon>& obstacles() const { return obstacles_; }

  /// Vertex at lattice point (i, j), or kNoVertex if blocked or outside.
  VertexId vertex_at(int i, int j) const;
  /// Vertex whose position is within half a cell of p, or kNoVertex.
  VertexId nearest_vertex(Vec2 p) const;

  void write_vertices_csv(std::ostream& out) const;
  void write_edges_csv(std::ostream& out) const;

 private:
  friend GeoGraph build_sector_grid(const GridSpec& spec, const std::vector<Polygon>& obstacles);

  GridSpec spec_;
  std::vector<Polygon> obstacles_;
  int cols_ = 0;
  int rows_ = 0;
  std::vector<Vec2> positions_;
  std::vector<std::pair<int, int>> lattice_;
  std::vector<VertexId> lattice_to_vertex_;  // rows_ * cols_
  std::vector<Edge> edges_;                  // grouped by source vertex
  std::vector<std::size_t> offsets_;         // vertex_count + 1
};

/// Lattice offsets (i, j) with max(|i|, |j|) <= sectors and gcd(|i|, |j|) = 1,
/// sorted by direction angle in [-pi, pi).
std::vector<std::pair<int, int>> sector_offsets(int sectors);

/// Builds the sector-grid graph. Throws ConstructionError if every lattice
/// point is blocked.
GeoGraph build_sector_grid(const GridSpec& spec, const std::vector<Polygon>& obstacles = {});

/// True if the segment crosses or touches the polygon boundary or lies inside it.
bool edge_intersects(const Segment& seg, const Polygon& poly);

/// True if p lies inside the polygon or on its boundary.
bool point_in_polygon(Vec2 p, const Polygon& poly);

bool segment_blocked(const Segment& seg, const std::vector<Polygon>& obstacles);

}  // namespace flowroute
