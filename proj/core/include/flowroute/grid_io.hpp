#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "flowroute/flowfield.hpp"

namespace flowroute {

/// Samples plus the interpolation defaults stored alongside them.
struct GridFile {
  GridData data;
  GridInterpolation interp;
};

/// Text container, see docs/formats.md ("FLOWGRID 1" header, key/value lines,
/// a `data` marker, then all u values followed by all v values in [t][z][y][x] order).
GridFile read_flowgrid(std::istream& in);
GridFile read_flowgrid(const std::filesystem::path& path);
void write_flowgrid(std::ostream& out, const GridFile& grid);

/// CSV with header `t,z,y,x,u,v`; rows in any order but the lattice must be
/// complete and regular in x and y.
GridData import_grid_csv(std::istream& in);
GridData import_grid_csv(const std::filesystem::path& path);

/// Shortest decimal text that round-trips the double.
std::string format_double(double v);

}  // namespace flowroute
