#include "flowroute/route.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "flowroute/errors.hpp"
#include "flowroute/grid_io.hpp"

namespace flowroute {

double Route::length() const {
  double total = 0.0;
  for (std::size_t i = 1; i < waypoints.size(); ++i) total += distance(waypoints[i - 1], waypoints[i]);
  return total;
}

void write_route_csv(std::ostream& out, const Route& r) {
  out << "idx,x,y,t_arrival\n";
  for (std::size_t i = 0; i < r.size(); ++i) {
    out << i << ',' << format_double(r.waypoints[i].x) << ',' << format_double(r.waypoints[i].y) << ','
        << format_double(r.arrival[i]) << '\n';
  }
}

Route read_route_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || (line != "idx,x,y,t_arrival" && line != "idx,x,y,t_arrival\r")) {
    throw FormatError("route csv: header must be idx,x,y,t_arrival");
  }
  Route r;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string f[4];
    for (auto& s : f) {
      if (!std::getline(ss, s, ',')) throw FormatError("route csv line " + std::to_string(lineno) + ": expected 4 columns");
    }
    double vals[3];
    for (int k = 0; k < 3; ++k) {
      const std::string& s = f[k + 1];
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), vals[k]);
      if (ec != std::errc{} || p != s.data() + s.size()) {
        throw FormatError("route csv line " + std::to_string(lineno) + ": bad number '" + s + "'");
      }
    }
    if (f[0] != std::to_string(r.size())) throw FormatError("route csv line " + std::to_string(lineno) + ": idx out of sequence");
    r.waypoints.push_back({vals[0], vals[1]});
    r.arrival.push_back(vals[2]);
  }
  return r;
}

}  // namespace flowroute
