#include "flowroute/grid_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "flowroute/errors.hpp"

namespace flowroute {

std::string format_double(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw FormatError("cannot format number");
  return std::string(buf, end);
}

namespace {

double parse_number(const std::string& tok, const std::string& context) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || !std::isfinite(v)) {
    throw FormatError(context + ": bad number '" + tok + "'");
  }
  return v;
}

std::size_t parse_count(const std::string& tok, const std::string& context) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) throw FormatError(context + ": bad count '" + tok + "'");
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) {
    cur.erase(0, cur.find_first_not_of(" \t\r"));
    cur.erase(cur.find_last_not_of(" \t\r") + 1);
    out.push_back(cur);
  }
  return out;
}

}  // namespace

GridFile read_flowgrid(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || split(line, ' ') != std::vector<std::string>{"FLOWGRID", "1"}) {
    throw FormatError("flowgrid: missing 'FLOWGRID 1' magic line");
  }
  GridFile g;
  std::size_t nz = 0;
  std::size_t nt = 0;
  bool have_data = false;
  std::map<std::string, bool> seen;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string key;
    ss >> key;
    if (key == "data") {
      have_data = true;
      break;
    }
    std::vector<std::string> vals;
    for (std::string tok; ss >> tok;) vals.push_back(tok);
    auto need = [&](std::size_t n) {
      if (vals.size() != n) throw FormatError("flowgrid: key '" + key + "' expects " + std::to_string(n) + " value(s)");
    };
    seen[key] = true;
    if (key == "nx") { need(1); g.data.nx = parse_count(vals[0], key); }
    else if (key == "ny") { need(1); g.data.ny = parse_count(vals[0], key); }
    else if (key == "nz") { need(1); nz = parse_count(vals[0], key); }
    else if (key == "nt") { need(1); nt = parse_count(vals[0], key); }
    else if (key == "origin") { need(2); g.data.origin = {parse_number(vals[0], key), parse_number(vals[1], key)}; }
    else if (key == "spacing") { need(2); g.data.dx = parse_number(vals[0], key); g.data.dy = parse_number(vals[1], key); }
    else if (key == "depths") { for (auto& v : vals) g.data.depths.push_back(parse_number(v, key)); }
    else if (key == "times") { for (auto& v : vals) g.data.times.push_back(parse_number(v, key)); }
    else if (key == "spatial") { need(1); g.interp.spatial = parse_interp2d(vals[0]); }
    else if (key == "depth") { need(1); g.interp.depth = parse_interp1d(vals[0]); }
    else if (key == "time") { need(1); g.interp.time = parse_interp1d(vals[0]); }
    else if (key == "time_clamp") { need(1); g.interp.time_clamp = parse_number(vals[0], key); }
    else if (key == "fd_step") { need(1); g.interp.fd_step = parse_number(vals[0], key); }
    else throw FormatError("flowgrid: unknown key '" + key + "'");
  }
  for (const char* k : {"nx", "ny", "nz", "nt", "origin", "spacing", "depths", "times"}) {
    if (!seen.count(k)) throw FormatError(std::string("flowgrid: missing key '") + k + "'");
  }
  if (!have_data) throw FormatError("flowgrid: missing 'data' marker");
  if (g.data.depths.size() != nz) throw FormatError("flowgrid: depth list length differs from nz");
  if (g.data.times.size() != nt) throw FormatError("flowgrid: time list length differs from nt");

  const std::size_t total = g.data.nx * g.data.ny * nz * nt;
  auto read_block = [&](std::vector<double>& dst, const char* name) {
    dst.reserve(total);
    std::string tok;
    while (dst.size() < total && in >> tok) dst.push_back(parse_number(tok, std::string("flowgrid ") + name));
    if (dst.size() != total) {
      throw FormatError(std::string("flowgrid: ") + name + " block has " + std::to_string(dst.size()) +
                        " values, expected " + std::to_string(total));
    }
  };
  read_block(g.data.u, "u");
  read_block(g.data.v, "v");
  std::string extra;
  if (in >> extra) throw FormatError("flowgrid: trailing data after v block");
  return g;
}

GridFile read_flowgrid(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open grid file " + path.string());
  return read_flowgrid(in);
}

void write_flowgrid(std::ostream& out, const GridFile& grid) {
  const auto& d = grid.data;
  out << "FLOWGRID 1\n";
  out << "nx " << d.nx << "\nny " << d.ny << "\nnz " << d.nz() << "\nnt " << d.nt() << "\n";
  out << "origin " << format_double(d.origin.x) << ' ' << format_double(d.origin.y) << "\n";
  out << "spacing " << format_double(d.dx) << ' ' << format_double(d.dy) << "\n";
  out << "depths";
  for (double z : d.depths) out << ' ' << format_double(z);
  out << "\ntimes";
  for (double t : d.times) out << ' ' << format_double(t);
  out << "\nspatial " << to_string(grid.interp.spatial) << "\ndepth " << to_string(grid.interp.depth)
      << "\ntime " << to_string(grid.interp.time) << "\ntime_clamp " << format_double(grid.interp.time_clamp)
      << "\nfd_step " << format_double(grid.interp.fd_step) << "\ndata\n";
  auto block = [&](const std::vector<double>& a) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      out << format_double(a[i]) << ((i + 1) % d.nx == 0 ? '\n' : ' ');
    }
  };
  block(d.u);
  block(d.v);
}

GridData import_grid_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("grid csv: empty input");
  if (split(line, ',') != std::vector<std::string>{"t", "z", "y", "x", "u", "v"}) {
    throw FormatError("grid csv: header must be t,z,y,x,u,v");
  }
  struct Row { double t, z, y, x, u, v; };
  std::vector<Row> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = split(line, ',');
    if (f.size() != 6) throw FormatError("grid csv line " + std::to_string(lineno) + ": expected 6 columns");
    const std::string ctx = "grid csv line " + std::to_string(lineno);
    rows.push_back({parse_number(f[0], ctx), parse_number(f[1], ctx), parse_number(f[2], ctx),
                    parse_number(f[3], ctx), parse_number(f[4], ctx), parse_number(f[5], ctx)});
  }
  if (rows.empty()) throw FormatError("grid csv: no data rows");

  auto axis = [&](auto member) {
    std::vector<double> a;
    for (const auto& r : rows) a.push_back(r.*member);
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
  };
  const auto ts = axis(&Row::t);
  const auto zs = axis(&Row::z);
  const auto ys = axis(&Row::y);
  const auto xs = axis(&Row::x);
  auto regular_step = [](const std::vector<double>& a, const char* name) {
    if (a.size() < 2) return 1.0;
    const double step = (a.back() - a.front()) / static_cast<double>(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) {
      if (std::abs((a[i] - a[i - 1]) - step) > 1e-9 * std::max(1.0, std::abs(step))) {
        throw FormatError(std::string("grid csv: ") + name + " axis is not regularly spaced");
      }
    }
    return step;
  };

  GridData d;
  d.nx = xs.size();
  d.ny = ys.size();
  d.origin = {xs.front(), ys.front()};
  d.dx = regular_step(xs, "x");
  d.dy = regular_step(ys, "y");
  d.depths = zs;
  d.times = ts;
  const std::size_t total = d.nx * d.ny * d.nz() * d.nt();
  if (rows.size() != total) {
    throw FormatError("grid csv: " + std::to_string(rows.size()) + " rows, lattice needs " + std::to_string(total));
  }
  d.u.assign(total, std::nan(""));
  d.v.assign(total, std::nan(""));
  auto pos = [](const std::vector<double>& a, double x) {
    return static_cast<std::size_t>(std::lower_bound(a.begin(), a.end(), x) - a.begin());
  };
  for (const auto& r : rows) {
    const std::size_t idx = d.index(pos(ts, r.t), pos(zs, r.z), pos(ys, r.y), pos(xs, r.x));
    if (!std::isnan(d.u[idx])) throw FormatError("grid csv: duplicate sample row");
    d.u[idx] = r.u;
    d.v[idx] = r.v;
  }
  return d;
}

GridData import_grid_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open grid csv " + path.string());
  return import_grid_csv(in);
}

}  // namespace flowroute
