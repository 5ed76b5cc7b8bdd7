#include "scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "flowroute/errors.hpp"
#include "flowroute/grid_io.hpp"

namespace flowroute::cli {

using nlohmann::json;

namespace {

std::string_view to_string(Minimizer m) {
  switch (m) {
    case Minimizer::kBrent: return "brent";
    case Minimizer::kGolden: return "golden";
    case Minimizer::kFibonacci: return "fibonacci";
  }
  return "?";
}

Minimizer parse_minimizer(const std::string& s, const std::string& field) {
  if (s == "brent") return Minimizer::kBrent;
  if (s == "golden") return Minimizer::kGolden;
  if (s == "fibonacci") return Minimizer::kFibonacci;
  throw ScenarioError(field, "unknown method '" + s + "' (brent|golden|fibonacci)");
}

/// Read-only view of one JSON value that remembers where it came from.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return j_; }

  std::string child_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void require_object() const {
    if (!j_.is_object()) fail("expected an object");
  }
  /// Rejects keys outside `allowed`, so misspelt options are not silently ignored.
  void only(std::initializer_list<const char*> allowed) const {
    require_object();
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : j_.items()) {
      if (!ok.contains(k)) throw ScenarioError(child_path(k), "unknown field");
    }
  }
  std::optional<Node> get(const std::string& key) const {
    require_object();
    const auto it = j_.find(key);
    if (it == j_.end() || it->is_null()) return std::nullopt;
    return Node(*it, child_path(key));
  }
  Node at(const std::string& key) const {
    auto n = get(key);
    if (!n) throw ScenarioError(child_path(key), "required field missing");
    return *n;
  }

  double number() const {
    if (!j_.is_number()) fail("expected a number");
    const double v = j_.get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }
  double positive() const {
    const double v = number();
    if (!(v > 0.0)) fail("must be positive");
    return v;
  }
  int integer() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    return j_.get<int>();
  }
  std::string string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  std::vector<double> numbers(std::size_t n) const {
    if (!j_.is_array() || j_.size() != n) fail("expected an array of " + std::to_string(n) + " numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(Node(j_[i], path_ + "[" + std::to_string(i) + "]").number());
    return out;
  }
  Vec2 point() const {
    const auto v = numbers(2);
    return {v[0], v[1]};
  }
  std::vector<Node> elements() const {
    if (!j_.is_array()) fail("expected an array");
    std::vector<Node> out;
    for (std::size_t i = 0; i < j_.size(); ++i) out.emplace_back(j_[i], path_ + "[" + std::to_string(i) + "]");
    return out;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ScenarioError(path_.empty() ? "<root>" : path_, what); }

 private:
  const json& j_;
  std::string path_;
};

double number_or(const Node& parent, const std::string& key, double fallback) {
  const auto n = parent.get(key);
  return n ? n->number() : fallback;
}

std::optional<double> optional_positive(const Node& parent, const std::string& key) {
  const auto n = parent.get(key);
  if (!n) return std::nullopt;
  return n->positive();
}

json point_json(Vec2 p) { return json::array({p.x, p.y}); }

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

template <class Fn>
void rethrow_as(const std::string& field, Fn&& fn) {
  try {
    fn();
  } catch (const ArgumentError& e) {
    throw ScenarioError(field, e.what());
  }
}

void parse_field(const Node& n, const std::filesystem::path& base, Scenario& sc) {
  FieldSpec& fs = sc.field_spec;
  const std::string type = n.at("type").string();
  if (type == "jet") {
    n.only({"type", "B0", "eps", "omega", "phase", "k", "c"});
    JetParams& p = fs.jet;
    p.B0 = number_or(n, "B0", p.B0);
    p.eps = number_or(n, "eps", p.eps);
    p.omega = number_or(n, "omega", p.omega);
    p.phase = number_or(n, "phase", p.phase);
    p.k = number_or(n, "k", p.k);
    p.c = number_or(n, "c", p.c);
    fs.kind = FieldKind::kJet;
    rethrow_as(n.path(), [&] { sc.field = std::make_shared<JetField>(p); });
  } else if (type == "uniform") {
    n.only({"type", "u", "v"});
    fs.kind = FieldKind::kUniform;
    fs.uniform = {number_or(n, "u", 0.0), number_or(n, "v", 0.0)};
    sc.field = std::make_shared<UniformField>(fs.uniform);
  } else if (type == "grid") {
    n.only({"type", "csv", "flowgrid", "interpolation"});
    const auto csv = n.get("csv");
    const auto fg = n.get("flowgrid");
    if (bool(csv) == bool(fg)) n.fail("exactly one of 'csv' or 'flowgrid' is required");
    const Node src = csv ? *csv : *fg;
    fs.kind = FieldKind::kGrid;
    fs.format = csv ? "csv" : "flowgrid";
    fs.path = base / src.string();
    if (!std::filesystem::exists(fs.path)) src.fail("file not found: " + fs.path.string());
    GridData data;
    try {
      if (csv) {
        data = import_grid_csv(fs.path);
      } else {
        GridFile file = read_flowgrid(fs.path);
        data = std::move(file.data);
        fs.interp = file.interp;
      }
    } catch (const std::exception& e) {
      src.fail(e.what());
    }
    if (const auto in = n.get("interpolation")) {
      in->only({"spatial", "depth", "time", "time_clamp", "fd_step"});
      rethrow_as(in->path(), [&] {
        if (const auto s = in->get("spatial")) fs.interp.spatial = parse_interp2d(s->string());
        if (const auto s = in->get("depth")) fs.interp.depth = parse_interp1d(s->string());
        if (const auto s = in->get("time")) fs.interp.time = parse_interp1d(s->string());
      });
      fs.interp.time_clamp = number_or(*in, "time_clamp", fs.interp.time_clamp);
      fs.interp.fd_step = number_or(*in, "fd_step", fs.interp.fd_step);
    }
    try {
      sc.field = std::make_shared<GridField>(std::move(data), fs.interp);
    } catch (const std::exception& e) {
      n.fail(e.what());
    }
  } else {
    n.at("type").fail("unknown field type '" + type + "' (jet|uniform|grid)");
  }
}

}  // namespace

SearchOptions Scenario::search_options(Algorithm a, double t_start) const {
  SearchOptions o = SearchOptions::for_algorithm(a);
  o.delta_phi_max = delta_phi_max_deg * std::numbers::pi / 180.0;
  o.v_current_max = v_current_max;
  o.optdir_steps = optdir_steps;
  o.t0 = t_start;
  return o;
}

Scenario parse_scenario(const json& doc, const std::filesystem::path& base_dir) {
  const Node root(doc, "");
  root.only({"name", "field", "grid", "vehicle", "starts", "start", "goal", "t0", "search", "step_control", "obstacles",
             "departure", "oracle"});
  Scenario sc;
  if (const auto n = root.get("name")) sc.name = n->string();

  parse_field(root.at("field"), base_dir, sc);

  const Node g = root.at("grid");
  g.only({"bounds", "cell", "sectors"});
  if (const auto b = g.get("bounds")) {
    const auto v = b->numbers(4);
    sc.grid.bounds = {v[0], v[1], v[2], v[3]};
  } else if (const auto fb = sc.field->bounds()) {
    sc.grid.bounds = *fb;
  } else {
    g.at("bounds");
  }
  sc.grid.cell = g.at("cell").positive();
  sc.grid.sectors = g.get("sectors") ? g.at("sectors").integer() : 3;
  rethrow_as(g.path(), [&] { sc.grid.validate(); });

  if (const auto v = root.get("vehicle")) {
    v->only({"speed", "depth", "dive"});
    if (const auto s = v->get("speed")) sc.vehicle.speed = s->positive();
    sc.vehicle.depth = number_or(*v, "depth", 0.0);
    if (const auto d = v->get("dive")) {
      d->only({"z_climbto", "z_diveup", "glide_factor", "depth_levels"});
      DiveProfile dp;
      dp.z_climbto = d->at("z_climbto").number();
      dp.z_diveup = d->at("z_diveup").number();
      dp.glide_factor = number_or(*d, "glide_factor", 1.0);
      if (const auto l = d->get("depth_levels")) dp.depth_levels = l->integer();
      sc.vehicle.dive = dp;
    }
    rethrow_as(v->path(), [&] { sc.vehicle.validate(); });
  }

  const auto starts = root.get("starts");
  const auto start = root.get("start");
  if (starts && start) root.fail("give either 'start' or 'starts', not both");
  if (start) {
    sc.starts.push_back(start->point());
  } else if (starts) {
    for (const Node& s : starts->elements()) sc.starts.push_back(s.point());
    if (sc.starts.empty()) starts->fail("at least one start position is required");
  } else {
    root.at("starts");
  }
  const Node goal = root.at("goal");
  sc.goal = goal.point();
  for (std::size_t i = 0; i < sc.starts.size(); ++i) {
    if (!sc.grid.bounds.contains(sc.starts[i], 1e-9)) {
      throw ScenarioError(start ? "start" : "starts[" + std::to_string(i) + "]", "position lies outside the grid bounds");
    }
  }
  if (!sc.grid.bounds.contains(sc.goal, 1e-9)) goal.fail("position lies outside the grid bounds");
  sc.t0 = number_or(root, "t0", 0.0);

  if (const auto o = root.get("obstacles")) {
    for (const Node& poly : o->elements()) {
      Polygon p;
      for (const Node& q : poly.elements()) p.push_back(q.point());
      if (p.size() < 3) poly.fail("a polygon needs at least three vertices");
      sc.obstacles.push_back(std::move(p));
    }
  }

  const double diag = std::hypot(sc.grid.bounds.width(), sc.grid.bounds.height());
  sc.v_current_max_window = sc.field->time_window().value_or(TimeWindow{sc.t0, sc.t0 + 4.0 * diag / sc.vehicle.speed});
  std::optional<double> vmax;
  if (const auto s = root.get("search")) {
    s->only({"algorithm", "delta_phi_max_deg", "v_current_max", "v_current_max_window", "optdir_steps"});
    if (const auto a = s->get("algorithm")) {
      rethrow_as(a->path(), [&] { sc.algorithm = parse_algorithm(a->string()); });
    }
    if (const auto d = s->get("delta_phi_max_deg")) {
      sc.delta_phi_max_deg = d->positive();
      if (sc.delta_phi_max_deg > 180.0) d->fail("must not exceed 180");
    }
    if (const auto v = s->get("v_current_max")) {
      vmax = v->number();
      if (*vmax < 0.0) v->fail("must be >= 0");
    }
    if (const auto w = s->get("v_current_max_window")) {
      const auto v = w->numbers(2);
      if (!(v[1] >= v[0])) w->fail("end precedes start");
      sc.v_current_max_window = {v[0], v[1]};
    }
    if (const auto k = s->get("optdir_steps")) {
      sc.optdir_steps = k->integer();
      if (sc.optdir_steps < 1) k->fail("must be >= 1");
    }
  }
  sc.v_current_max = vmax ? *vmax
                          : max_current_speed(*sc.field, sc.grid.bounds, sc.v_current_max_window, std::nullopt,
                                              sc.vehicle.depth)
                                .speed;

  if (const auto s = root.get("step_control")) {
    s->only({"h0", "tol", "h_min", "h_max", "penalty_weight"});
    sc.step.h0 = number_or(*s, "h0", sc.step.h0);
    sc.step.tol = number_or(*s, "tol", sc.step.tol);
    sc.step.h_min = number_or(*s, "h_min", sc.step.h_min);
    sc.step.h_max = number_or(*s, "h_max", sc.step.h_max);
    sc.step.penalty_weight = number_or(*s, "penalty_weight", sc.step.penalty_weight);
    rethrow_as(s->path(), [&] { sc.step.validate(); });
  }

  DepartureSpec& dep = sc.departure;
  const std::optional<double> period = sc.field->dominant_period();
  dep.window = sc.field->time_window().value_or(TimeWindow{sc.t0, sc.t0 + period.value_or(0.0)});
  if (const auto d = root.get("departure")) {
    d->only({"window", "dt", "tol", "horizon", "method", "start"});
    if (const auto w = d->get("window")) {
      const auto v = w->numbers(2);
      if (!(v[1] >= v[0])) w->fail("end precedes start");
      dep.window = {v[0], v[1]};
    }
    dep.dt = optional_positive(*d, "dt");
    dep.tol = optional_positive(*d, "tol");
    if (const auto h = d->get("horizon")) dep.horizon = h->number();
    if (const auto m = d->get("method")) dep.method = parse_minimizer(m->string(), m->path());
    if (const auto s = d->get("start")) {
      const int k = s->integer();
      if (k < 0 || static_cast<std::size_t>(k) >= sc.starts.size()) s->fail("no such start index");
      dep.start = static_cast<std::size_t>(k);
    }
  }
  // materialize the finder's own defaults so they appear in the echo
  if (!dep.dt && dep.window.length() > 0.0) dep.dt = period ? *period / 8.0 : dep.window.length() / 16.0;
  if (!dep.tol && dep.dt) dep.tol = *dep.dt / 100.0;

  sc.oracle.rho = sc.grid.cell / 10.0;
  if (const auto o = root.get("oracle")) {
    o->only({"starts", "rho", "dt", "max_time"});
    if (const auto s = o->get("starts")) {
      sc.oracle.starts = s->integer();
      if (sc.oracle.starts < 2) s->fail("must be >= 2");
    }
    if (const auto r = optional_positive(*o, "rho")) sc.oracle.rho = *r;
    if (const auto r = optional_positive(*o, "dt")) sc.oracle.dt = *r;
    sc.oracle.max_time = number_or(*o, "max_time", 0.0);
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("<file>", "cannot read " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ScenarioError("<file>", std::string("malformed JSON: ") + e.what());
  }
  return parse_scenario(doc, path.parent_path());
}

json Scenario::resolved() const {
  json field_j;
  switch (field_spec.kind) {
    case FieldKind::kJet: {
      const JetParams& p = field_spec.jet;
      field_j = {{"type", "jet"}, {"B0", p.B0}, {"eps", p.eps}, {"omega", p.omega},
               {"phase", p.phase}, {"k", p.k}, {"c", p.c}};
      break;
    }
    case FieldKind::kUniform:
      field_j = {{"type", "uniform"}, {"u", field_spec.uniform.u}, {"v", field_spec.uniform.v}};
      break;
    case FieldKind::kGrid: {
      const auto& gf = static_cast<const GridField&>(*field);
      const GridData& d = gf.data();
      const GridInterpolation& in = field_spec.interp;
      // file name only, so the echo does not depend on where the scenario lives
      field_j = {{"type", "grid"},
               {field_spec.format, field_spec.path.filename().string()},
               {"dims", {{"nx", d.nx}, {"ny", d.ny}, {"nz", d.nz()}, {"nt", d.nt()}}},
               {"origin", point_json(d.origin)},
               {"dx", d.dx},
               {"dy", d.dy},
               {"interpolation",
                {{"spatial", to_string(in.spatial)},
                 {"depth", to_string(in.depth)},
                 {"time", to_string(in.time)},
                 {"time_clamp", in.time_clamp},
                 {"fd_step", gf.fd_step()}}}};
      break;
    }
  }
  json vehicle_j = {{"speed", vehicle.speed}, {"depth", vehicle.depth}, {"dive", nullptr}};
  if (vehicle.dive) {
    const DiveProfile& dp = *vehicle.dive;
    vehicle_j["dive"] = {{"z_climbto", dp.z_climbto},
                       {"z_diveup", dp.z_diveup},
                       {"glide_factor", dp.glide_factor},
                       {"depth_levels", dp.depth_levels}};
  }
  json starts_j = json::array();
  for (Vec2 s : starts) starts_j.push_back(point_json(s));
  json obstacles_j = json::array();
  for (const Polygon& p : obstacles) {
    json poly = json::array();
    for (Vec2 q : p) poly.push_back(point_json(q));
    obstacles_j.push_back(poly);
  }
  const Box& b = grid.bounds;
  return {
      {"name", name},
      {"field", field_j},
      {"grid", {{"bounds", {b.xmin, b.ymin, b.xmax, b.ymax}}, {"cell", grid.cell}, {"sectors", grid.sectors}}},
      {"vehicle", vehicle_j},
      {"starts", starts_j},
      {"goal", point_json(goal)},
      {"t0", t0},
      {"search",
       {{"algorithm", to_string(algorithm)},
        {"delta_phi_max_deg", delta_phi_max_deg},
        {"v_current_max", v_current_max},
        {"v_current_max_window", {v_current_max_window.start, v_current_max_window.end}},
        {"optdir_steps", optdir_steps}}},
      {"step_control",
       {{"h0", step.h0},
        {"tol", step.tol},
        {"h_min", step.h_min},
        {"h_max", step.h_max},
        {"penalty_weight", step.penalty_weight}}},
      {"obstacles", obstacles_j},
      {"departure",
       {{"window", {departure.window.start, departure.window.end}},
        {"dt", optional_json(departure.dt)},
        {"tol", optional_json(departure.tol)},
        {"horizon", optional_json(departure.horizon)},
        {"method", to_string(departure.method)},
        {"start", departure.start}}},
      {"oracle",
       {{"starts", oracle.starts}, {"rho", oracle.rho}, {"dt", oracle.dt}, {"max_time", oracle.max_time}}},
  };
}

}  // namespace flowroute::cli
