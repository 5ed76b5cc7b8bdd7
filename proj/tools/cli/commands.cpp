#include "commands.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "flowroute/errors.hpp"
#include "flowroute/grid_io.hpp"
#include "flowroute/oracle.hpp"
#include "flowroute/parallel.hpp"
#include "flowroute/smooth.hpp"

namespace flowroute::cli {

using nlohmann::json;

namespace {

struct Context {
  const Scenario& sc;
  GeoGraph graph;
  VertexId goal = kNoVertex;
  std::vector<VertexId> sources;
};

VertexId snap(const GeoGraph& g, Vec2 p, const std::string& field) {
  const VertexId v = g.nearest_vertex(p);
  if (v == kNoVertex) throw ScenarioError(field, "position is not within half a cell of a free lattice point");
  return v;
}

Context make_context(const Scenario& sc) {
  Context ctx{sc, build_sector_grid(sc.grid, sc.obstacles), kNoVertex, {}};
  ctx.goal = snap(ctx.graph, sc.goal, "goal");
  for (std::size_t i = 0; i < sc.starts.size(); ++i) {
    ctx.sources.push_back(snap(ctx.graph, sc.starts[i], "starts[" + std::to_string(i) + "]"));
  }
  return ctx;
}

SearchResult run_plan(const Context& ctx, std::size_t start, Algorithm algo, double t_dep) {
  const Scenario& sc = ctx.sc;
  return plan(ctx.graph, *sc.field, ctx.sources[start], ctx.goal, sc.vehicle, sc.step, sc.search_options(algo, t_dep));
}

/// Stats as written to JSON; wall time is left out so reruns are byte-identical.
json stats_json(const PlanStats& s) {
  return {{"cfc", s.cfc},
          {"cmc", s.cmc},
          {"visited_edges", s.visited_edges},
          {"scanned_edges", s.scanned_edges},
          {"expanded_vertices", s.expanded_vertices},
          {"closed_skips", s.closed_skips},
          {"dominance_skips", s.dominance_skips},
          {"zermelo_pruned", s.zermelo_pruned},
          {"optdir_calls", s.optdir_calls},
          {"optdir_fallbacks", s.optdir_fallbacks},
          {"optdir_cmc", s.optdir_cmc}};
}

json point_json(Vec2 p) { return json::array({p.x, p.y}); }

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string route_csv(const Route& r) {
  std::ostringstream os;
  write_route_csv(os, r);
  return os.str();
}

std::vector<Artifact> cmd_plan(const Context& ctx) {
  const Scenario& sc = ctx.sc;
  std::vector<Artifact> out;
  json routes = json::array();
  for (std::size_t i = 0; i < sc.starts.size(); ++i) {
    const SearchResult r = run_plan(ctx, i, sc.algorithm, sc.t0);
    out.push_back({"route_" + std::to_string(i) + ".csv", route_csv(r.route)});
    json entry = {{"start", point_json(sc.starts[i])},
                  {"departure", r.route.departure()},
                  {"arrival", r.route.goal_arrival()},
                  {"travel_time", r.route.travel_time()},
                  {"waypoints", r.route.size()},
                  {"length", r.route.length()}};
    entry["stats"] = stats_json(r.stats);
    routes.push_back(entry);
  }
  out.push_back({"stats.json", dump({{"algorithm", to_string(sc.algorithm)}, {"routes", routes}})});
  return out;
}

std::vector<Artifact> cmd_smooth(const Context& ctx) {
  const Scenario& sc = ctx.sc;
  std::vector<Artifact> out;
  json routes = json::array();
  double reduction = 0.0;
  for (std::size_t i = 0; i < sc.starts.size(); ++i) {
    const SearchResult r = run_plan(ctx, i, sc.algorithm, sc.t0);
    const SmoothResult s = smooth_route(*sc.field, r.route, sc.obstacles, sc.vehicle, sc.step);
    out.push_back({"smoothed_" + std::to_string(i) + ".csv", route_csv(s.route)});
    const double red = 1.0 - static_cast<double>(s.route.size()) / static_cast<double>(r.route.size());
    reduction += red / static_cast<double>(sc.starts.size());
    routes.push_back({{"start", point_json(sc.starts[i])},
                      {"waypoints_before", r.route.size()},
                      {"waypoints_after", s.route.size()},
                      {"reduction", red},
                      {"arrival_before", r.route.goal_arrival()},
                      {"arrival_after", s.route.goal_arrival()},
                      {"passes", s.passes},
                      {"diagnostic", s.diagnostic}});
  }
  out.push_back({"smooth.json", dump({{"algorithm", to_string(sc.algorithm)},
                                      {"mean_reduction", reduction},
                                      {"routes", routes}})});
  return out;
}

std::vector<Artifact> cmd_departure(const Context& ctx, unsigned jobs) {
  const Scenario& sc = ctx.sc;
  const DepartureSpec& d = sc.departure;
  const Planner planner = [&](double t_dep) { return run_plan(ctx, d.start, sc.algorithm, t_dep).route.travel_time(); };
  DepartureOptions opt;
  opt.window = d.window;
  opt.dt = d.dt;
  opt.tol = d.tol;
  opt.period = sc.field->dominant_period();
  opt.horizon = d.horizon;
  opt.method = d.method;
  opt.jobs = jobs;
  const DepartureResult r = find_optimal_departure(planner, planner, opt);

  std::string csv = "t_dep,t_trav,source\n";
  auto rows = [&](const std::vector<SupportPoint>& pts, const char* source) {
    for (const SupportPoint& p : pts) csv += format_double(p.t_dep) + "," + format_double(p.t_trav) + "," + source + "\n";
  };
  rows(r.support, "support");
  rows(r.refinement.trace, "refine");

  const json result = {
      {"algorithm", to_string(sc.algorithm)},
      {"start", point_json(sc.starts[d.start])},
      {"window", {d.window.start, d.window.end}},
      {"dt", r.dt},
      {"tol", r.tol},
      {"t_opt", r.t_opt},
      {"t_trav", r.t_trav},
      {"arrival", r.t_opt + r.t_trav},
      {"bracket", {{"lo", r.bracket.lo}, {"mid", r.bracket.mid}, {"hi", r.bracket.hi},
                   {"at_boundary", r.bracket.at_boundary}}},
      {"non_unimodal", r.refinement.non_unimodal},
      {"support_calls", r.support.size()},
      {"refine_calls", r.refinement.evaluations},
      {"planner_calls", r.planner_calls},
      {"diagnostics", r.diagnostics}};
  return {{"scan.csv", csv}, {"departure.json", dump(result)}};
}

std::vector<Artifact> cmd_oracle(const Context& ctx) {
  const Scenario& sc = ctx.sc;
  ShootingOptions so;
  so.starts = sc.oracle.starts;
  so.rho = sc.oracle.rho;
  so.dt = sc.oracle.dt;
  so.max_time = sc.oracle.max_time;
  so.domain = sc.grid.bounds;
  std::vector<Artifact> out;
  json rows = json::array();
  for (std::size_t i = 0; i < sc.starts.size(); ++i) {
    const OracleResult o = solve_bvp_shooting(*sc.field, sc.starts[i], sc.goal, sc.t0, sc.vehicle, so);
    std::ostringstream os;
    write_trajectory_csv(os, o.trajectory);
    out.push_back({"trajectory_" + std::to_string(i) + ".csv", os.str()});
    const SearchResult g = run_plan(ctx, i, sc.algorithm, sc.t0);
    rows.push_back({{"start", point_json(sc.starts[i])},
                    {"travel_time", o.travel_time},
                    {"theta0", o.theta0},
                    {"miss", o.miss},
                    {"shots", o.shots},
                    {"evaluations", o.trajectory.evaluations},
                    {"graph_travel_time", g.route.travel_time()},
                    {"graph_to_oracle", g.route.travel_time() / o.travel_time}});
  }
  out.push_back({"oracle.json", dump({{"algorithm", to_string(sc.algorithm)}, {"routes", rows}})});
  return out;
}

struct BenchCell {
  bool ok = false;
  std::string error;
  SearchResult result;
};

std::vector<Artifact> cmd_bench(const Context& ctx, unsigned jobs) {
  const Scenario& sc = ctx.sc;
  constexpr std::size_t kAlgos = std::size(kAllAlgorithms);
  const std::size_t n = sc.starts.size();
  std::vector<BenchCell> cells(kAlgos * n);
  detail::parallel_for(cells.size(), jobs, [&](std::size_t k) {
    BenchCell& c = cells[k];
    try {
      c.result = run_plan(ctx, k % n, kAllAlgorithms[k / n], sc.t0);
      c.ok = true;
    } catch (const NoRouteError& e) {
      c.error = e.what();
      c.result.stats = e.stats();
    }
  });

  std::string csv =
      "algorithm,start,x,y,status,travel_time,waypoints,cfc,cmc,visited_edges,expanded_vertices,optdir_cmc,"
      "same_path_as_tve\n";
  json rows = json::array();
  json summary = json::object();
  bool ordering = true;
  for (std::size_t a = 0; a < kAlgos; ++a) {
    double cfc_ratio = 0.0;
    double cmc_ratio = 0.0;
    bool identical = true;
    bool complete = true;
    for (std::size_t i = 0; i < n; ++i) {
      const BenchCell& c = cells[a * n + i];
      const BenchCell& ref = cells[i];
      const PlanStats& s = c.result.stats;
      const bool same = c.ok && ref.ok && c.result.vertices == ref.result.vertices &&
                        c.result.route.goal_arrival() == ref.result.route.goal_arrival();
      identical = identical && same;
      complete = complete && c.ok && ref.ok;
      if (c.ok && ref.ok) {
        cfc_ratio += static_cast<double>(ref.result.stats.cfc) / static_cast<double>(s.cfc) / static_cast<double>(n);
        cmc_ratio += static_cast<double>(ref.result.stats.cmc) / static_cast<double>(s.cmc) / static_cast<double>(n);
      }
      const double tt = c.ok ? c.result.route.travel_time() : std::numeric_limits<double>::infinity();
      const std::size_t wp = c.ok ? c.result.route.size() : 0;
      csv += std::string(to_string(kAllAlgorithms[a])) + "," + std::to_string(i) + "," + format_double(sc.starts[i].x) +
             "," + format_double(sc.starts[i].y) + "," + (c.ok ? "ok" : "no_route") + "," + format_double(tt) + "," +
             std::to_string(wp) + "," + std::to_string(s.cfc) + "," + std::to_string(s.cmc) + "," +
             std::to_string(s.visited_edges) + "," + std::to_string(s.expanded_vertices) + "," +
             std::to_string(s.optdir_cmc) + "," + (same ? "1" : "0") + "\n";
      json row = {{"algorithm", to_string(kAllAlgorithms[a])},
                  {"start", i},
                  {"position", point_json(sc.starts[i])},
                  {"status", c.ok ? "ok" : "no_route"},
                  {"travel_time", c.ok ? json(tt) : json(nullptr)},
                  {"waypoints", wp},
                  {"same_path_as_tve", same},
                  {"stats", stats_json(s)}};
      rows.push_back(row);
    }
    summary[std::string(to_string(kAllAlgorithms[a]))] = {
        {"mean_cfc_ratio_tve_over_this", complete ? json(cfc_ratio) : json(nullptr)},
        {"mean_cmc_ratio_tve_over_this", complete ? json(cmc_ratio) : json(nullptr)},
        {"identical_paths", identical}};
  }
  // CFC(ZA*TVE) <= CFC(ZTVE) <= CFC(ITVE) <= CFC(TVE) per start
  auto cfc = [&](Algorithm a, std::size_t i) { return cells[static_cast<std::size_t>(a) * n + i].result.stats.cfc; };
  for (std::size_t i = 0; i < n; ++i) {
    ordering = ordering && cfc(Algorithm::kZaStarTve, i) <= cfc(Algorithm::kZtve, i) &&
               cfc(Algorithm::kZtve, i) <= cfc(Algorithm::kItve, i) && cfc(Algorithm::kItve, i) <= cfc(Algorithm::kTve, i);
  }
  const json doc = {{"rows", rows}, {"summary", summary}, {"cfc_ordering_holds", ordering}};
  return {{"bench.csv", csv}, {"bench.json", dump(doc)}};
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream os(p, std::ios::binary);
  os << content;
  if (!os) throw std::runtime_error("cannot write " + p.string());
}

}  // namespace

std::string_view to_string(Command c) {
  switch (c) {
    case Command::kPlan: return "plan";
    case Command::kSmooth: return "smooth";
    case Command::kDeparture: return "departure";
    case Command::kOracle: return "oracle";
    case Command::kBench: return "bench";
  }
  return "?";
}

Command parse_command(std::string_view name) {
  for (Command c : {Command::kPlan, Command::kSmooth, Command::kDeparture, Command::kOracle, Command::kBench}) {
    if (to_string(c) == name) return c;
  }
  throw ArgumentError("unknown command '" + std::string(name) + "' (plan|smooth|departure|oracle|bench)");
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<Artifact> run_command(Command cmd, const Scenario& sc, unsigned jobs) {
  const Context ctx = make_context(sc);
  switch (cmd) {
    case Command::kPlan: return cmd_plan(ctx);
    case Command::kSmooth: return cmd_smooth(ctx);
    case Command::kDeparture: return cmd_departure(ctx, jobs);
    case Command::kOracle: return cmd_oracle(ctx);
    case Command::kBench: return cmd_bench(ctx, jobs);
  }
  return {};
}

std::string manifest_json(Command cmd, const RunFlags& flags, const Scenario& sc, const std::vector<Artifact>& artifacts) {
  json files = json::array();
  for (const Artifact& a : artifacts) {
    files.push_back({{"file", a.name}, {"bytes", a.content.size()}, {"fnv1a64", hex64(fnv1a64(a.content))}});
  }
  // jobs is left out: it never changes the artifacts
  const json doc = {{"command", to_string(cmd)},
                    {"flags",
                     {{"algo", flags.algo ? json(to_string(*flags.algo)) : json(nullptr)},
                      {"tol", flags.tol ? json(*flags.tol) : json(nullptr)}}},
                    {"scenario", sc.resolved()},
                    {"artifacts", files}};
  return dump(doc);
}

int run_subcommand(std::string_view cmd_name, const std::filesystem::path& scenario_path, const RunFlags& flags) {
  std::string kind = "internal";
  std::string field;
  std::string message;
  int status = 1;
  try {
    const Command cmd = parse_command(cmd_name);
    Scenario sc = load_scenario(scenario_path);
    if (flags.algo) sc.algorithm = *flags.algo;
    if (flags.tol) {
      sc.step.tol = *flags.tol;
      sc.step.validate();
    }
    const std::vector<Artifact> artifacts = run_command(cmd, sc, flags.jobs);
    std::filesystem::create_directories(flags.out);
    for (const Artifact& a : artifacts) write_file(flags.out / a.name, a.content);
    write_file(flags.out / "manifest.json", manifest_json(cmd, flags, sc, artifacts));
    return 0;
  } catch (const ScenarioError& e) {
    kind = "scenario";
    field = e.field();
    message = e.what();
    status = 2;
  } catch (const ArgumentError& e) {
    kind = "argument";
    message = e.what();
    status = 2;
  } catch (const NoRouteError& e) {
    kind = "no_route";
    message = e.what();
    status = 3;
  } catch (const UnreachableError& e) {
    kind = "unreachable";
    message = e.what();
    status = 3;
  } catch (const DomainError& e) {
    kind = "domain";
    message = e.what();
  } catch (const std::exception& e) {
    message = e.what();
  }
  json err = {{"command", std::string(cmd_name)}, {"error", {{"kind", kind}, {"message", message}}}};
  if (!field.empty()) err["error"]["field"] = field;
  std::cerr << "tvplan: " << message << "\n";
  try {
    std::filesystem::create_directories(flags.out);
    write_file(flags.out / "error.json", dump(err));
  } catch (const std::exception&) {
    // the message already went to stderr
  }
  return status;
}

}  // namespace flowroute::cli
