#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include "drsub/bruteforce.hpp"
#include "drsub/cuts.hpp"
#include "drsub/hull.hpp"
#include "drsub/io.hpp"
#include "drsub/linopt.hpp"
#include "drsub/normalize.hpp"
#include "drsub/perm.hpp"
#include "drsub/solver.hpp"

using namespace drsub;
using json = nlohmann::json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kDegraded = 2, kNumerical = 3 };

struct Globals {
  std::uint64_t seed = 1;
  double epsilon = kViolationTol;
  std::string report;
  double root_bound = 1.0;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string vec(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
  return s + "]";
}

std::string ids(const std::vector<Vertex>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

void emit(const Globals& g, const json& j) {
  if (!g.report.empty()) io::write_json(g.report, j);
}

// Loads an instance and replaces infinite bounds, saying so on stderr.
io::InstanceFile load(const std::string& path, const Globals& g) {
  auto file = io::load_instance(path);
  if (file.instance.has_infinite_bounds()) {
    auto fin = finitize_bounds(file.instance, g.root_bound);
    std::cerr << "note: infinite bounds replaced";
    if (!fin.defaulted.empty()) std::cerr << " (roots " << ids(fin.defaulted) << " set to " << num(g.root_bound) << ")";
    std::cerr << "\n";
    file.instance = std::move(fin.instance);
  }
  return file;
}

ValueOracle objective_of(const io::InstanceFile& file) {
  if (!file.objective) throw Error(ErrorCode::InvalidArgument, "instance has no \"objective\"");
  return file.objective->oracle(file.instance.size());
}

void note_inserted(const NormalizedInstance& norm) {
  if (norm.identity()) return;
  std::cout << "inserted vertices:";
  for (auto [psi, rho] : norm.inserted) std::cout << " " << rho << " (child of " << psi << ")";
  std::cout << "\n";
}

json cut_json(const cuts::DRCut& cut) {
  return {{"permutation", cut.perm.order()}, {"coef", cut.coef}, {"prefix_values", cut.prefix_values}};
}

int cmd_validate(const std::string& path, const Globals& g) {
  const auto file = load(path, g);
  const auto& inst = file.instance;
  const auto a1 = check_assumption1(inst), a2 = check_assumption2(inst), p1 = check_property1(inst);
  std::cout << "vertices: " << inst.size() << "\narcs: " << inst.arcs().size()
            << "\nroots: " << ids(inst.roots()) << "\ninteger: " << ids(inst.integer_vertices())
            << "\npsi: " << ids(inst.psi()) << "\n";
  std::cout << "assumption 1: " << (a1.ok ? "holds" : "fails: " + a1.message) << "\n";
  std::cout << "assumption 2: " << (a2.ok ? "holds" : "fails: " + a2.message) << "\n";
  std::cout << "single integer child below psi: "
            << (p1.ok ? "holds" : "fails (normalization will insert vertices)") << "\n";
  emit(g, {{"vertices", inst.size()},
           {"psi", inst.psi()},
           {"assumption1", a1.ok},
           {"assumption2", a2.ok},
           {"property1", p1.ok},
           {"messages", {a1.message, a2.message, p1.message}}});
  if (!a1.ok) return kUsage;
  if (!a2.ok) {
    std::cerr << "warning: only solve --degraded applies to this instance\n";
    return kDegraded;
  }
  return kOk;
}

int cmd_hull(const std::string& what, const std::string& path, const Globals& g) {
  const auto file = load(path, g);
  const auto norm = normalize_property1(file.instance);
  const auto& inst = norm.instance;
  note_inserted(norm);
  if (what == "rows") {
    json rows = json::array();
    for (const auto& r : hull::cz_rows(inst)) {
      std::cout << "[" << to_string(r.tag) << "] " << format_row(r) << "\n";
      rows.push_back({{"tag", std::string(to_string(r.tag))}, {"coef", r.coef}, {"rhs", r.rhs}});
    }
    emit(g, {{"rows", rows}});
    return kOk;
  }
  if (what != "vertices") throw Error(ErrorCode::InvalidArgument, "hull expects 'vertices' or 'rows'");
  std::set<std::string> seen;
  json pts = json::array();
  hull::for_each_extreme_point(inst, [&](const VertexSubset& S, const Point& p) {
    if (!seen.insert(hull::canonical_key(p)).second) return;
    std::cout << S.to_string() << " -> " << vec(p) << "\n";
    pts.push_back({{"S", S.members()}, {"z", p}});
  });
  std::cout << seen.size() << " distinct extreme points\n";
  emit(g, {{"extreme_points", pts}});
  return kOk;
}

int cmd_linopt(const std::string& path, const std::string& objective, const Globals& g) {
  const auto file = load(path, g);
  std::vector<double> a;
  if (!objective.empty()) a = io::load_vector(objective, "a");
  else if (file.objective && file.objective->type == "linear") a = file.objective->linear;
  else throw Error(ErrorCode::InvalidArgument, "linopt needs --objective or a linear objective");
  if (static_cast<int>(a.size()) != file.instance.size())
    throw Error(ErrorCode::InvalidArgument, "objective length differs from the vertex count");

  const auto norm = normalize_property1(file.instance);
  note_inserted(norm);
  a.resize(norm.instance.size(), 0.0);
  const auto sol = linopt::solve_forest(norm.instance, a);
  const auto chk = linopt::verify_certificate(norm.instance, a, sol.z, sol.cert);
  const Point z = map_solution_back(sol.z, norm);
  std::cout << "S: " << sol.S.to_string() << "\nz: " << vec(z) << "\nobjective: " << num(sol.objective) << "\n";
  json cases = json::object();
  for (auto [psi, c] : sol.cases) {
    std::cout << "subtree at " << psi << ": " << linopt::to_string(c) << "\n";
    cases[std::to_string(psi)] = std::string(linopt::to_string(c));
  }
  std::cout << "certificate: " << (chk.ok ? "verified" : "FAILED") << " (dual " << num(chk.dual)
            << ", residual " << num(chk.max_residual) << ")\n";
  emit(g, {{"S", sol.S.members()},
           {"z", z},
           {"objective", sol.objective},
           {"cases", cases},
           {"certificate", {{"p", sol.cert.p}, {"q", sol.cert.q}, {"r", sol.cert.r},
                            {"verified", chk.ok}, {"dual", chk.dual}, {"residual", chk.max_residual}}}});
  return chk.ok ? kOk : kNumerical;
}

int cmd_decompose(const std::string& path, const std::string& point, const Globals& g) {
  const auto file = load(path, g);
  const auto norm = normalize_property1(file.instance);
  note_inserted(norm);
  const Point x = lift_hull_point(io::load_vector(point, "z"), norm);
  const auto dec = perm::decompose(norm.instance, x);
  std::cout << "permutation: " << dec.perm.to_string() << "\nt: " << vec(dec.t) << "\n";
  json terms = json::array();
  for (int k = 0; k <= norm.instance.size(); ++k) {
    if (dec.lambda[k] <= 0.0) continue;
    std::cout << "lambda_" << k << " = " << num(dec.lambda[k]) << "  P = " << vec(dec.points[k]) << "\n";
    terms.push_back({{"k", k}, {"lambda", dec.lambda[k]}, {"point", dec.points[k]}});
  }
  std::cout << "residual: " << num(dec.residual) << "\n";
  emit(g, {{"permutation", dec.perm.order()}, {"t", dec.t}, {"terms", terms}, {"residual", dec.residual}});
  return kOk;
}

int cmd_separate(const std::string& path, const std::string& point, std::optional<double> w,
                 const Globals& g) {
  const auto file = load(path, g);
  const auto f = objective_of(file);
  const auto norm = normalize_property1(file.instance, f);
  note_inserted(norm);
  const auto pj = io::load_json(point);
  if (!w) {
    if (!pj.is_object() || !pj.contains("w"))
      throw Error(ErrorCode::InvalidArgument, "give --w or a \"w\" entry in the point file");
    w = pj.at("w").get<double>() - f.base_value();
  }
  const Point x = lift_hull_point(io::parse_vector(pj, "z"), norm);
  const auto sep = cuts::separate(norm.instance, norm.oracle, x, *w);
  std::cout << "permutation: " << sep.cut.perm.to_string() << "\ncut: " << cuts::format_cut(sep.cut)
            << "\nviolation: " << num(sep.violation) << (sep.violation > g.epsilon ? " (violated)" : "")
            << "\n";
  auto j = cut_json(sep.cut);
  j["violation"] = sep.violation;
  emit(g, j);
  return kOk;
}

int cmd_solve(const std::string& path, long long max_iters, const std::string& seed_point,
              bool degraded, bool check_dr, const Globals& g) {
  const auto file = load(path, g);
  const auto f = objective_of(file);
  solver::Options o;
  o.epsilon = g.epsilon;
  o.max_iterations = max_iters;
  o.seed = seed_point == "upper" ? solver::SeedPoint::Upper : solver::SeedPoint::Zero;
  o.allow_degraded = degraded;
  o.check_dr = check_dr;
  o.dr.seed = g.seed;
  const auto rep = solver::minimize(file.instance, f, o);
  std::cout << "status: " << solver::to_string(rep.status) << "\nz: " << vec(rep.z)
            << "\nvalue: " << num(rep.value) << "\nbound: " << num(rep.bound)
            << "\niterations: " << rep.iterations << "\ncuts: " << rep.cuts << "\n";
  if (rep.status == solver::Status::BoundOnly) {
    std::cout << "relaxed bounds at: " << ids(rep.relaxed) << "\n"
              << (rep.certified ? "incumbent matches the bound" : "gap not closed") << "\n";
  }
  json j{{"status", std::string(solver::to_string(rep.status))},
         {"z", rep.z},
         {"value", rep.value},
         {"bound", rep.bound},
         {"iterations", rep.iterations},
         {"cuts", rep.cuts},
         {"oracle_calls", rep.oracle_calls},
         {"recovery_prefix", rep.recovery_prefix},
         {"recovery_permutation", rep.recovery_perm.order()},
         {"bound_history", rep.bound_history},
         {"inserted_vertices", rep.inserted_vertices},
         {"certified", rep.certified},
         {"wall_seconds", rep.wall_seconds}};
  if (rep.status == solver::Status::BoundOnly) {
    j["relaxed"] = rep.relaxed;
    j["upper_bound"] = rep.upper_bound ? json(*rep.upper_bound) : json(nullptr);
  }
  emit(g, j);
  return rep.status == solver::Status::Optimal ? kOk : kDegraded;
}

int cmd_oracle(const std::string& path, const std::string& mode, double grid_step,
               const std::string& point, std::optional<double> w, const Globals& g) {
  const auto file = load(path, g);
  const auto f = objective_of(file);
  if (mode == "extreme") {
    const auto norm = normalize_property1(file.instance, f);
    const auto best = bruteforce::min_over_extreme_points(norm.instance, norm.oracle);
    const Point z = map_solution_back(best.z, norm);
    const double value = best.value + f.base_value();
    std::cout << "S: " << best.S.to_string() << "\nz: " << vec(z) << "\nvalue: " << num(value) << "\n";
    emit(g, {{"S", best.S.members()}, {"z", z}, {"value", value}});
  } else if (mode == "lattice") {
    const auto best = bruteforce::min_over_lattice(file.instance, f, grid_step);
    const double value = best.value + f.base_value();
    std::cout << "z: " << vec(best.z) << "\nvalue: " << num(value) << "\npoints: " << best.evaluated << "\n";
    emit(g, {{"z", best.z}, {"value", value}, {"points", best.evaluated}});
  } else if (mode == "perms") {
    if (point.empty()) throw Error(ErrorCode::InvalidArgument, "perms mode needs --point");
    const auto norm = normalize_property1(file.instance, f);
    const auto pj = io::load_json(point);
    if (!w) {
      if (!pj.is_object() || !pj.contains("w"))
        throw Error(ErrorCode::InvalidArgument, "give --w or a \"w\" entry in the point file");
      w = pj.at("w").get<double>() - f.base_value();
    }
    const Point x = lift_hull_point(io::parse_vector(pj, "z"), norm);
    const auto best = bruteforce::max_violation_over_permutations(norm.instance, norm.oracle, x, *w);
    std::cout << "permutation: " << best.perm.to_string() << "\nviolation: " << num(best.violation)
              << "\nenumerated: " << best.enumerated << "\n";
    emit(g, {{"permutation", best.perm.order()}, {"violation", best.violation}, {"enumerated", best.enumerated}});
  } else {
    throw Error(ErrorCode::InvalidArgument, "mode must be extreme, lattice or perms");
  }
  return kOk;
}

int cmd_check_dr(const std::string& path, int samples, const Globals& g) {
  const auto file = load(path, g);
  DrCheckOptions o;
  o.samples = samples;
  o.seed = g.seed;
  const auto r = check_dr_submodularity(objective_of(file), file.instance, o);
  std::cout << (r.pass ? "DR-submodular" : "NOT DR-submodular") << " ("
            << (r.exact ? "from coefficients" : std::to_string(r.samples) + " samples")
            << ", worst " << num(r.worst) << ")\n";
  emit(g, {{"pass", r.pass}, {"exact", r.exact}, {"samples", r.samples}, {"worst", r.worst}});
  return r.pass ? kOk : kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimize DR-submodular functions over mixed-integer sets with forest precedences"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Seed for sampled checks");
  app.add_option("--epsilon", g.epsilon, "Cut violation tolerance");
  app.add_option("--report", g.report, "Write a JSON report to this file");
  app.add_option("--root-bound", g.root_bound, "Bound used for roots with an infinite bound");

  std::string instance, point, objective, what, seed_point = "zero", mode = "extreme";
  long long max_iters = 0;
  bool degraded = false, check_dr = false;
  double grid_step = 0.5, w_value = 0.0;
  int samples = 2000;

  auto* validate = app.add_subcommand("validate", "Check an instance and its assumptions");
  validate->add_option("instance", instance)->required();

  auto* hull_cmd = app.add_subcommand("hull", "List extreme points or inequality rows");
  hull_cmd->add_option("what", what, "vertices | rows")->required()->check(CLI::IsMember({"vertices", "rows"}));
  hull_cmd->add_option("instance", instance)->required();

  auto* lin = app.add_subcommand("linopt", "Minimize a linear objective over the hull");
  lin->add_option("instance", instance)->required();
  lin->add_option("--objective", objective, "JSON array or {\"a\": [...]}");

  auto* dec = app.add_subcommand("decompose", "Write a hull point as a convex combination");
  dec->add_option("instance", instance)->required();
  dec->add_option("--point", point, "JSON array or {\"z\": [...]}")->required();

  auto* sep = app.add_subcommand("separate", "Most violated DR cut at (z, w)");
  sep->add_option("instance", instance)->required();
  sep->add_option("--point", point)->required();
  auto* sep_w = sep->add_option("--w", w_value, "Epigraph value (else read from the point file)");

  auto* solve = app.add_subcommand("solve", "Cutting-plane minimization");
  solve->add_option("instance", instance)->required();
  solve->add_option("--max-iters", max_iters, "Iteration cap (0 = automatic)");
  solve->add_option("--seed-point", seed_point)->check(CLI::IsMember({"zero", "upper"}));
  solve->add_flag("--degraded", degraded, "Return a bound when the assumptions fail");
  solve->add_flag("--check-dr", check_dr, "Check DR-submodularity first");
  solve->add_option("--epsilon", g.epsilon, "Cut violation tolerance");
  solve->add_option("--report", g.report, "Write a JSON report to this file");

  auto* orc = app.add_subcommand("oracle", "Brute-force reference answers");
  orc->add_option("instance", instance)->required();
  orc->add_option("--mode", mode)->check(CLI::IsMember({"extreme", "lattice", "perms"}));
  orc->add_option("--grid-step", grid_step, "Step for continuous coordinates in lattice mode");
  orc->add_option("--point", point);
  auto* orc_w = orc->add_option("--w", w_value);

  auto* chk = app.add_subcommand("check-dr", "Test DR-submodularity of the objective");
  chk->add_option("instance", instance)->required();
  chk->add_option("--samples", samples);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) return cmd_validate(instance, g);
    if (*hull_cmd) return cmd_hull(what, instance, g);
    if (*lin) return cmd_linopt(instance, objective, g);
    if (*dec) return cmd_decompose(instance, point, g);
    if (*sep) return cmd_separate(instance, point, *sep_w ? std::optional(w_value) : std::nullopt, g);
    if (*solve) return cmd_solve(instance, max_iters, seed_point, degraded, check_dr, g);
    if (*orc) return cmd_oracle(instance, mode, grid_step, point, *orc_w ? std::optional(w_value) : std::nullopt, g);
    if (*chk) return cmd_check_dr(instance, samples, g);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::NumericalFailure:
      case ErrorCode::IterationLimit:
      case ErrorCode::DecompositionResidual:
        return kNumerical;
      default:
        return kUsage;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
