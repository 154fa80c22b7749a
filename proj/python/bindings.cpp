#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "drsub/bruteforce.hpp"
#include "drsub/cuts.hpp"
#include "drsub/hull.hpp"
#include "drsub/io.hpp"
#include "drsub/linopt.hpp"
#include "drsub/normalize.hpp"
#include "drsub/perm.hpp"
#include "drsub/solver.hpp"

namespace py = pybind11;
using namespace drsub;

namespace {

ForestInstance make_instance(int n, const std::vector<std::pair<int, int>>& arcs,
                             const std::vector<double>& upper, const std::vector<int>& integer) {
  std::vector<Arc> a;
  for (auto [from, to] : arcs) a.push_back({from, to});
  return ForestInstance::build(n, std::move(a), upper, std::vector<Vertex>(integer.begin(), integer.end()));
}

ValueOracle quadratic(const std::vector<std::vector<double>>& Q, const std::vector<double>& c) {
  const int n = static_cast<int>(c.size());
  QuadraticSpec q{Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Zero(n)};
  if (static_cast<int>(Q.size()) != n) throw Error(ErrorCode::InvalidArgument, "Q must be n x n");
  for (int r = 0; r < n; ++r) {
    if (static_cast<int>(Q[r].size()) != n) throw Error(ErrorCode::InvalidArgument, "Q must be n x n");
    for (int k = 0; k < n; ++k) q.Q(r, k) = Q[r][k];
    q.c(r) = c[r];
  }
  return ValueOracle::quadratic(std::move(q));
}

ValueOracle callable(py::function f, int n) {
  return ValueOracle(
      [f](std::span<const double> z) { return f(std::vector<double>(z.begin(), z.end())).cast<double>(); }, n);
}

py::dict cut_dict(const cuts::DRCut& cut) {
  py::dict d;
  d["permutation"] = cut.perm.order();
  d["coef"] = cut.coef;
  d["prefix_values"] = cut.prefix_values;
  return d;
}

py::dict report_dict(const solver::Report& r) {
  py::dict d;
  d["status"] = std::string(solver::to_string(r.status));
  d["z"] = r.z;
  d["value"] = r.value;
  d["bound"] = r.bound;
  d["iterations"] = r.iterations;
  d["cuts"] = r.cuts;
  d["oracle_calls"] = r.oracle_calls;
  d["recovery_prefix"] = r.recovery_prefix;
  d["recovery_permutation"] = r.recovery_perm.order();
  d["bound_history"] = r.bound_history;
  d["inserted_vertices"] = r.inserted_vertices;
  d["relaxed"] = r.relaxed;
  d["upper_bound"] = r.upper_bound ? py::object(py::float_(*r.upper_bound)) : py::object(py::none());
  d["certified"] = r.certified;
  d["wall_seconds"] = r.wall_seconds;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "DR-submodular minimization over mixed-integer sets with forest precedences";
  py::register_exception<Error>(m, "DrsubError", PyExc_ValueError);

  py::class_<ForestInstance>(m, "Instance")
      .def(py::init(&make_instance), py::arg("n"), py::arg("arcs"), py::arg("upper"),
           py::arg("integer") = std::vector<int>{})
      .def_property_readonly("n", &ForestInstance::size)
      .def_property_readonly("arcs",
                             [](const ForestInstance& s) {
                               std::vector<std::pair<int, int>> out;
                               for (const auto& a : s.arcs()) out.emplace_back(a.from, a.to);
                               return out;
                             })
      .def_property_readonly("upper", &ForestInstance::upper_point)
      .def_property_readonly("integer", &ForestInstance::integer_vertices)
      .def_property_readonly("roots", &ForestInstance::roots)
      .def_property_readonly("psi", &ForestInstance::psi)
      .def("parent", &ForestInstance::parent)
      .def("descendants", &ForestInstance::descendants)
      .def("assumption1", [](const ForestInstance& s) { return check_assumption1(s).ok; })
      .def("assumption2", [](const ForestInstance& s) { return check_assumption2(s).ok; })
      .def("property1", [](const ForestInstance& s) { return check_property1(s).ok; })
      .def("__repr__", [](const ForestInstance& s) {
        return "<Instance n=" + std::to_string(s.size()) + " arcs=" + std::to_string(s.arcs().size()) + ">";
      });

  py::class_<ValueOracle>(m, "Oracle")
      .def(py::init(&callable), py::arg("f"), py::arg("n"))
      .def_static("quadratic", &quadratic, py::arg("Q"), py::arg("c"), "f(z) = z'Qz + c'z")
      .def_property_readonly("n", &ValueOracle::dimension)
      .def("__call__", [](const ValueOracle& f, const std::vector<double>& z) { return f.raw(z); });

  m.def(
      "load",
      [](const std::string& path) {
        auto file = io::load_instance(path);
        py::object obj = py::none();
        if (file.objective) obj = py::cast(file.objective->oracle(file.instance.size()));
        return py::make_tuple(file.instance, obj);
      },
      py::arg("path"), "Read an instance file; returns (instance, oracle or None).");

  m.def(
      "normalize",
      [](const ForestInstance& inst) {
        auto norm = normalize_property1(inst);
        return py::make_tuple(norm.instance, norm.inserted);
      },
      py::arg("instance"), "Insert vertices so that each psi vertex has one integer child.");

  m.def(
      "extreme_point",
      [](const ForestInstance& inst, const std::vector<int>& S) {
        VertexSubset set(inst.size(), {});
        for (int v : S) {
          if (v < 1 || v > inst.size()) throw Error(ErrorCode::InvalidArgument, "vertex out of range");
          set.insert(v);
        }
        return hull::extreme_point(inst, set);
      },
      py::arg("instance"), py::arg("S"));

  m.def(
      "hull_rows",
      [](const ForestInstance& inst) {
        py::list out;
        for (const auto& r : hull::cz_rows(inst))
          out.append(py::make_tuple(std::string(to_string(r.tag)), r.coef, r.rhs));
        return out;
      },
      py::arg("instance"), "Inequality rows (tag, coef, rhs) with coef'z <= rhs.");

  m.def(
      "linopt",
      [](const ForestInstance& inst, const std::vector<double>& a) {
        const auto sol = linopt::solve_forest(inst, a);
        py::dict d;
        d["S"] = sol.S.members();
        d["z"] = sol.z;
        d["objective"] = sol.objective;
        py::dict cases;
        for (auto [psi, c] : sol.cases) cases[py::int_(psi)] = std::string(linopt::to_string(c));
        d["cases"] = cases;
        return d;
      },
      py::arg("instance"), py::arg("a"), "Minimize a'z over the hull of a normalized instance.");

  m.def(
      "decompose",
      [](const ForestInstance& inst, const std::vector<double>& z) {
        const auto dec = perm::decompose(inst, z);
        py::dict d;
        d["permutation"] = dec.perm.order();
        d["t"] = dec.t;
        d["lambda"] = dec.lambda;
        d["points"] = dec.points;
        d["residual"] = dec.residual;
        return d;
      },
      py::arg("instance"), py::arg("z"));

  m.def(
      "separate",
      [](const ForestInstance& inst, const ValueOracle& f, const std::vector<double>& z, double w) {
        const auto sep = cuts::separate(inst, f, z, w);
        auto d = cut_dict(sep.cut);
        d["violation"] = sep.violation;
        return d;
      },
      py::arg("instance"), py::arg("oracle"), py::arg("z"), py::arg("w"),
      "Most violated cut at (z, w); w is measured relative to f(0).");

  m.def(
      "minimize",
      [](const ForestInstance& inst, const ValueOracle& f, double epsilon, long long max_iterations,
         bool allow_degraded, bool check_dr) {
        solver::Options o;
        o.epsilon = epsilon;
        o.max_iterations = max_iterations;
        o.allow_degraded = allow_degraded;
        o.check_dr = check_dr;
        return report_dict(solver::minimize(inst, f, o));
      },
      py::arg("instance"), py::arg("oracle"), py::arg("epsilon") = kViolationTol,
      py::arg("max_iterations") = 0, py::arg("allow_degraded") = false, py::arg("check_dr") = false);

  m.def(
      "minimize_set_function",
      [](py::function f, int n) {
        const auto r = solver::minimize_set_function(
            [f](const std::vector<int>& S) { return f(S).cast<double>(); }, n);
        return py::make_tuple(r.members, r.value);
      },
      py::arg("f"), py::arg("n"), "Minimize a submodular set function on {1..n}.");

  m.def(
      "min_over_extreme_points",
      [](const ForestInstance& inst, const ValueOracle& f) {
        const auto norm = normalize_property1(inst, f);
        const auto best = bruteforce::min_over_extreme_points(norm.instance, norm.oracle);
        return py::make_tuple(map_solution_back(best.z, norm), best.value + f.base_value());
      },
      py::arg("instance"), py::arg("oracle"), "Exhaustive reference minimum.");

  m.def(
      "check_dr",
      [](const ForestInstance& inst, const ValueOracle& f, int samples, std::uint64_t seed) {
        DrCheckOptions o;
        o.samples = samples;
        o.seed = seed;
        const auto r = check_dr_submodularity(f, inst, o);
        return py::make_tuple(r.pass, r.worst);
      },
      py::arg("instance"), py::arg("oracle"), py::arg("samples") = 2000, py::arg("seed") = 1);
}
