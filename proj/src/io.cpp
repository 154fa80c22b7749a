#include "drsub/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace drsub::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); }

double parse_bound(const json& v) {
  if (v.is_null()) return kInfinity;
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "Infinity" || s == "+inf") return kInfinity;
    bad("unrecognised bound \"" + s + "\"");
  }
  if (!v.is_number()) bad("bounds must be numbers, \"inf\" or null");
  return v.get<double>();
}

std::vector<double> numbers(const json& j, const std::string& what) {
  if (!j.is_array()) bad(what + " must be an array");
  std::vector<double> out;
  for (const auto& x : j) {
    if (!x.is_number()) bad(what + " must contain numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

Objective parse_objective(const json& j, int n) {
  if (!j.is_object() || !j.contains("type")) bad("objective needs a \"type\"");
  Objective obj;
  obj.type = j.at("type").get<std::string>();
  if (obj.type == "linear") {
    obj.linear = numbers(j.at("a"), "objective.a");
    if (static_cast<int>(obj.linear.size()) != n) bad("objective.a has the wrong length");
  } else if (obj.type == "quadratic") {
    QuadraticSpec q{Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Zero(n)};
    if (j.contains("Q")) {
      const auto& Q = j.at("Q");
      if (!Q.is_array() || static_cast<int>(Q.size()) != n) bad("objective.Q must be n x n");
      for (int r = 0; r < n; ++r) {
        const auto row = numbers(Q[r], "objective.Q row");
        if (static_cast<int>(row.size()) != n) bad("objective.Q must be n x n");
        for (int c = 0; c < n; ++c) q.Q(r, c) = row[c];
      }
      if ((q.Q - q.Q.transpose()).cwiseAbs().maxCoeff() > 1e-12) bad("objective.Q must be symmetric");
    }
    if (j.contains("c")) {
      const auto c = numbers(j.at("c"), "objective.c");
      if (static_cast<int>(c.size()) != n) bad("objective.c has the wrong length");
      for (int i = 0; i < n; ++i) q.c(i) = c[i];
    }
    obj.quadratic = std::move(q);
  } else if (obj.type == "table") {
    TableSpec t;
    for (const auto& e : j.at("values")) {
      const auto z = numbers(e.at("z"), "table point");
      if (static_cast<int>(z.size()) != n) bad("table point has the wrong length");
      std::vector<long long> key;
      for (double x : z) {
        if (!is_integral(x)) bad("table points must be integral");
        key.push_back(std::llround(x));
      }
      t.values[key] = e.at("f").get<double>();
    }
    obj.table = std::move(t);
  } else {
    bad("unknown objective type \"" + obj.type + "\"");
  }
  return obj;
}

void write_number(std::ostream& os, double x) {
  if (std::isinf(x)) {
    os << (x > 0 ? "\"inf\"" : "\"-inf\"");
    return;
  }
  if (std::isnan(x)) {
    os << "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  os << buf;
}

bool scalar_array(const json& j) {
  for (const auto& x : j)
    if (x.is_structured()) return false;
  return true;
}

void write(std::ostream& os, const json& j, int indent, int level) {
  const std::string pad(indent * (level + 1), ' '), close(indent * level, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad << json(it.key()).dump() << ": ";
        write(os, it.value(), indent, level + 1);
      }
      os << "\n" << close << "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Rows of numbers stay on one line.
      if (scalar_array(j)) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          write(os, j[i], indent, level + 1);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        write(os, j[i], indent, level + 1);
      }
      os << "\n" << close << "]";
      return;
    }
    case json::value_t::number_float:
      write_number(os, j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

}  // namespace

ValueOracle Objective::oracle(int dimension) const {
  if (quadratic) return ValueOracle::quadratic(*quadratic);
  if (table) return ValueOracle::table(*table, dimension);
  QuadraticSpec q{Eigen::MatrixXd::Zero(dimension, dimension), Eigen::VectorXd::Zero(dimension)};
  for (int i = 0; i < dimension; ++i) q.c(i) = linear.at(i);
  return ValueOracle::quadratic(std::move(q));
}

InstanceFile parse_instance(const json& j) {
  if (!j.is_object()) bad("instance must be a JSON object");
  if (!j.contains("vertices") || !j.at("vertices").is_number_integer())
    bad("instance needs an integer \"vertices\"");
  const int n = j.at("vertices").get<int>();
  if (n < 1) bad("instance needs at least one vertex");

  std::vector<Arc> arcs;
  if (j.contains("arcs")) {
    for (const auto& a : j.at("arcs")) {
      if (!a.is_array() || a.size() != 2 || !a[0].is_number_integer() || !a[1].is_number_integer())
        bad("arcs must be [from, to] pairs of vertex ids");
      arcs.push_back({a[0].get<int>(), a[1].get<int>()});
    }
  }
  if (!j.contains("upper") || !j.at("upper").is_array()) bad("instance needs an \"upper\" array");
  std::vector<double> upper;
  for (const auto& v : j.at("upper")) upper.push_back(parse_bound(v));
  if (static_cast<int>(upper.size()) != n) bad("\"upper\" must have one entry per vertex");
  std::vector<Vertex> ints;
  if (j.contains("integer"))
    for (const auto& v : j.at("integer")) {
      if (!v.is_number_integer()) bad("\"integer\" must list vertex ids");
      ints.push_back(v.get<int>());
    }

  InstanceFile out{j.value("name", std::string{}),
                   ForestInstance::build(n, std::move(arcs), std::move(upper), std::move(ints)),
                   std::nullopt};
  if (j.contains("objective") && !j.at("objective").is_null())
    out.objective = parse_objective(j.at("objective"), n);
  return out;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    bad(path + ": " + e.what());
  }
}

InstanceFile load_instance(const std::string& path) { return parse_instance(load_json(path)); }

json objective_to_json(const Objective& obj) {
  json j{{"type", obj.type}};
  if (obj.quadratic) {
    const auto& q = *obj.quadratic;
    json Q = json::array();
    for (int r = 0; r < q.Q.rows(); ++r) {
      json row = json::array();
      for (int c = 0; c < q.Q.cols(); ++c) row.push_back(q.Q(r, c));
      Q.push_back(row);
    }
    j["Q"] = Q;
    j["c"] = std::vector<double>(q.c.data(), q.c.data() + q.c.size());
  } else if (obj.table) {
    json vals = json::array();
    for (const auto& [z, f] : obj.table->values) vals.push_back({{"z", z}, {"f", f}});
    j["values"] = vals;
  } else {
    j["a"] = obj.linear;
  }
  return j;
}

json instance_to_json(const ForestInstance& inst, const Objective* objective) {
  json arcs = json::array();
  for (const auto& a : inst.arcs()) arcs.push_back({a.from, a.to});
  json upper = json::array();
  for (Vertex v = 1; v <= inst.size(); ++v) {
    if (std::isinf(inst.upper(v))) upper.push_back("inf");
    else upper.push_back(inst.upper(v));
  }
  json j{{"vertices", inst.size()},
         {"arcs", arcs},
         {"upper", upper},
         {"integer", inst.integer_vertices()}};
  if (objective) j["objective"] = objective_to_json(*objective);
  return j;
}

std::vector<double> parse_vector(const json& j, const std::string& key) {
  if (j.is_array()) return numbers(j, key);
  if (j.is_object() && j.contains(key)) return numbers(j.at(key), key);
  bad("expected an array or an object with \"" + key + "\"");
}

std::vector<double> load_vector(const std::string& path, const std::string& key) {
  return parse_vector(load_json(path), key);
}

std::string dump(const json& j, int indent) {
  std::ostringstream os;
  write(os, j, indent, 0);
  return os.str();
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) bad("cannot write " + path);
  out << dump(j) << "\n";
}

}  // namespace drsub::io
