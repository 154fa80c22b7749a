#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "drsub/forest.hpp"
#include "drsub/oracle.hpp"

namespace drsub::io {

using json = nlohmann::json;

struct Objective {
  std::string type;  // "quadratic", "linear" or "table"
  std::optional<QuadraticSpec> quadratic;
  std::optional<TableSpec> table;
  std::vector<double> linear;  // "linear" only

  ValueOracle oracle(int dimension) const;
};

struct InstanceFile {
  std::string name;
  ForestInstance instance;
  std::optional<Objective> objective;
};

InstanceFile parse_instance(const json& j);
InstanceFile load_instance(const std::string& path);

json instance_to_json(const ForestInstance& inst, const Objective* objective = nullptr);
json objective_to_json(const Objective& obj);

// Accepts a bare array or an object holding the array under `key`.
std::vector<double> parse_vector(const json& j, const std::string& key);
std::vector<double> load_vector(const std::string& path, const std::string& key);

json load_json(const std::string& path);

// Pretty-printed JSON with doubles written to 17 significant digits.
std::string dump(const json& j, int indent = 2);
void write_json(const std::string& path, const json& j);

}  // namespace drsub::io
