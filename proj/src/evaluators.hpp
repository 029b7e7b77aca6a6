#pragma once

#include <json.hpp>

#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace mlab::detail {

struct Check {
  std::string label;
  double lhs = 0.0;
  double rhs = 0.0;
  // NaN: use the record tolerance.
  double tol = std::numeric_limits<double>::quiet_NaN();
};

using Evaluator = std::function<std::vector<Check>(const nlohmann::json& params)>;

const std::map<std::string, Evaluator>& evaluator_registry();

}  // namespace mlab::detail
