#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace tlab::explain {

enum class Method { kShapleyExact, kShapleyGrouped, kLime };
std::string_view method_name(Method m);

struct Attribution {
  std::string doc_id;
  std::vector<std::string> tokens;
  std::vector<double> phi;
  double base_value = 0.0;  // value of the empty coalition (intercept for LIME)
  double prediction = 0.0;  // f(x) for the target class
  std::size_t target_class = 0;
  Method method = Method::kShapleyExact;
  std::string mask_policy;
  double r2 = 1.0;  // LIME surrogate fit; 1 for exact methods

  double phi_sum() const;
  // |base + sum(phi) - f(x)|
  double efficiency_residual() const;
};

nlohmann::ordered_json to_json(const Attribution& a);

}  // namespace tlab::explain
