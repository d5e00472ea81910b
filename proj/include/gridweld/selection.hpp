#pragma once

#include <algorithm>
#include <vector>

#include <json.hpp>

#include "gridweld/design.hpp"

namespace gridweld {

/// A feasible set of chosen via sites. `chosen` is kept sorted row-major and
/// duplicate-free; `objective` always equals chosen.size().
struct selection {
  std::vector<site> chosen;
  long long objective = 0;
  double wall_time_s = 0.0;
  bool proven_optimal = true;
};

inline selection make_selection(std::vector<site> chosen,
                                double wall_time_s = 0.0,
                                bool proven_optimal = true) {
  std::sort(chosen.begin(), chosen.end());
  chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
  selection s;
  s.objective = static_cast<long long>(chosen.size());
  s.chosen = std::move(chosen);
  s.wall_time_s = wall_time_s;
  s.proven_optimal = proven_optimal;
  return s;
}

inline nlohmann::json selection_to_json(const selection& s) {
  nlohmann::json j;
  j["objective"] = s.objective;
  j["chosen"] = nlohmann::json::array();
  for (site c : s.chosen) j["chosen"].push_back({c.row, c.col});
  j["proven_optimal"] = s.proven_optimal;
  j["wall_time_s"] = s.wall_time_s;
  return j;
}

inline selection selection_from_json(const nlohmann::json& j) {
  using namespace detail;
  check_keys(j, {"objective", "chosen", "proven_optimal", "wall_time_s"},
             "selection");
  const nlohmann::json& chosen = get_key(j, "chosen", "selection");
  if (!chosen.is_array()) throw parse_error("'chosen' must be an array");
  std::vector<site> sites;
  for (const auto& e : chosen) sites.push_back(site_from_json(e, "chosen"));
  selection s = make_selection(std::move(sites));
  const nlohmann::json& objective = get_key(j, "objective", "selection");
  if (!objective.is_number_integer() ||
      objective.get<long long>() != s.objective)
    throw parse_error("'objective' does not match the chosen set size");
  const nlohmann::json& proven = get_key(j, "proven_optimal", "selection");
  if (!proven.is_boolean()) throw parse_error("'proven_optimal' must be a bool");
  s.proven_optimal = proven.get<bool>();
  s.wall_time_s = get_double(j, "wall_time_s", "selection");
  return s;
}

}  // namespace gridweld
