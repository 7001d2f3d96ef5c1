#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace flatspin {

/// Minimum empirical order between grids whose spacing differs by 2.
inline constexpr double kMinOrder = 1.8;

/// One residual against its budget. A check whose residual is at rounding
/// level (<= floor) counts as converged regardless of the measured order.
struct Check {
  std::string name;
  double residual = 0.0;
  double budget = 0.0;
  double floor = 0.0;
  bool passed = false;
  /// Not part of the pass verdict; reported for reference only.
  bool informational = false;
  std::optional<double> order;
  std::string note;
};

inline Check make_check(std::string name, double residual, double budget, double floor = 0.0) {
  Check c{std::move(name), residual, budget, floor, false, false, std::nullopt, {}};
  c.passed = std::isfinite(residual) && residual <= budget;
  return c;
}

inline double convergence_order(double coarse, double fine, double ratio = 2.0) {
  if (!(coarse > 0.0) || !(fine > 0.0)) return std::numeric_limits<double>::infinity();
  return std::log(coarse / fine) / std::log(ratio);
}

inline bool converged(const Check& fine, double order) {
  return order >= kMinOrder || fine.residual <= fine.floor;
}

/// Records orders on `fine` (matched by name) and fails checks that do not converge.
inline void attach_orders(std::vector<Check>& fine, const std::vector<Check>& coarse,
                          double ratio = 2.0) {
  for (Check& f : fine) {
    const auto it = std::find_if(coarse.begin(), coarse.end(),
                                 [&](const Check& c) { return c.name == f.name; });
    if (it == coarse.end()) continue;
    f.order = convergence_order(it->residual, f.residual, ratio);
    if (!converged(f, *f.order)) {
      f.passed = false;
      f.note += (f.note.empty() ? "" : "; ") + std::string("order below 1.8");
    }
  }
}

inline bool all_passed(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.informational || c.passed; });
}

inline const Check* find_check(const std::vector<Check>& checks, const std::string& name) {
  for (const Check& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

inline nlohmann::json to_json(const Check& c) {
  nlohmann::json j{{"name", c.name},           {"residual", c.residual}, {"budget", c.budget},
                   {"floor", c.floor},         {"passed", c.passed},
                   {"informational", c.informational}};
  if (c.order) j["order"] = std::isfinite(*c.order) ? nlohmann::json(*c.order) : nlohmann::json("inf");
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

inline nlohmann::json to_json(const std::vector<Check>& checks) {
  nlohmann::json j = nlohmann::json::array();
  for (const Check& c : checks) j.push_back(to_json(c));
  return j;
}

}  // namespace flatspin
