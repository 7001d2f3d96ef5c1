#pragma once

// JSON run configuration: domain, seed expressions, refinement and output options.

#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "flatspin/error.hpp"
#include "flatspin/grid.hpp"
#include "flatspin/holoexpr.hpp"
#include "flatspin/seeddomain.hpp"

namespace flatspin {

enum class Projection { drop_x1, drop_x4, stereo };

inline std::optional<Projection> projection_from(const std::string& s) {
  if (s == "drop-x1") return Projection::drop_x1;
  if (s == "drop-x4") return Projection::drop_x4;
  if (s == "stereo") return Projection::stereo;
  return std::nullopt;
}

inline const char* projection_name(Projection p) {
  switch (p) {
    case Projection::drop_x1: return "drop-x1";
    case Projection::drop_x4: return "drop-x4";
    case Projection::stereo: return "stereo";
  }
  return "";
}

using AnySeed = std::variant<SeedR31, SeedArc, SeedS21>;

struct RunConfig {
  GridDomain dom;
  AnySeed seed;
  /// Oracle run on a grid with (n - 1) * refine + 1 samples; 1 disables it.
  std::size_t refine = 1;
  /// Extra files next to patch.json: any of "csv", "obj".
  std::vector<std::string> formats{"csv"};
  Projection projection = Projection::drop_x1;
  std::optional<double> pole;
};

inline const char* seed_kind(const AnySeed& s) {
  switch (s.index()) {
    case 0: return "r31";
    case 1: return "arc";
    default: return "s21";
  }
}

namespace detail {

inline void reject_unknown(const nlohmann::json& obj, const std::string& where,
                           std::initializer_list<const char*> allowed) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!ok.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

inline const nlohmann::json& member(const nlohmann::json& obj, const std::string& where,
                                    const char* key) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
  return obj.at(key);
}

inline double number(const nlohmann::json& obj, const std::string& where, const char* key) {
  const auto& v = member(obj, where, key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(where + "." + key + ": must be finite");
  return d;
}

inline std::size_t count(const nlohmann::json& obj, const std::string& where, const char* key) {
  const auto& v = member(obj, where, key);
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw ConfigError(where + "." + key + ": expected a positive integer");
  }
  return v.get<std::size_t>();
}

inline expr::Expression expression(const nlohmann::json& obj, const char* key, expr::Mode mode) {
  const auto& v = member(obj, "seed", key);
  if (!v.is_string()) throw ConfigError(std::string("seed.") + key + ": expected a string");
  try {
    return expr::parse(v.get<std::string>(), mode);
  } catch (const Error& e) {
    throw ConfigError(std::string("seed.") + key + ": " + e.what());
  }
}

}  // namespace detail

inline GridDomain domain_from_json(const nlohmann::json& d) {
  if (!d.is_object()) throw ConfigError("domain: expected an object");
  detail::reject_unknown(d, "domain", {"x0", "x1", "y0", "y1", "nx", "ny"});
  GridDomain dom{detail::number(d, "domain", "x0"), detail::number(d, "domain", "x1"),
                 detail::number(d, "domain", "y0"), detail::number(d, "domain", "y1"),
                 detail::count(d, "domain", "nx"), detail::count(d, "domain", "ny")};
  try {
    dom.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("domain: ") + e.what());
  }
  return dom;
}

inline nlohmann::json to_json(const GridDomain& d) {
  return {{"x0", d.x0}, {"x1", d.x1}, {"y0", d.y0}, {"y1", d.y1}, {"nx", d.nx}, {"ny", d.ny}};
}

inline AnySeed seed_from_json(const nlohmann::json& s) {
  using expr::Mode;
  if (!s.is_object()) throw ConfigError("seed: expected an object");
  const auto& k = detail::member(s, "seed", "kind");
  const std::string kind = k.is_string() ? k.get<std::string>() : "";
  if (kind == "r31") {
    detail::reject_unknown(s, "seed", {"kind", "f1", "f2", "h1", "h2"});
    return SeedR31{detail::expression(s, "f1", Mode::analytic), detail::expression(s, "f2", Mode::analytic),
                   detail::expression(s, "h1", Mode::real_smooth),
                   detail::expression(s, "h2", Mode::real_smooth)};
  }
  if (kind == "arc") {
    detail::reject_unknown(s, "seed", {"kind", "psi", "h1", "h2"});
    return SeedArc{detail::expression(s, "psi", Mode::analytic),
                   detail::expression(s, "h1", Mode::real_smooth),
                   detail::expression(s, "h2", Mode::real_smooth)};
  }
  if (kind == "s21") {
    detail::reject_unknown(s, "seed", {"kind", "theta", "omega"});
    return SeedS21{detail::expression(s, "theta", Mode::analytic),
                   detail::expression(s, "omega", Mode::analytic)};
  }
  throw ConfigError("seed.kind: expected \"r31\", \"arc\" or \"s21\"");
}

inline nlohmann::json to_json(const AnySeed& seed) {
  nlohmann::json j{{"kind", seed_kind(seed)}};
  if (const auto* s = std::get_if<SeedR31>(&seed)) {
    j["f1"] = s->f1.source;
    j["f2"] = s->f2.source;
    j["h1"] = s->h1.source;
    j["h2"] = s->h2.source;
  } else if (const auto* a = std::get_if<SeedArc>(&seed)) {
    j["psi"] = a->psi.source;
    j["h1"] = a->h1.source;
    j["h2"] = a->h2.source;
  } else {
    const auto& d = std::get<SeedS21>(seed);
    j["theta"] = d.theta.source;
    j["omega"] = d.omega.source;
  }
  return j;
}

inline RunConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("top level: expected an object");
  detail::reject_unknown(j, "top level", {"domain", "seed", "integrator", "output"});
  RunConfig c;
  c.dom = domain_from_json(detail::member(j, "top level", "domain"));
  c.seed = seed_from_json(detail::member(j, "top level", "seed"));
  if (j.contains("integrator")) {
    const auto& in = j.at("integrator");
    if (!in.is_object()) throw ConfigError("integrator: expected an object");
    detail::reject_unknown(in, "integrator", {"refine"});
    if (in.contains("refine")) c.refine = detail::count(in, "integrator", "refine");
  }
  if (j.contains("output")) {
    const auto& out = j.at("output");
    if (!out.is_object()) throw ConfigError("output: expected an object");
    detail::reject_unknown(out, "output", {"formats", "projection", "pole"});
    if (out.contains("formats")) {
      const auto& f = out.at("formats");
      if (!f.is_array()) throw ConfigError("output.formats: expected an array");
      c.formats.clear();
      for (const auto& v : f) {
        if (!v.is_string() || (v != "csv" && v != "obj")) {
          throw ConfigError("output.formats: entries must be \"csv\" or \"obj\"");
        }
        c.formats.push_back(v.get<std::string>());
      }
    }
    if (out.contains("projection")) {
      const auto& p = out.at("projection");
      const auto proj = p.is_string() ? projection_from(p.get<std::string>()) : std::nullopt;
      if (!proj) throw ConfigError("output.projection: expected drop-x1, drop-x4 or stereo");
      c.projection = *proj;
    }
    if (out.contains("pole") && !out.at("pole").is_null()) c.pole = detail::number(out, "output", "pole");
  }
  return c;
}

/// Reads a config file; JSON syntax errors carry their byte offset.
inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("'" + path + "' is not valid JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace flatspin
