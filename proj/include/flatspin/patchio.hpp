#pragma once

// On-disk patch format (patch.json) and the mesh/point exports derived from it.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "flatspin/config.hpp"
#include "flatspin/cquat.hpp"
#include "flatspin/error.hpp"
#include "flatspin/grid.hpp"

namespace flatspin {

inline constexpr const char* kPatchFormat = "flatspin-patch";
inline constexpr int kPatchVersion = 1;

/// Everything verify and export need. g is present for flat kinds, B for s21.
struct StoredPatch {
  GridDomain dom;
  AnySeed seed;
  Field<MinkVec> F;
  Field<CQuat> g;
  Field<Mat2C> B;
};

inline nlohmann::json patch_to_json(const StoredPatch& p) {
  nlohmann::json j{{"format", kPatchFormat}, {"version", kPatchVersion},
                   {"domain", to_json(p.dom)}, {"seed", to_json(p.seed)}};
  auto& F = j["F"] = nlohmann::json::array();
  for (const MinkVec& v : p.F.values()) F.push_back({v.x1, v.x2, v.x3, v.x4});
  auto cplx = [](nlohmann::json& row, Complex c) {
    row.push_back(c.real());
    row.push_back(c.imag());
  };
  if (!p.g.empty()) {
    auto& g = j["g"] = nlohmann::json::array();
    for (const CQuat& q : p.g.values()) {
      nlohmann::json row = nlohmann::json::array();
      for (Complex c : {q.q1, q.q2, q.q3, q.q4}) cplx(row, c);
      g.push_back(std::move(row));
    }
  }
  if (!p.B.empty()) {
    auto& B = j["B"] = nlohmann::json::array();
    for (const Mat2C& m : p.B.values()) {
      nlohmann::json row = nlohmann::json::array();
      for (Complex c : {m.a, m.b, m.c, m.d}) cplx(row, c);
      B.push_back(std::move(row));
    }
  }
  return j;
}

namespace detail {

template <std::size_t N>
std::array<double, N> number_row(const nlohmann::json& row, const char* key, std::size_t k) {
  if (!row.is_array() || row.size() != N) {
    throw PatchFormatError(std::string(key) + "[" + std::to_string(k) + "]: expected " + std::to_string(N) +
                           " numbers");
  }
  std::array<double, N> out{};
  for (std::size_t m = 0; m < N; ++m) {
    if (!row[m].is_number()) {
      throw PatchFormatError(std::string(key) + "[" + std::to_string(k) + "]: expected numbers");
    }
    out[m] = row[m].get<double>();
  }
  return out;
}

template <std::size_t N, class T, class Make>
Field<T> read_rows(const nlohmann::json& j, const char* key, const GridDomain& dom, Make make) {
  const auto& arr = j.at(key);
  if (!arr.is_array() || arr.size() != dom.size()) {
    throw PatchFormatError(std::string(key) + ": expected " + std::to_string(dom.size()) + " rows");
  }
  Field<T> f(dom);
  for (std::size_t k = 0; k < dom.size(); ++k) f.values()[k] = make(number_row<N>(arr[k], key, k));
  return f;
}

}  // namespace detail

inline StoredPatch patch_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("format", "") != kPatchFormat) {
    throw PatchFormatError("not a flatspin patch");
  }
  if (j.value("version", 0) != kPatchVersion) throw PatchFormatError("unsupported patch version");
  if (!j.contains("domain") || !j.contains("seed") || !j.contains("F")) {
    throw PatchFormatError("patch needs domain, seed and F");
  }
  StoredPatch p;
  try {
    p.dom = domain_from_json(j.at("domain"));
    p.seed = seed_from_json(j.at("seed"));
  } catch (const ConfigError& e) {
    throw PatchFormatError(e.what());
  }
  p.F = detail::read_rows<4, MinkVec>(j, "F", p.dom, [](const auto& r) {
    return MinkVec{r[0], r[1], r[2], r[3]};
  });
  const bool s21 = std::holds_alternative<SeedS21>(p.seed);
  const char* frame = s21 ? "B" : "g";
  if (!j.contains(frame)) throw PatchFormatError(std::string("patch of this kind needs ") + frame);
  if (s21) {
    p.B = detail::read_rows<8, Mat2C>(j, "B", p.dom, [](const auto& r) {
      return Mat2C{{r[0], r[1]}, {r[2], r[3]}, {r[4], r[5]}, {r[6], r[7]}};
    });
  } else {
    p.g = detail::read_rows<8, CQuat>(j, "g", p.dom, [](const auto& r) {
      return CQuat{{r[0], r[1]}, {r[2], r[3]}, {r[4], r[5]}, {r[6], r[7]}};
    });
  }
  return p;
}

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PatchFormatError("cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw PatchFormatError("'" + path.string() + "' is not valid JSON at byte " + std::to_string(e.byte));
  }
}

inline StoredPatch read_patch(const std::filesystem::path& file) {
  return patch_from_json(read_json_file(file));
}

// ---------------------------------------------------------------------------
// exports

/// 17 significant digits; round-trips every double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_csv(std::ostream& os, const Field<MinkVec>& F) {
  os << "x1,x2,x3,x4\n";
  for (const MinkVec& v : F.values()) {
    os << format_double(v.x1) << ',' << format_double(v.x2) << ',' << format_double(v.x3) << ','
       << format_double(v.x4) << '\n';
  }
}

struct Projected {
  std::vector<std::array<double, 3>> xyz;
  /// Coordinate not represented in xyz (x1 for stereo).
  std::vector<double> dropped;
  double pole = 0.0;
};

/// Default stereographic pole: one past the largest x1.
inline double default_pole(const Field<MinkVec>& F) {
  double m = -std::numeric_limits<double>::infinity();
  for (const MinkVec& v : F.values()) m = std::max(m, v.x1);
  return m + 1.0;
}

inline constexpr double kPoleTol = 1e-12;

/// stereo: (x2, x3, x4) / (a - x1), the projection from the pole x1 = a.
inline Projected project(const Field<MinkVec>& F, Projection how, std::optional<double> pole = {}) {
  Projected out;
  out.xyz.reserve(F.size());
  out.dropped.reserve(F.size());
  out.pole = how == Projection::stereo ? pole.value_or(default_pole(F)) : 0.0;
  for (std::size_t k = 0; k < F.size(); ++k) {
    const MinkVec& v = F.values()[k];
    switch (how) {
      case Projection::drop_x1:
        out.xyz.push_back({v.x2, v.x3, v.x4});
        out.dropped.push_back(v.x1);
        break;
      case Projection::drop_x4:
        out.xyz.push_back({v.x1, v.x2, v.x3});
        out.dropped.push_back(v.x4);
        break;
      case Projection::stereo: {
        const double gap = out.pole - v.x1;
        if (!(std::abs(gap) > kPoleTol * std::max(1.0, std::abs(out.pole)))) {
          throw ProjectionError(k, "point lies on the stereographic pole x1 = " + format_double(out.pole));
        }
        const double s = 1.0 / gap;
        out.xyz.push_back({s * v.x2, s * v.x3, s * v.x4});
        out.dropped.push_back(v.x1);
        break;
      }
    }
  }
  return out;
}

/// Grid-quad mesh; each vertex line is followed by a comment holding the dropped coordinate.
inline void write_obj(std::ostream& os, const GridDomain& dom, const Field<MinkVec>& F, Projection how,
                      std::optional<double> pole = {}) {
  const Projected pr = project(F, how, pole);
  os << "# flatspin patch " << dom.nx << "x" << dom.ny << ", projection " << projection_name(how);
  if (how == Projection::stereo) os << ", pole x1 = " << format_double(pr.pole);
  os << '\n';
  const char* name = how == Projection::drop_x4 ? "x4" : "x1";
  for (std::size_t k = 0; k < pr.xyz.size(); ++k) {
    const auto& p = pr.xyz[k];
    os << "v " << format_double(p[0]) << ' ' << format_double(p[1]) << ' ' << format_double(p[2]) << '\n';
    os << "# " << name << ' ' << format_double(pr.dropped[k]) << '\n';
  }
  auto idx = [&dom](std::size_t i, std::size_t j) { return j * dom.nx + i + 1; };
  for (std::size_t j = 0; j + 1 < dom.ny; ++j) {
    for (std::size_t i = 0; i + 1 < dom.nx; ++i) {
      os << "f " << idx(i, j) << ' ' << idx(i + 1, j) << ' ' << idx(i + 1, j + 1) << ' ' << idx(i, j + 1)
         << '\n';
    }
  }
}

}  // namespace flatspin
