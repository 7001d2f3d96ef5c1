#pragma once

// Seed data for flat timelike surfaces, the frame fields alpha1, alpha2 derived
// from it, and validation of the hypotheses the construction needs.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <variant>

#include "flatspin/cquat.hpp"
#include "flatspin/error.hpp"
#include "flatspin/grid.hpp"
#include "flatspin/holoexpr.hpp"

namespace flatspin {

using expr::Expression;

/// theta_k = f_k dz with f1^2 - f2^2 != 0; h1, h2 are the normal components of the mean curvature.
struct SeedR31 {
  Expression f1, f2, h1, h2;
};

/// Arc-length form: f1 = cosh(psi), f2 = sinh(psi).
struct SeedArc {
  Expression psi, h1, h2;
};

/// B^{-1} dB = [[0, theta], [omega, 0]] dz.
struct SeedS21 {
  Expression theta, omega;
};

using FlatSeed = std::variant<SeedR31, SeedArc>;

/// Coefficients (f1, f2) of the potential at z.
inline std::pair<Complex, Complex> potential_coeffs(const FlatSeed& seed, Complex z) {
  if (const auto* s = std::get_if<SeedR31>(&seed)) return {expr::eval(s->f1, z), expr::eval(s->f2, z)};
  const Complex psi = expr::eval(std::get<SeedArc>(seed).psi, z);
  return {std::cosh(psi), std::sinh(psi)};
}

/// P(z) = f1 J + f2 iK, so that dg = P g dz.
inline CQuat potential(Complex f1, Complex f2) { return {0.0, 0.0, f1, kI * f2}; }

inline CQuat potential(const FlatSeed& seed, Complex z) {
  const auto [f1, f2] = potential_coeffs(seed, z);
  return potential(f1, f2);
}

inline std::array<double, 2> mean_curvature(const FlatSeed& seed, double x, double y) {
  return std::visit(
      [&](const auto& s) -> std::array<double, 2> {
        return {expr::eval(s.h1, x, y), expr::eval(s.h2, x, y)};
      },
      seed);
}

/// Solution of (alpha1 i + alpha2 I)(f1 J + f2 iK) = h1 J + h2 K:
/// alpha1 = (-i h1 f1 + h2 f2) / D, alpha2 = (h2 f1 - i h1 f2) / D, D = f1^2 - f2^2.
inline std::pair<Complex, Complex> alpha_from(Complex f1, Complex f2, double h1, double h2) {
  const Complex d = f1 * f1 - f2 * f2;
  return {(-kI * h1 * f1 + h2 * f2) / d, (h2 * f1 - kI * h1 * f2) / d};
}

/// Pointwise frame fields; no degeneracy guard (see build_alpha). For arc-length
/// seeds D = 1 and f1, f2 = cosh(psi), sinh(psi).
inline std::pair<Complex, Complex> alpha_at(const FlatSeed& seed, double x, double y) {
  const auto [h1, h2] = mean_curvature(seed, x, y);
  if (const auto* s = std::get_if<SeedArc>(&seed)) {
    const Complex psi = expr::eval(s->psi, Complex{x, y});
    const Complex c = std::cosh(psi);
    const Complex sh = std::sinh(psi);
    return {-kI * h1 * c + h2 * sh, h2 * c - kI * h1 * sh};
  }
  const auto [f1, f2] = potential_coeffs(seed, Complex{x, y});
  return alpha_from(f1, f2, h1, h2);
}

using AlphaEvaluator = std::function<std::pair<Complex, Complex>(double, double)>;

/// alpha1, alpha2 sampled on a grid. A complex value a stands for the real
/// vector field Re(a) d/dx + Im(a) d/dy.
struct AlphaField {
  GridDomain dom;
  Field<Complex> a1, a2;
  /// Exact pointwise evaluator when the field comes from a seed; may be empty.
  AlphaEvaluator eval;
};

inline AlphaField sample_alpha(const GridDomain& dom, AlphaEvaluator fn) {
  AlphaField a{dom, Field<Complex>(dom), Field<Complex>(dom), fn};
  for (std::size_t j = 0; j < dom.ny; ++j) {
    for (std::size_t i = 0; i < dom.nx; ++i) {
      const auto [p, q] = fn(dom.x(i), dom.y(j));
      a.a1(i, j) = p;
      a.a2(i, j) = q;
    }
  }
  return a;
}

inline constexpr double kDegenerateRel = 1e-8;
inline constexpr double kIndependenceRel = 1e-8;

/// Throws DegenerateOsculating at the first point where |f1^2 - f2^2| <= 1e-8 max|f_k|^2.
inline void check_osculating(const SeedR31& s, const GridDomain& dom) {
  Field<Complex> d(dom);
  double fmax = 0.0;
  for (std::size_t j = 0; j < dom.ny; ++j) {
    for (std::size_t i = 0; i < dom.nx; ++i) {
      const Complex z = dom.point(i, j);
      const Complex f1 = expr::eval(s.f1, z);
      const Complex f2 = expr::eval(s.f2, z);
      fmax = std::max({fmax, std::abs(f1), std::abs(f2)});
      d(i, j) = f1 * f1 - f2 * f2;
    }
  }
  const double eps = kDegenerateRel * fmax * fmax;
  for (std::size_t j = 0; j < dom.ny; ++j) {
    for (std::size_t i = 0; i < dom.nx; ++i) {
      if (!(std::abs(d(i, j)) > eps)) throw DegenerateOsculating({i, j});
    }
  }
}

inline AlphaField build_alpha(const FlatSeed& seed, const GridDomain& dom) {
  dom.validate();
  if (const auto* s = std::get_if<SeedR31>(&seed)) check_osculating(*s, dom);
  return sample_alpha(dom, [seed](double x, double y) { return alpha_at(seed, x, y); });
}

/// det [[Re a1, Re a2], [Im a1, Im a2]].
inline double frame_det(Complex a1, Complex a2) {
  return a1.real() * a2.imag() - a2.real() * a1.imag();
}

struct IndependenceReport {
  double min_abs_det = std::numeric_limits<double>::infinity();
  GridIndex worst;
  double threshold = 0.0;
  Field<double> det;
  [[nodiscard]] bool passed() const { return min_abs_det > threshold; }
};

inline IndependenceReport check_independence(const AlphaField& a) {
  IndependenceReport r;
  r.det = Field<double>(a.a1.nx(), a.a1.ny());
  const double amax = std::max(max_magnitude(a.a1), max_magnitude(a.a2));
  r.threshold = kIndependenceRel * amax * amax;
  for (std::size_t j = 0; j < a.a1.ny(); ++j) {
    for (std::size_t i = 0; i < a.a1.nx(); ++i) {
      const double d = frame_det(a.a1(i, j), a.a2(i, j));
      r.det(i, j) = d;
      if (std::abs(d) < r.min_abs_det) {
        r.min_abs_det = std::abs(d);
        r.worst = {i, j};
      }
    }
  }
  return r;
}

inline void require_independent(const AlphaField& a) {
  const IndependenceReport r = check_independence(a);
  if (!r.passed()) throw DependentFrame(r.worst, "alpha1 and alpha2 are not independent");
}

/// Budget constant of the discrete bracket: residual <= C h^2 max|alpha|^2.
inline constexpr double kCommutatorC = 10.0;

struct CommutatorReport {
  double max_residual = 0.0;
  GridIndex worst;
  double budget = 0.0;
  [[nodiscard]] bool passed() const { return max_residual <= budget; }
};

/// (a . grad) b for complex-encoded plane vectors.
template <class T>
T directional(Complex a, const T& fx, const T& fy) {
  return fx * a.real() + fy * a.imag();
}

/// Lie bracket [alpha1, alpha2] by central differences at interior points.
inline CommutatorReport check_commutator(const AlphaField& a) {
  const GridDomain& dom = a.dom;
  CommutatorReport r;
  const double amax = std::max(max_magnitude(a.a1), max_magnitude(a.a2));
  r.budget = kCommutatorC * dom.h() * dom.h() * amax * amax;
  for_interior(dom, [&](std::size_t i, std::size_t j) {
    const Complex p = a.a1(i, j);
    const Complex q = a.a2(i, j);
    const Complex bracket = directional(p, fd::dx(a.a2, dom, i, j), fd::dy(a.a2, dom, i, j)) -
                            directional(q, fd::dx(a.a1, dom, i, j), fd::dy(a.a1, dom, i, j));
    if (std::abs(bracket) > r.max_residual) {
      r.max_residual = std::abs(bracket);
      r.worst = {i, j};
    }
  });
  return r;
}

/// Rows of M^{-1} for M = [[Re a1, Re a2], [Im a1, Im a2]]: w1 = (omega1(dx), omega1(dy)), w2 likewise.
struct DualForms {
  std::array<double, 2> w1{}, w2{};
};

inline DualForms dual_at(Complex a1, Complex a2) {
  const double d = frame_det(a1, a2);
  return {{a2.imag() / d, -a2.real() / d}, {-a1.imag() / d, a1.real() / d}};
}

inline Field<DualForms> dual_forms(const AlphaField& a) {
  Field<DualForms> w(a.a1.nx(), a.a1.ny());
  for (std::size_t j = 0; j < a.a1.ny(); ++j) {
    for (std::size_t i = 0; i < a.a1.nx(); ++i) {
      const Complex p = a.a1(i, j);
      const Complex q = a.a2(i, j);
      const double scale = std::norm(p) + std::norm(q);
      if (!(std::abs(frame_det(p, q)) > kIndependenceRel * scale)) {
        throw DependentFrame({i, j}, "frame matrix is too ill-conditioned to invert");
      }
      w(i, j) = dual_at(p, q);
    }
  }
  return w;
}

/// Residual of (alpha1 i + alpha2 I)(f1 J + f2 iK) = h1 J + h2 K at one point.
inline double frame_relation_residual(Complex a1, Complex a2, Complex f1, Complex f2, double h1,
                                      double h2) {
  const CQuat lhs = CQuat{kI * a1, a2, 0.0, 0.0} * potential(f1, f2);
  return norm(lhs - CQuat{0.0, 0.0, h1, h2});
}

}  // namespace flatspin
