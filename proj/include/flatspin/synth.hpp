#pragma once

// Holomorphic spin frame g with dg g^{-1} = P dz, P = f1 J + f2 iK, and the
// flat timelike immersion F obtained by integrating the closed 1-form
// xi = conj_bar(g) (omega1 i + omega2 I) conj_hat(g).

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <utility>

#include "flatspin/cquat.hpp"
#include "flatspin/error.hpp"
#include "flatspin/grid.hpp"
#include "flatspin/holoexpr.hpp"
#include "flatspin/seeddomain.hpp"

namespace flatspin {

/// Path used to reach each grid point from the origin corner (x0, y0).
enum class Sweep {
  rows_first,     // bottom row left to right, then every column upwards
  columns_first,  // left column upwards, then every row rightwards
};

/// One classical RK4 step of dy/dz = rhs(z, y) over the complex increment dz.
template <class T, class Rhs>
T rk4_step(Rhs& rhs, Complex z, const T& y, Complex dz) {
  const Complex half = 0.5 * dz;
  const T k1 = rhs(z, y);
  const T k2 = rhs(z + half, y + k1 * half);
  const T k3 = rhs(z + half, y + k2 * half);
  const T k4 = rhs(z + dz, y + k3 * dz);
  return y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dz / 6.0);
}

/// Integrates a holomorphic ODE over the grid along straight grid lines.
/// renorm(value, index) is applied after every step.
template <class T, class Rhs, class Renorm>
Field<T> sweep_integrate(const GridDomain& dom, const T& y0, Rhs&& rhs, Renorm&& renorm,
                         Sweep order) {
  Field<T> out(dom);
  out(0, 0) = y0;
  const Complex sx{dom.hx(), 0.0};
  const Complex sy{0.0, dom.hy()};
  auto step = [&](std::size_t i0, std::size_t j0, std::size_t i1, std::size_t j1, Complex dz) {
    T v = rk4_step(rhs, dom.point(i0, j0), out(i0, j0), dz);
    renorm(v, GridIndex{i1, j1});
    out(i1, j1) = v;
  };
  if (order == Sweep::rows_first) {
    for (std::size_t i = 1; i < dom.nx; ++i) step(i - 1, 0, i, 0, sx);
    for (std::size_t i = 0; i < dom.nx; ++i) {
      for (std::size_t j = 1; j < dom.ny; ++j) step(i, j - 1, i, j, sy);
    }
  } else {
    for (std::size_t j = 1; j < dom.ny; ++j) step(0, j - 1, 0, j, sy);
    for (std::size_t j = 0; j < dom.ny; ++j) {
      for (std::size_t i = 1; i < dom.nx; ++i) step(i - 1, j, i, j, sx);
    }
  }
  return out;
}

using Potential = std::function<CQuat(Complex)>;

inline Potential seed_potential(const FlatSeed& seed) {
  return [seed](Complex z) { return potential(seed, z); };
}

struct SpinFrameField {
  GridDomain dom;
  Field<CQuat> g;
  Potential P;
  Sweep order = Sweep::rows_first;
  /// Largest |H(g,g) - 1| seen before a renormalization.
  double max_drift = 0.0;
  /// Largest |H(g,g) - 1| after renormalization.
  double max_spin_defect = 0.0;
};

inline constexpr double kRenormFloor = 0.5;

inline SpinFrameField integrate_spin_frame(Potential P, const GridDomain& dom,
                                           const SpinElem& g0 = SpinElem::identity(),
                                           Sweep order = Sweep::rows_first) {
  dom.validate();
  SpinFrameField out{dom, {}, P, order, 0.0, 0.0};
  auto rhs = [&P](Complex z, const CQuat& g) { return P(z) * g; };
  auto renorm = [&out](CQuat& g, GridIndex at) {
    const Complex s = bilinear_h(g, g);
    if (!(std::abs(s) >= kRenormFloor)) throw RenormalizationFailure(at, "|H(g,g)| fell below 0.5");
    out.max_drift = std::max(out.max_drift, std::abs(s - 1.0));
    // s stays near 1, so the principal root is the branch continuous with the previous step.
    g = g / std::sqrt(s);
  };
  out.g = sweep_integrate(dom, g0.value(), rhs, renorm, order);
  for (const CQuat& g : out.g.values()) {
    out.max_spin_defect = std::max(out.max_spin_defect, std::abs(bilinear_h(g, g) - 1.0));
  }
  return out;
}

inline SpinFrameField integrate_spin_frame(const FlatSeed& seed, const GridDomain& dom,
                                           const SpinElem& g0 = SpinElem::identity(),
                                           Sweep order = Sweep::rows_first) {
  return integrate_spin_frame(seed_potential(seed), dom, g0, order);
}

// ---------------------------------------------------------------------------
// Structure equation d eta'(X, Y) - [eta'(X), eta'(Y)] = 0 with eta' = dg g^{-1}.

struct StructureReport {
  double max_residual = 0.0;
  double max_d_eta = 0.0;
  double max_bracket = 0.0;
  GridIndex worst;
};

/// eta'(d/dx) = ex and eta'(d/dy) = i ex on the grid; both terms by central differences.
inline StructureReport structure_residual_of(const Field<CQuat>& ex, const GridDomain& dom) {
  Field<CQuat> ey(dom);
  for (std::size_t k = 0; k < ex.size(); ++k) ey.values()[k] = kI * ex.values()[k];
  StructureReport r;
  for_interior(dom, [&](std::size_t i, std::size_t j) {
    const CQuat d_eta = fd::dx(ey, dom, i, j) - fd::dy(ex, dom, i, j);
    const CQuat bracket = ex(i, j) * ey(i, j) - ey(i, j) * ex(i, j);
    const double res = norm(d_eta - bracket);
    r.max_d_eta = std::max(r.max_d_eta, norm(d_eta));
    r.max_bracket = std::max(r.max_bracket, norm(bracket));
    if (res > r.max_residual) {
      r.max_residual = res;
      r.worst = {i, j};
    }
  });
  return r;
}

/// Same with eta'(d/dx) given pointwise as eta_x(x, y); need not be holomorphic.
template <class EtaX>
StructureReport structure_residual_fn(EtaX&& eta_x, const GridDomain& dom) {
  return structure_residual_of(
      sample(dom, [&](std::size_t i, std::size_t j) { return CQuat(eta_x(dom.x(i), dom.y(j))); }),
      dom);
}

inline StructureReport structure_residual(const FlatSeed& seed, const GridDomain& dom) {
  return structure_residual_fn(
      [&seed](double x, double y) { return potential(seed, Complex{x, y}); }, dom);
}

// ---------------------------------------------------------------------------
// The immersion.

/// Mean curvature coefficients (h1, h2) and potential coefficients (f1, f2) sampled on the grid.
struct SeedSamples {
  Field<std::array<Complex, 2>> f;
  Field<std::array<double, 2>> h;
};

inline SeedSamples sample_seed(const FlatSeed& seed, const GridDomain& dom) {
  SeedSamples s{Field<std::array<Complex, 2>>(dom), Field<std::array<double, 2>>(dom)};
  for (std::size_t j = 0; j < dom.ny; ++j) {
    for (std::size_t i = 0; i < dom.nx; ++i) {
      const auto [f1, f2] = potential_coeffs(seed, dom.point(i, j));
      s.f(i, j) = {f1, f2};
      s.h(i, j) = mean_curvature(seed, dom.x(i), dom.y(j));
    }
  }
  return s;
}

struct ImmersionPatch {
  GridDomain dom;
  Field<MinkVec> F;
  /// Spin frame; empty for patches that did not come from the flat pipeline.
  Field<CQuat> g;
  Field<Complex> a1, a2;
  /// xi(alpha1), xi(alpha2), xi(e3) = g^{-1} J g^, xi(e4) = g^{-1} K g^.
  Field<MinkVec> u1, u2, u3, u4;
  SeedSamples seed;
  /// Per-face |loop integral of xi|, indexed by the lower-left corner.
  Field<double> loop;
  double loop_max = 0.0;
  double loop_budget = 0.0;
  double reality_defect = 0.0;

  [[nodiscard]] bool has_frames() const { return !u1.empty() && !u4.empty(); }
  [[nodiscard]] bool has_alpha() const { return !a1.empty(); }
};

/// Loop budget: C h^2 max|xi|.
inline constexpr double kLoopC = 0.1;

/// xi(d/dx) and xi(d/dy) from the frame vectors and the dual forms.
inline std::pair<MinkVec, MinkVec> xi_at(const MinkVec& u1, const MinkVec& u2, const DualForms& w) {
  return {u1 * w.w1[0] + u2 * w.w2[0], u1 * w.w1[1] + u2 * w.w2[1]};
}

/// Trapezoid loop integral of xi around every grid face.
inline Field<double> loop_residuals(const Field<MinkVec>& xx, const Field<MinkVec>& xy,
                                    const GridDomain& dom) {
  Field<double> loop(dom.nx - 1, dom.ny - 1);
  const double hx = dom.hx();
  const double hy = dom.hy();
  for (std::size_t j = 0; j + 1 < dom.ny; ++j) {
    for (std::size_t i = 0; i + 1 < dom.nx; ++i) {
      const MinkVec bottom = (xx(i, j) + xx(i + 1, j)) * (0.5 * hx);
      const MinkVec right = (xy(i + 1, j) + xy(i + 1, j + 1)) * (0.5 * hy);
      const MinkVec top = (xx(i, j + 1) + xx(i + 1, j + 1)) * (0.5 * hx);
      const MinkVec left = (xy(i, j) + xy(i, j + 1)) * (0.5 * hy);
      loop(i, j) = norm(bottom + right - top - left);
    }
  }
  return loop;
}

namespace detail {

inline constexpr double kAlphaStep = 1e-5;

/// d/dt of the dual matrix W = M^{-1} along a coordinate direction: -W (dM) W.
inline DualForms dual_derivative(const DualForms& w, Complex da1, Complex da2) {
  const double m[2][2] = {{da1.real(), da2.real()}, {da1.imag(), da2.imag()}};
  const double wm[2][2] = {{w.w1[0], w.w1[1]}, {w.w2[0], w.w2[1]}};
  double t[2][2]{};
  double r[2][2]{};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int k = 0; k < 2; ++k) t[a][b] += wm[a][k] * m[k][b];
    }
  }
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int k = 0; k < 2; ++k) r[a][b] -= t[a][k] * wm[k][b];
    }
  }
  return {{r[0][0], r[0][1]}, {r[1][0], r[1][1]}};
}

}  // namespace detail

/// g^{-1} e g^ for e = i1, I, J, K, i.e. xi(alpha1), xi(alpha2), xi(e3), xi(e4).
inline std::array<CQuat, 4> frame_quats(const CQuat& g) {
  const CQuat gb = conj_bar(g);
  const CQuat gh = conj_hat(g);
  return {gb * (CQuat::one() * kI) * gh, gb * CQuat::unit_i() * gh, gb * CQuat::unit_j() * gh,
          gb * CQuat::unit_k() * gh};
}

/// Recomputes u1..u4 of `p` from a stored spinor field; returns the largest reality defect.
inline double attach_frames(ImmersionPatch& p, const Field<CQuat>& g) {
  p.g = g;
  p.u1 = Field<MinkVec>(p.dom);
  p.u2 = Field<MinkVec>(p.dom);
  p.u3 = Field<MinkVec>(p.dom);
  p.u4 = Field<MinkVec>(p.dom);
  double defect = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto e = frame_quats(g.values()[k]);
    Field<MinkVec>* u[4] = {&p.u1, &p.u2, &p.u3, &p.u4};
    for (int m = 0; m < 4; ++m) {
      defect = std::max(defect, reality_defect(e[m]));
      u[m]->values()[k] = extract_minkowski(e[m]);
    }
  }
  return defect;
}

/// F = integral of xi from the origin corner, bottom row then columns. Each
/// edge uses the trapezoid rule with endpoint-derivative correction when the
/// frame potential and an exact alpha evaluator are available.
inline ImmersionPatch integrate_immersion(const SpinFrameField& sf, const AlphaField& a) {
  const GridDomain& dom = sf.dom;
  const Field<DualForms> w = dual_forms(a);
  ImmersionPatch p;
  p.dom = dom;
  p.g = sf.g;
  p.a1 = a.a1;
  p.a2 = a.a2;
  p.u1 = Field<MinkVec>(dom);
  p.u2 = Field<MinkVec>(dom);
  p.u3 = Field<MinkVec>(dom);
  p.u4 = Field<MinkVec>(dom);
  Field<MinkVec> xx(dom), xy(dom), dxx(dom), dyy(dom);
  const bool corrected = static_cast<bool>(sf.P) && static_cast<bool>(a.eval);
  const CQuat ui = CQuat::one() * kI;
  double defect = 0.0;
  auto real_part = [&defect](const CQuat& q) {
    defect = std::max(defect, reality_defect(q));
    return extract_minkowski(q);
  };
  double ximax = 0.0;
  for (std::size_t j = 0; j < dom.ny; ++j) {
    for (std::size_t i = 0; i < dom.nx; ++i) {
      const CQuat& g = sf.g(i, j);
      const CQuat gb = conj_bar(g);
      const CQuat gh = conj_hat(g);
      const auto e = frame_quats(g);
      p.u1(i, j) = real_part(e[0]);
      p.u2(i, j) = real_part(e[1]);
      p.u3(i, j) = real_part(e[2]);
      p.u4(i, j) = real_part(e[3]);
      const DualForms& wd = w(i, j);
      std::tie(xx(i, j), xy(i, j)) = xi_at(p.u1(i, j), p.u2(i, j), wd);
      ximax = std::max({ximax, norm(xx(i, j)), norm(xy(i, j))});
      if (!corrected) continue;
      // d/dx g = P g and d/dy g = i P g.
      const double x = dom.x(i);
      const double y = dom.y(j);
      const double s = detail::kAlphaStep;
      const auto [ax1, ax2] = a.eval(x + s, y);
      const auto [bx1, bx2] = a.eval(x - s, y);
      const auto [ay1, ay2] = a.eval(x, y + s);
      const auto [by1, by2] = a.eval(x, y - s);
      const DualForms wx = detail::dual_derivative(wd, (ax1 - bx1) / (2 * s), (ax2 - bx2) / (2 * s));
      const DualForms wy = detail::dual_derivative(wd, (ay1 - by1) / (2 * s), (ay2 - by2) / (2 * s));
      const CQuat P = sf.P(dom.point(i, j));
      const CQuat Pb = conj_bar(P);
      const CQuat Ph = conj_hat(P);
      const CQuat ax = ui * wd.w1[0] + CQuat::unit_i() * wd.w2[0];
      const CQuat ay = ui * wd.w1[1] + CQuat::unit_i() * wd.w2[1];
      const CQuat ax_x = ui * wx.w1[0] + CQuat::unit_i() * wx.w2[0];
      const CQuat ay_y = ui * wy.w1[1] + CQuat::unit_i() * wy.w2[1];
      dxx(i, j) = real_part(gb * (Pb * ax + ax_x + ax * Ph) * gh);
      dyy(i, j) = real_part(gb * (kI * Pb * ay + ay_y - kI * ay * Ph) * gh);
    }
  }
  p.F = Field<MinkVec>(dom);
  const double hx = dom.hx();
  const double hy = dom.hy();
  auto edge = [&](const MinkVec& f0, const MinkVec& f1, const MinkVec& d0, const MinkVec& d1,
                  double h) {
    MinkVec v = (f0 + f1) * (0.5 * h);
    if (corrected) v += (d0 - d1) * (h * h / 12.0);
    return v;
  };
  for (std::size_t i = 1; i < dom.nx; ++i) {
    p.F(i, 0) = p.F(i - 1, 0) + edge(xx(i - 1, 0), xx(i, 0), dxx(i - 1, 0), dxx(i, 0), hx);
  }
  for (std::size_t i = 0; i < dom.nx; ++i) {
    for (std::size_t j = 1; j < dom.ny; ++j) {
      p.F(i, j) = p.F(i, j - 1) + edge(xy(i, j - 1), xy(i, j), dyy(i, j - 1), dyy(i, j), hy);
    }
  }
  p.loop = loop_residuals(xx, xy, dom);
  for (double v : p.loop.values()) p.loop_max = std::max(p.loop_max, v);
  p.loop_budget = kLoopC * dom.h() * dom.h() * ximax;
  p.reality_defect = defect;
  if (defect > kRealityEps * std::max(1.0, ximax)) {
    throw RealityViolation("xi left the real image of R^{3,1}");
  }
  if (p.loop_max > p.loop_budget) {
    throw ClosednessFailure("max loop residual " + std::to_string(p.loop_max) + " exceeds budget " +
                            std::to_string(p.loop_budget));
  }
  return p;
}

// ---------------------------------------------------------------------------
// Dirac equation in the parallel frame: i dg(alpha1) g^{-1} + I dg(alpha2) g^{-1} = h1 J + h2 K.

struct DiracReport {
  double max_residual = 0.0;
  GridIndex worst;
};

inline DiracReport verify_dirac_flat(const Field<CQuat>& g, const Field<Complex>& a1,
                                     const Field<Complex>& a2,
                                     const Field<std::array<double, 2>>& h, const GridDomain& dom) {
  DiracReport r;
  for_interior(dom, [&](std::size_t i, std::size_t j) {
    const CQuat gx = fd::dx(g, dom, i, j);
    const CQuat gy = fd::dy(g, dom, i, j);
    const CQuat ginv = conj_bar(g(i, j));
    const CQuat d1 = directional(a1(i, j), gx, gy) * ginv;
    const CQuat d2 = directional(a2(i, j), gx, gy) * ginv;
    const CQuat lhs = kI * d1 + CQuat::unit_i() * d2;
    const double res = norm(lhs - CQuat{0.0, 0.0, h(i, j)[0], h(i, j)[1]});
    if (res > r.max_residual) {
      r.max_residual = res;
      r.worst = {i, j};
    }
  });
  return r;
}

inline DiracReport verify_dirac_flat(const SpinFrameField& g, const AlphaField& a,
                                     const FlatSeed& seed) {
  return verify_dirac_flat(g.g, a.a1, a.a2, sample_seed(seed, g.dom).h, g.dom);
}

// ---------------------------------------------------------------------------
// Complex arc length: h^2 = f1^2 - f2^2, cosh(psi) = f1 / h, sinh(psi) = f2 / h.

struct ArcData {
  Field<Complex> h;
  Field<Complex> psi;
  /// max |cosh(psi) - f1/h| + |sinh(psi) - f2/h| over the grid.
  double consistency = 0.0;
};

namespace detail {

inline Complex nearest_root(Complex square, Complex previous) {
  const Complex r = std::sqrt(square);
  return std::abs(r - previous) <= std::abs(-r - previous) ? r : -r;
}

inline Field<Complex> continue_root(const Field<Complex>& d, const GridDomain& dom, Sweep order) {
  Field<Complex> h(dom);
  h(0, 0) = std::sqrt(d(0, 0));
  auto step = [&](std::size_t i0, std::size_t j0, std::size_t i1, std::size_t j1) {
    h(i1, j1) = nearest_root(d(i1, j1), h(i0, j0));
  };
  if (order == Sweep::rows_first) {
    for (std::size_t i = 1; i < dom.nx; ++i) step(i - 1, 0, i, 0);
    for (std::size_t i = 0; i < dom.nx; ++i) {
      for (std::size_t j = 1; j < dom.ny; ++j) step(i, j - 1, i, j);
    }
  } else {
    for (std::size_t j = 1; j < dom.ny; ++j) step(0, j - 1, 0, j);
    for (std::size_t j = 0; j < dom.ny; ++j) {
      for (std::size_t i = 1; i < dom.nx; ++i) step(i - 1, j, i, j);
    }
  }
  return h;
}

/// log(w) with the imaginary part shifted by a multiple of 2 pi towards `previous`.
inline Complex nearest_log(Complex w, Complex previous) {
  Complex l = std::log(w);
  const double turns = std::round((previous.imag() - l.imag()) / (2.0 * std::numbers::pi));
  return {l.real(), l.imag() + turns * 2.0 * std::numbers::pi};
}

}  // namespace detail

inline ArcData arc_length_reduce(const SeedR31& seed, const GridDomain& dom) {
  dom.validate();
  check_osculating(seed, dom);
  Field<Complex> f1(dom), f2(dom), d(dom);
  for (std::size_t j = 0; j < dom.ny; ++j) {
    for (std::size_t i = 0; i < dom.nx; ++i) {
      f1(i, j) = expr::eval(seed.f1, dom.point(i, j));
      f2(i, j) = expr::eval(seed.f2, dom.point(i, j));
      d(i, j) = f1(i, j) * f1(i, j) - f2(i, j) * f2(i, j);
    }
  }
  ArcData out;
  out.h = detail::continue_root(d, dom, Sweep::rows_first);
  const Field<Complex> other = detail::continue_root(d, dom, Sweep::columns_first);
  for (std::size_t j = 0; j < dom.ny; ++j) {
    for (std::size_t i = 0; i < dom.nx; ++i) {
      if (std::abs(std::arg(out.h(i, j) / other(i, j))) > std::numbers::pi / 2) {
        throw BranchConflict({i, j}, "square root continuation depends on the path");
      }
    }
  }
  out.psi = Field<Complex>(dom);
  auto at = [&](std::size_t i, std::size_t j, Complex previous) {
    out.psi(i, j) = detail::nearest_log((f1(i, j) + f2(i, j)) / out.h(i, j), previous);
  };
  at(0, 0, 0.0);
  for (std::size_t i = 1; i < dom.nx; ++i) at(i, 0, out.psi(i - 1, 0));
  for (std::size_t i = 0; i < dom.nx; ++i) {
    for (std::size_t j = 1; j < dom.ny; ++j) at(i, j, out.psi(i, j - 1));
  }
  for (std::size_t j = 0; j < dom.ny; ++j) {
    for (std::size_t i = 0; i < dom.nx; ++i) {
      const Complex p = out.psi(i, j);
      const Complex hh = out.h(i, j);
      const double scale = std::max(1.0, std::abs(f1(i, j) / hh));
      const double err =
          (std::abs(std::cosh(p) - f1(i, j) / hh) + std::abs(std::sinh(p) - f2(i, j) / hh)) / scale;
      out.consistency = std::max(out.consistency, err);
    }
  }
  if (out.consistency > 1e-9) {
    throw BranchConflict({0, 0}, "psi does not reproduce f1/h and f2/h");
  }
  return out;
}

}  // namespace flatspin
