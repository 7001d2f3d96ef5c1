#pragma once

// Finite-difference checks of the geometric identities satisfied by patches of
// the flat pipeline. All stencils are central and skip the boundary ring.

#include <algorithm>
#include <array>
#include <cmath>

#include "flatspin/cquat.hpp"
#include "flatspin/error.hpp"
#include "flatspin/grid.hpp"
#include "flatspin/seeddomain.hpp"
#include "flatspin/synth.hpp"

namespace flatspin {

using GaussField = Field<ImQuat>;

/// G = i g^{-1} I g.
inline ImQuat gauss_point(const CQuat& g) {
  return to_imquat(kI * (conj_bar(g) * CQuat::unit_i() * g));
}

inline GaussField gauss_map(const Field<CQuat>& g) {
  GaussField G(g.nx(), g.ny());
  for (std::size_t k = 0; k < g.size(); ++k) G.values()[k] = gauss_point(g.values()[k]);
  return G;
}

inline GaussField gauss_map(const SpinFrameField& sf) { return gauss_map(sf.g); }

/// Largest |H(G,G) + 1| over the field.
inline double grassmannian_defect(const GaussField& G) {
  double m = 0.0;
  for (const ImQuat& v : G.values()) {
    m = std::max(m, std::abs(bilinear_h(to_cquat(v), to_cquat(v)) + 1.0));
  }
  return m;
}

struct ResidualReport {
  double max_residual = 0.0;
  GridIndex worst;

  void update(double r, std::size_t i, std::size_t j) {
    if (r > max_residual) {
      max_residual = r;
      worst = {i, j};
    }
  }
};

/// Cauchy-Riemann residual dv/dy - i dv/dx.
template <class T>
ResidualReport cr_residual(const Field<T>& v, const GridDomain& dom) {
  ResidualReport r;
  for_interior(dom, [&](std::size_t i, std::size_t j) {
    r.update(magnitude(fd::dy(v, dom, i, j) - kI * fd::dx(v, dom, i, j)), i, j);
  });
  return r;
}

/// Second derivative of f along the plane field a, including the a (grad a) f term.
template <class T>
T second_directional(const Field<T>& f, const Field<Complex>& a, const GridDomain& dom,
                     std::size_t i, std::size_t j) {
  const auto jt = fd::jet(f, dom, i, j);
  const double p = a(i, j).real();
  const double q = a(i, j).imag();
  const Complex da = directional(a(i, j), fd::dx(a, dom, i, j), fd::dy(a, dom, i, j));
  return jt.xx * (p * p) + jt.xy * (2.0 * p * q) + jt.yy * (q * q) + directional(da, jt.x, jt.y);
}

/// -d2/dalpha1^2 + d2/dalpha2^2.
template <class T>
T frame_laplacian(const Field<T>& f, const Field<Complex>& a1, const Field<Complex>& a2,
                  const GridDomain& dom, std::size_t i, std::size_t j) {
  return second_directional(f, a2, dom, i, j) - second_directional(f, a1, dom, i, j);
}

inline void require_frames(const ImmersionPatch& p) {
  if (!p.has_frames() || !p.has_alpha() || p.seed.h.empty()) {
    throw PreconditionViolated("patch lacks frame, alpha or mean curvature samples");
  }
}

/// Delta F - 2 (h1 xi(e3) + h2 xi(e4)).
inline ResidualReport laplacian_immersion_residual(const ImmersionPatch& p) {
  require_frames(p);
  ResidualReport r;
  for_interior(p.dom, [&](std::size_t i, std::size_t j) {
    const MinkVec lap = frame_laplacian(p.F, p.a1, p.a2, p.dom, i, j);
    const auto& h = p.seed.h(i, j);
    const MinkVec mean = (p.u3(i, j) * h[0] + p.u4(i, j) * h[1]) * 2.0;
    r.update(norm(lap - mean), i, j);
  });
  return r;
}

/// H(dG, dG) against -4 (f1^2 - f2^2) dz^2, split by coordinate pairs.
struct QuadraticReport {
  double xx = 0.0;  // H(Gx, Gx) + 4D
  double yy = 0.0;  // H(Gy, Gy) - 4D
  double xy = 0.0;  // H(Gx, Gy) + 4iD
  [[nodiscard]] double max() const { return std::max({xx, yy, xy}); }
};

inline QuadraticReport gauss_pullback_quadratic(const GaussField& G,
                                                const Field<std::array<Complex, 2>>& f,
                                                const GridDomain& dom) {
  QuadraticReport r;
  for_interior(dom, [&](std::size_t i, std::size_t j) {
    const CQuat gx = to_cquat(fd::dx(G, dom, i, j));
    const CQuat gy = to_cquat(fd::dy(G, dom, i, j));
    const Complex d = f(i, j)[0] * f(i, j)[0] - f(i, j)[1] * f(i, j)[1];
    r.xx = std::max(r.xx, std::abs(bilinear_h(gx, gx) + 4.0 * d));
    r.yy = std::max(r.yy, std::abs(bilinear_h(gy, gy) - 4.0 * d));
    r.xy = std::max(r.xy, std::abs(bilinear_h(gx, gy) + 4.0 * kI * d));
  });
  return r;
}

inline constexpr double kConstantMeanCurvatureTol = 1e-12;

/// Delta G + c (h1^2 + h2^2) G for constant (h1, h2), with Delta the frame Laplacian in H^C.
inline ResidualReport laplacian_gauss_residual(const GaussField& G, const ImmersionPatch& p,
                                               double coefficient = 2.0) {
  require_frames(p);
  const auto h0 = p.seed.h.values().front();
  for (const auto& h : p.seed.h.values()) {
    if (std::abs(h[0] - h0[0]) > kConstantMeanCurvatureTol ||
        std::abs(h[1] - h0[1]) > kConstantMeanCurvatureTol) {
      throw PreconditionViolated("h1 and h2 must be constant over the grid");
    }
  }
  const double h2 = h0[0] * h0[0] + h0[1] * h0[1];
  ResidualReport r;
  for_interior(p.dom, [&](std::size_t i, std::size_t j) {
    const CQuat lap = to_cquat(frame_laplacian(G, p.a1, p.a2, p.dom, i, j));
    r.update(norm(lap + to_cquat(G(i, j)) * (coefficient * h2)), i, j);
  });
  return r;
}

/// dG - 2 G g^{-1} dg on both coordinate directions.
inline ResidualReport gauss_derivative_residual(const GaussField& G, const Field<CQuat>& g,
                                                const GridDomain& dom) {
  ResidualReport r;
  for_interior(dom, [&](std::size_t i, std::size_t j) {
    const CQuat gq = to_cquat(G(i, j));
    const CQuat ginv = conj_bar(g(i, j));
    const CQuat rx = to_cquat(fd::dx(G, dom, i, j)) - gq * ginv * fd::dx(g, dom, i, j) * 2.0;
    const CQuat ry = to_cquat(fd::dy(G, dom, i, j)) - gq * ginv * fd::dy(g, dom, i, j) * 2.0;
    r.update(std::max(norm(rx), norm(ry)), i, j);
  });
  return r;
}

/// Deviation of the stored frame from <u1,u1> = -1, <u2,u2> = 1, <u1,u2> = 0 and
/// of the normal frame from orthonormality.
struct FramePatternReport {
  double tangent = 0.0;
  double normal = 0.0;
};

inline FramePatternReport metric_pattern(const ImmersionPatch& p) {
  if (!p.has_frames()) throw PreconditionViolated("patch lacks frame samples");
  FramePatternReport r;
  for (std::size_t k = 0; k < p.F.size(); ++k) {
    const MinkVec& u1 = p.u1.values()[k];
    const MinkVec& u2 = p.u2.values()[k];
    const MinkVec& u3 = p.u3.values()[k];
    const MinkVec& u4 = p.u4.values()[k];
    r.tangent = std::max({r.tangent, std::abs(minkowski(u1, u1) + 1.0),
                          std::abs(minkowski(u2, u2) - 1.0), std::abs(minkowski(u1, u2))});
    r.normal = std::max({r.normal, std::abs(minkowski(u3, u3) - 1.0),
                         std::abs(minkowski(u4, u4) - 1.0), std::abs(minkowski(u3, u4)),
                         std::abs(minkowski(u1, u3)), std::abs(minkowski(u1, u4)),
                         std::abs(minkowski(u2, u3)), std::abs(minkowski(u2, u4))});
  }
  return r;
}

/// First fundamental form E du^2 + 2 F du dv + G dv^2.
struct Metric {
  double E = 0.0, F = 0.0, G = 0.0;
  [[nodiscard]] double det() const { return E * G - F * F; }
};

/// Induced metric of F from central differences; boundary samples stay zero.
inline Field<Metric> induced_metric(const Field<MinkVec>& F, const GridDomain& dom) {
  Field<Metric> m(dom);
  for_interior(dom, [&](std::size_t i, std::size_t j) {
    const MinkVec fx = fd::dx(F, dom, i, j);
    const MinkVec fy = fd::dy(F, dom, i, j);
    m(i, j) = {minkowski(fx, fx), minkowski(fx, fy), minkowski(fy, fy)};
  });
  return m;
}

/// Finite-difference metric against -omega1^2 + omega2^2.
inline ResidualReport metric_residual(const ImmersionPatch& p) {
  if (!p.has_alpha()) throw PreconditionViolated("patch lacks alpha samples");
  const Field<Metric> m = induced_metric(p.F, p.dom);
  ResidualReport r;
  for_interior(p.dom, [&](std::size_t i, std::size_t j) {
    const DualForms w = dual_at(p.a1(i, j), p.a2(i, j));
    const double e = -w.w1[0] * w.w1[0] + w.w2[0] * w.w2[0];
    const double f = -w.w1[0] * w.w1[1] + w.w2[0] * w.w2[1];
    const double g = -w.w1[1] * w.w1[1] + w.w2[1] * w.w2[1];
    const Metric& v = m(i, j);
    r.update(std::max({std::abs(v.E - e), std::abs(v.F - f), std::abs(v.G - g)}), i, j);
  });
  return r;
}

struct CurvatureReport {
  Field<double> K;
  double max_abs = 0.0;
  GridIndex worst;
};

/// Brioschi curvature of a Lorentzian metric known on the points at least
/// `margin` away from the boundary; K is produced one ring further in.
inline CurvatureReport brioschi(const Field<Metric>& m, const GridDomain& dom,
                                std::size_t margin = 0) {
  CurvatureReport r{Field<double>(dom), 0.0, {}};
  for (std::size_t j = margin; j + margin < dom.ny; ++j) {
    for (std::size_t i = margin; i + margin < dom.nx; ++i) {
      if (!(m(i, j).det() < 0.0)) throw SignatureError({i, j}, "EG - F^2 must be negative");
    }
  }
  Field<double> E(dom), F(dom), G(dom);
  for (std::size_t k = 0; k < m.size(); ++k) {
    E.values()[k] = m.values()[k].E;
    F.values()[k] = m.values()[k].F;
    G.values()[k] = m.values()[k].G;
  }
  const std::size_t lo = margin + 1;
  for (std::size_t j = lo; j + lo < dom.ny; ++j) {
    for (std::size_t i = lo; i + lo < dom.nx; ++i) {
      const auto e = fd::jet(E, dom, i, j);
      const auto f = fd::jet(F, dom, i, j);
      const auto g = fd::jet(G, dom, i, j);
      const double e0 = E(i, j), f0 = F(i, j), g0 = G(i, j);
      const double a11 = -0.5 * e.yy + f.xy - 0.5 * g.xx;
      const double a12 = 0.5 * e.x;
      const double a13 = f.x - 0.5 * e.y;
      const double a21 = f.y - 0.5 * g.x;
      const double a31 = 0.5 * g.y;
      // Determinants of [[a11, a12, a13], [a21, E, F], [a31, F, G]] and
      // [[0, Ev/2, Gu/2], [Ev/2, E, F], [Gu/2, F, G]].
      const double d1 = a11 * (e0 * g0 - f0 * f0) - a12 * (a21 * g0 - f0 * a31) +
                        a13 * (a21 * f0 - e0 * a31);
      const double b = 0.5 * e.y;
      const double c = 0.5 * g.x;
      const double d2 = -b * (b * g0 - f0 * c) + c * (b * f0 - e0 * c);
      const double det = e0 * g0 - f0 * f0;
      const double k = (d1 - d2) / (det * det);
      r.K(i, j) = k;
      if (std::abs(k) > r.max_abs) {
        r.max_abs = std::abs(k);
        r.worst = {i, j};
      }
    }
  }
  return r;
}

inline CurvatureReport curvature_brioschi(const ImmersionPatch& p) {
  return brioschi(induced_metric(p.F, p.dom), p.dom, 1);
}

}  // namespace flatspin
