#pragma once

// Flat timelike surfaces in De Sitter space S^{2,1} from holomorphic curves in
// Sl2(C): F = B [[0, i], [i, 0]] B^*, with B^{-1} dB = [[0, theta], [omega, 0]] dz.
// Also the criteria for a patch of R^{3,1} to lie in R^{2,1} or in S^{2,1}.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "flatspin/cquat.hpp"
#include "flatspin/error.hpp"
#include "flatspin/geomverify.hpp"
#include "flatspin/grid.hpp"
#include "flatspin/holoexpr.hpp"
#include "flatspin/seeddomain.hpp"
#include "flatspin/synth.hpp"

namespace flatspin {

using Sl2Field = Field<Mat2C>;

/// B = A(conj_bar(g)); det B = H(g, g).
inline Mat2C spinor_to_sl2(const CQuat& g) { return to_mat2(conj_bar(g)); }

inline Sl2Field spinor_to_sl2(const Field<CQuat>& g) {
  Sl2Field b(g.nx(), g.ny());
  for (std::size_t k = 0; k < g.size(); ++k) b.values()[k] = spinor_to_sl2(g.values()[k]);
  return b;
}

/// A(K), the image of e4.
inline const Mat2C kDeSitterBase{0.0, kI, kI, 0.0};

inline constexpr double kUnimodularTol = 1e-6;

inline Mat2C desitter_point(const Mat2C& B) {
  if (std::abs(det(B) - 1.0) > kUnimodularTol) throw NotUnimodular("|det B - 1| exceeds 1e-6");
  return B * kDeSitterBase * adjoint(B);
}

/// The R^{3,1} vector whose A-image is the anti-Hermitian matrix m.
inline MinkVec herm_to_minkowski(const Mat2C& m) { return to_minkowski(from_mat2(m)); }

inline constexpr double kSeedVanishRel = 1e-8;

/// theta, omega nowhere zero and Im(omega / theta) nowhere zero on the grid.
inline void validate_s21(const SeedS21& s, const GridDomain& dom) {
  Field<Complex> th(dom), om(dom);
  double tmax = 0.0, omax = 0.0;
  for (std::size_t j = 0; j < dom.ny; ++j) {
    for (std::size_t i = 0; i < dom.nx; ++i) {
      th(i, j) = expr::eval(s.theta, dom.point(i, j));
      om(i, j) = expr::eval(s.omega, dom.point(i, j));
      tmax = std::max(tmax, std::abs(th(i, j)));
      omax = std::max(omax, std::abs(om(i, j)));
    }
  }
  double rmax = 0.0;
  for (std::size_t j = 0; j < dom.ny; ++j) {
    for (std::size_t i = 0; i < dom.nx; ++i) {
      if (!(std::abs(th(i, j)) > kSeedVanishRel * tmax)) throw SeedInvalid({i, j}, "theta vanishes");
      if (!(std::abs(om(i, j)) > kSeedVanishRel * omax)) throw SeedInvalid({i, j}, "omega vanishes");
      rmax = std::max(rmax, std::abs(om(i, j) / th(i, j)));
    }
  }
  for (std::size_t j = 0; j < dom.ny; ++j) {
    for (std::size_t i = 0; i < dom.nx; ++i) {
      if (!(std::abs((om(i, j) / th(i, j)).imag()) > kSeedVanishRel * rmax)) {
        throw SeedInvalid({i, j}, "Im(omega / theta) vanishes");
      }
    }
  }
}

struct HermPatch {
  GridDomain dom;
  Sl2Field B;
  Field<Mat2C> F;
  /// Largest |det B - 1| before renormalization.
  double max_drift = 0.0;
  /// Induced metric from central differences of F (interior points).
  Field<Metric> metric;
};

inline Field<MinkVec> to_minkowski(const Field<Mat2C>& F) {
  Field<MinkVec> out(F.nx(), F.ny());
  for (std::size_t k = 0; k < F.size(); ++k) out.values()[k] = herm_to_minkowski(F.values()[k]);
  return out;
}

/// Position-only R^{3,1} patch of a De Sitter surface.
inline ImmersionPatch to_immersion_patch(const HermPatch& h) {
  ImmersionPatch p;
  p.dom = h.dom;
  p.F = to_minkowski(h.F);
  return p;
}

inline HermPatch synthesize_flat_s21(const SeedS21& seed, const GridDomain& dom,
                                     const Mat2C& B0 = Mat2C::identity(),
                                     Sweep order = Sweep::rows_first) {
  dom.validate();
  validate_s21(seed, dom);
  if (std::abs(det(B0) - 1.0) > kUnimodularTol) throw NotUnimodular("initial value must lie in Sl2(C)");
  HermPatch out;
  out.dom = dom;
  auto rhs = [&seed](Complex z, const Mat2C& b) {
    return b * Mat2C{0.0, expr::eval(seed.theta, z), expr::eval(seed.omega, z), 0.0};
  };
  auto renorm = [&out](Mat2C& b, GridIndex at) {
    const Complex d = det(b);
    if (!(std::abs(d) >= kRenormFloor)) throw RenormalizationFailure(at, "|det B| fell below 0.5");
    out.max_drift = std::max(out.max_drift, std::abs(d - 1.0));
    b = b / std::sqrt(d);
  };
  out.B = sweep_integrate(dom, B0, rhs, renorm, order);
  out.F = Field<Mat2C>(dom);
  for (std::size_t k = 0; k < out.B.size(); ++k) out.F.values()[k] = desitter_point(out.B.values()[k]);
  out.metric = induced_metric(to_minkowski(out.F), dom);
  return out;
}

/// Off-diagonal coefficients of B^{-1} dB / dz and the size of its diagonal.
struct ConnectionReport {
  Field<Complex> theta, omega;
  double max_diagonal = 0.0;
  double budget = 0.0;
  double min_theta = std::numeric_limits<double>::infinity();
  double min_omega = std::numeric_limits<double>::infinity();
  /// max |omega theta + (f1^2 - f2^2)| when potential samples were given.
  std::optional<double> linkage;
  [[nodiscard]] bool vanishing() const { return !(min_theta > 0.0) || !(min_omega > 0.0); }
};

/// Diagonal budget: C h^2 max(1, max off-diagonal).
inline constexpr double kConnectionC = 10.0;

inline ConnectionReport extract_connection(const Sl2Field& B, const GridDomain& dom,
                                           const Field<std::array<Complex, 2>>* f = nullptr) {
  ConnectionReport r;
  r.theta = Field<Complex>(dom);
  r.omega = Field<Complex>(dom);
  Field<Mat2C> conn(dom);
  double offmax = 0.0;
  for_interior(dom, [&](std::size_t i, std::size_t j) {
    conn(i, j) = inverse(B(i, j)) * fd::dx(B, dom, i, j);
    offmax = std::max({offmax, std::abs(conn(i, j).b), std::abs(conn(i, j).c)});
  });
  r.budget = kConnectionC * dom.h() * dom.h() * std::max(1.0, offmax);
  std::optional<GridIndex> bad;
  for_interior(dom, [&](std::size_t i, std::size_t j) {
    const Mat2C& c = conn(i, j);
    const double diag = std::max(std::abs(c.a), std::abs(c.d));
    if (diag > r.max_diagonal) {
      r.max_diagonal = diag;
      if (diag > r.budget) bad = GridIndex{i, j};
    }
    r.theta(i, j) = c.b;
    r.omega(i, j) = c.c;
    r.min_theta = std::min(r.min_theta, std::abs(c.b));
    r.min_omega = std::min(r.min_omega, std::abs(c.c));
    if (f != nullptr) {
      const auto& fk = (*f)(i, j);
      const double l = std::abs(c.c * c.b + (fk[0] * fk[0] - fk[1] * fk[1]));
      r.linkage = std::max(r.linkage.value_or(0.0), l);
    }
  });
  if (bad) throw NonOffDiagonal(*bad, "diagonal of B^{-1} dB exceeds budget");
  return r;
}

// ---------------------------------------------------------------------------

struct ReductionReport {
  bool in_R21 = false;
  int sign = 0;  // xi(e4) = sign * K when in_R21
  double r21_residual = std::numeric_limits<double>::infinity();
  bool in_S21 = false;
  MinkVec center;
  double s21_residual = std::numeric_limits<double>::infinity();
};

inline constexpr double kR21Tol = 1e-6;
inline constexpr double kS21Tol = 1e-5;

/// max |<F - c, F - c> - 1|.
inline double desitter_residual(const Field<MinkVec>& F, const MinkVec& c) {
  double m = 0.0;
  for (const MinkVec& v : F.values()) {
    const MinkVec d = v - c;
    m = std::max(m, std::abs(minkowski(d, d) - 1.0));
  }
  return m;
}

/// Least-squares center of <F - c, F - c> = 1 from the linearization
/// <F,F> - 2 <F,c> + k = 0 with k free.
inline MinkVec fit_desitter_center(const Field<MinkVec>& F) {
  const auto n = static_cast<Eigen::Index>(F.size());
  Eigen::MatrixXd A(n, 5);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const MinkVec& v = F.values()[static_cast<std::size_t>(r)];
    A.row(r) << 2.0 * v.x1, -2.0 * v.x2, -2.0 * v.x3, -2.0 * v.x4, 1.0;
    rhs(r) = -minkowski(v, v);
  }
  const Eigen::VectorXd s = A.completeOrthogonalDecomposition().solve(rhs);
  return {s(0), s(1), s(2), s(3)};
}

inline ReductionReport check_reduction(const ImmersionPatch& p) {
  ReductionReport r;
  if (!p.u4.empty()) {
    for (int sign : {1, -1}) {
      double m = 0.0;
      for (const MinkVec& u : p.u4.values()) {
        m = std::max(m, norm(u - MinkVec{0.0, 0.0, 0.0, static_cast<double>(sign)}));
      }
      if (m < r.r21_residual) {
        r.r21_residual = m;
        r.sign = sign;
      }
    }
    r.in_R21 = r.r21_residual <= kR21Tol;
  }
  r.s21_residual = desitter_residual(p.F, {});
  const MinkVec fit = fit_desitter_center(p.F);
  const double fitted = desitter_residual(p.F, fit);
  if (std::isfinite(fitted) && fitted < r.s21_residual) {
    r.s21_residual = fitted;
    r.center = fit;
  }
  r.in_S21 = r.s21_residual <= kS21Tol;
  return r;
}

}  // namespace flatspin
