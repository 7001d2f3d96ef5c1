#include <gtest/gtest.h>

#include <cmath>

#include "flatspin/geomverify.hpp"
#include "support.hpp"

using namespace flatspin;
using test::golden;
using test::r31;
using test::unit_square;

namespace {

ImmersionPatch patch(const FlatSeed& seed, std::size_t n) {
  const GridDomain d = unit_square(n);
  ImmersionPatch p = integrate_immersion(integrate_spin_frame(seed, d), build_alpha(seed, d));
  p.seed = sample_seed(seed, d);
  return p;
}

Field<Metric> metric_from(const GridDomain& d, Metric (*fn)(double, double)) {
  return sample(d, [&](std::size_t i, std::size_t j) { return fn(d.x(i), d.y(j)); });
}

}  // namespace

TEST(GaussMap, GoldenFrame) {
  const Complex z{0.3, 0.4};
  const ImQuat G = gauss_point(CQuat{std::cos(z), 0.0, std::sin(z), 0.0});
  const ImQuat expect{std::cos(2.0 * z), 0.0, std::sin(2.0 * z)};  // (iI, J, iK) coordinates
  EXPECT_LE(norm(to_cquat(G) - to_cquat(expect)), 1e-14);
  EXPECT_LE(norm(to_cquat(gauss_point(CQuat::one())) - kI * CQuat::unit_i()), 0.0);
}

TEST(GaussMap, LiesInTheGrassmannian) {
  test::Rng rng(31);
  GaussField G(100, 100);
  for (ImQuat& v : G.values()) v = gauss_point(rng.spin().value());
  EXPECT_LE(grassmannian_defect(G), 1e-10);
}

TEST(GaussMap, IsHolomorphic) {
  const FlatSeed seed = r31("exp(z/2)", "0", "1", "0.5");
  auto cr = [&](std::size_t n) {
    const GridDomain d = unit_square(n);
    const GaussField G = gauss_map(integrate_spin_frame(seed, d));
    return cr_residual(G, d).max_residual / max_magnitude(G);
  };
  const double coarse = cr(65), fine = cr(129);
  EXPECT_LT(fine, 1e-3);
  EXPECT_GT(coarse / fine, 3.5);
}

TEST(CauchyRiemann, ConjugateFails) {
  const GridDomain d = unit_square(33);
  const Field<Complex> v = sample(d, [&](std::size_t i, std::size_t j) { return std::conj(d.point(i, j)); });
  EXPECT_NEAR(cr_residual(v, d).max_residual, 2.0, 1e-12);
  EXPECT_EQ(cr_residual(Field<Complex>(d, Complex{1.0, 2.0}), d).max_residual, 0.0);
}

TEST(GaussDerivative, GoldenPatch) {
  const GridDomain d = unit_square(65);
  const SpinFrameField sf = integrate_spin_frame(golden(), d);
  EXPECT_LE(gauss_derivative_residual(gauss_map(sf), sf.g, d).max_residual, 1e-2);
}

TEST(LaplacianImmersion, GoldenPatchConverges) {
  const double coarse = laplacian_immersion_residual(patch(golden(), 33)).max_residual;
  const double fine = laplacian_immersion_residual(patch(golden(), 65)).max_residual;
  EXPECT_GT(coarse / fine, 3.5);
  EXPECT_LT(fine, 1e-2);
}

TEST(LaplacianImmersion, TotallyGeodesicPlane) {
  const GridDomain d = unit_square(17);
  ImmersionPatch p;
  p.dom = d;
  p.F = sample(d, [&](std::size_t i, std::size_t j) { return MinkVec{d.y(j), d.x(i), 0.0, 0.0}; });
  attach_frames(p, Field<CQuat>(d, CQuat::one()));
  p.a1 = Field<Complex>(d, -kI);
  p.a2 = Field<Complex>(d, 1.0);
  p.seed.h = Field<std::array<double, 2>>(d, {0.0, 0.0});
  EXPECT_LE(laplacian_immersion_residual(p).max_residual, 1e-12);
}

TEST(LaplacianImmersion, NeedsFrames) {
  ImmersionPatch p;
  p.dom = unit_square(5);
  p.F = Field<MinkVec>(p.dom);
  EXPECT_THROW(laplacian_immersion_residual(p), PreconditionViolated);
}

TEST(Quadratic, GoldenAndHyperbolicSeeds) {
  for (const FlatSeed& seed : {FlatSeed{golden()}, FlatSeed{r31("cosh(z)", "sinh(z)", "1", "1")}}) {
    const GridDomain d = unit_square(65);
    const QuadraticReport q = gauss_pullback_quadratic(gauss_map(integrate_spin_frame(seed, d)),
                                                       sample_seed(seed, d).f, d);
    EXPECT_LE(q.max(), 1e-2);
  }
}

TEST(Quadratic, MixedTermIsChecked) {
  // Golden G paired with D = -1 (f1 = 0, f2 = 1): every term is off by 8.
  const GridDomain d = unit_square(33);
  const GaussField G = gauss_map(integrate_spin_frame(golden(), d));
  Field<std::array<Complex, 2>> f(d, {Complex{0.0}, Complex{1.0}});
  const QuadraticReport q = gauss_pullback_quadratic(G, f, d);
  EXPECT_GT(q.xx, 7.0);
  EXPECT_GT(q.yy, 7.0);
  EXPECT_GT(q.xy, 7.0);
}

TEST(LaplacianGauss, MeasuredCoefficientIsFour) {
  const ImmersionPatch p = patch(golden(), 65);
  const GaussField G = gauss_map(p.g);
  EXPECT_LE(laplacian_gauss_residual(G, p, 4.0).max_residual, 1e-2);
  // The coefficient 2 leaves 2 |h|^2 |G| = 4 |G| behind.
  EXPECT_GT(laplacian_gauss_residual(G, p, 2.0).max_residual, 1.0);
}

TEST(LaplacianGauss, RequiresConstantMeanCurvature) {
  ImmersionPatch p = patch(golden(), 17);
  p.seed.h(3, 4)[0] += 1e-6;
  EXPECT_THROW(laplacian_gauss_residual(gauss_map(p.g), p, 4.0), PreconditionViolated);
}

TEST(FramePattern, GoldenPatch) {
  const FramePatternReport r = metric_pattern(patch(golden(), 17));
  EXPECT_LE(r.tangent, 1e-12);
  EXPECT_LE(r.normal, 1e-12);
}

TEST(InducedMetric, MatchesTheDualForms) {
  const double coarse = metric_residual(patch(r31("exp(z/2)", "0", "1", "0.5"), 65)).max_residual;
  const double fine = metric_residual(patch(r31("exp(z/2)", "0", "1", "0.5"), 129)).max_residual;
  EXPECT_GT(coarse / fine, 3.5);
  EXPECT_LT(fine, 1e-2);
}

TEST(Brioschi, ConstantMetricIsFlat) {
  const GridDomain d = unit_square(17);
  const CurvatureReport r = brioschi(Field<Metric>(d, Metric{-1.0, 0.3, 2.0}), d);
  EXPECT_EQ(r.max_abs, 0.0);
}

TEST(Brioschi, LorentzianUnitCurvature) {
  // -du^2 + cosh^2(u) dv^2 has K = 1.
  auto worst = [](std::size_t n) {
    const GridDomain d = unit_square(n);
    const CurvatureReport r = brioschi(
        metric_from(d, [](double u, double) { return Metric{-1.0, 0.0, std::cosh(u) * std::cosh(u)}; }), d);
    double e = 0.0;
    for (std::size_t j = 1; j + 1 < d.ny; ++j) {
      for (std::size_t i = 1; i + 1 < d.nx; ++i) e = std::max(e, std::abs(r.K(i, j) - 1.0));
    }
    return e;
  };
  EXPECT_LT(worst(65), 1e-3);
  EXPECT_GT(worst(33) / worst(65), 3.5);
}

TEST(Brioschi, RiemannianMetricIsRejected) {
  const GridDomain d = unit_square(9);
  EXPECT_THROW(brioschi(Field<Metric>(d, Metric{1.0, 0.0, 1.0}), d), SignatureError);
}

TEST(Brioschi, FlatPatchConverges) {
  const double coarse = curvature_brioschi(patch(r31("1+z^2/4", "0", "1", "1"), 65)).max_abs;
  const double fine = curvature_brioschi(patch(r31("1+z^2/4", "0", "1", "1"), 129)).max_abs;
  EXPECT_GT(coarse / fine, 3.5);
}
