#include <gtest/gtest.h>

#include <cmath>

#include "flatspin/seeddomain.hpp"
#include "support.hpp"

using namespace flatspin;
using test::arc;
using test::golden;
using test::r31;
using test::unit_square;

namespace {

AlphaField constant_alpha(Complex a1, Complex a2, std::size_t n = 9) {
  return sample_alpha(unit_square(n), [=](double, double) { return std::pair{a1, a2}; });
}

double max_alpha_dev(const AlphaField& a, Complex a1, Complex a2) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.a1.size(); ++k) {
    m = std::max({m, std::abs(a.a1.values()[k] - a1), std::abs(a.a2.values()[k] - a2)});
  }
  return m;
}

}  // namespace

TEST(GridDomain, ValidatesBoundsAndCounts) {
  EXPECT_THROW((GridDomain{1.0, 0.0, 0.0, 1.0, 5, 5}.validate()), InvalidDomain);
  EXPECT_THROW((GridDomain{0.0, 1.0, 0.0, 1.0, 2, 5}.validate()), InvalidDomain);
  const GridDomain d{0.0, 2.0, -1.0, 1.0, 5, 3};
  EXPECT_NO_THROW(d.validate());
  EXPECT_DOUBLE_EQ(d.hx(), 0.5);
  EXPECT_DOUBLE_EQ(d.hy(), 1.0);
  EXPECT_EQ(d.point(2, 1), Complex(1.0, 0.0));
  EXPECT_EQ(d.refined(4).nx, 17u);
}

TEST(BuildAlpha, GoldenSeed) {
  const AlphaField a = build_alpha(golden(), unit_square(9));
  EXPECT_LE(max_alpha_dev(a, -kI, 1.0), 0.0);
}

TEST(BuildAlpha, ArcSeedWithZeroAngleMatchesGolden) {
  const AlphaField a = build_alpha(arc("0", "1", "1"), unit_square(9));
  EXPECT_LE(max_alpha_dev(a, -kI, 1.0), 0.0);
}

TEST(BuildAlpha, DegenerateOsculatingSpace) {
  EXPECT_THROW(build_alpha(r31("1", "1", "1", "1"), unit_square(9)), DegenerateOsculating);
  try {
    build_alpha(r31("z", "0", "1", "1"), GridDomain{-1.0, 1.0, -1.0, 1.0, 5, 5});
    FAIL() << "f1 = z vanishes at the centre";
  } catch (const DegenerateOsculating& e) {
    EXPECT_EQ(e.point().i, 2u);
    EXPECT_EQ(e.point().j, 2u);
  }
}

TEST(BuildAlpha, FrameRelationHoldsPointwise) {
  for (const char* f1 : {"1", "1+z/2", "cosh(z)", "exp(z)", "2+0.5i"}) {
    for (const char* f2 : {"0", "0.5*z", "sinh(z)", "0.3i"}) {
      const SeedR31 s = r31(f1, f2, "1+x*y", "0.5-y");
      const GridDomain d = unit_square(7);
      const AlphaField a = build_alpha(s, d);
      for (std::size_t j = 0; j < d.ny; ++j) {
        for (std::size_t i = 0; i < d.nx; ++i) {
          const Complex z = d.point(i, j);
          const double h1 = 1 + d.x(i) * d.y(j), h2 = 0.5 - d.y(j);
          const double r = frame_relation_residual(a.a1(i, j), a.a2(i, j), expr::eval(s.f1, z),
                                                   expr::eval(s.f2, z), h1, h2);
          ASSERT_LE(r, 1e-10 * std::max(1.0, std::abs(a.a1(i, j)) + std::abs(a.a2(i, j))))
              << f1 << ", " << f2 << " at " << z;
        }
      }
    }
  }
}

TEST(BuildAlpha, ArcFormAgreesWithGeneralForm) {
  for (const char* psi : {"0.3+0.2i", "z/2", "0.4i*z"}) {
    const GridDomain d = unit_square(5);
    const AlphaField a = build_alpha(arc(psi, "1", "0.5"), d);
    const std::string p(psi);
    const AlphaField b = build_alpha(r31(("cosh(" + p + ")").c_str(), ("sinh(" + p + ")").c_str(), "1", "0.5"), d);
    for (std::size_t k = 0; k < a.a1.size(); ++k) {
      EXPECT_LE(std::abs(a.a1.values()[k] - b.a1.values()[k]), 1e-13);
      EXPECT_LE(std::abs(a.a2.values()[k] - b.a2.values()[k]), 1e-13);
    }
  }
}

TEST(Independence, GoldenDeterminant) {
  const IndependenceReport r = check_independence(constant_alpha(-kI, 1.0));
  EXPECT_TRUE(r.passed());
  // det [[Re a1, Re a2], [Im a1, Im a2]] = det [[0, 1], [-1, 0]]
  EXPECT_DOUBLE_EQ(r.det(0, 0), 1.0);
}

TEST(Independence, CollinearAndZeroFramesFail) {
  EXPECT_FALSE(check_independence(constant_alpha(1.0, 2.0)).passed());
  EXPECT_FALSE(check_independence(constant_alpha(0.0, 1.0)).passed());
  EXPECT_THROW(require_independent(constant_alpha(1.0, 2.0)), DependentFrame);
}

TEST(Independence, ThresholdIsScaleRelative) {
  for (double s : {1e-4, 1.0, 1e4}) {
    const SeedR31 scaled = r31("1", "0", std::to_string(s).c_str(), std::to_string(s).c_str());
    EXPECT_TRUE(check_independence(build_alpha(scaled, unit_square(5))).passed()) << s;
  }
}

TEST(Independence, DependentArcFrame) {
  // With h2 = 0 both fields are purely imaginary multiples of the same real direction.
  EXPECT_FALSE(check_independence(build_alpha(r31("1", "0", "1", "0"), unit_square(5))).passed());
  EXPECT_FALSE(check_independence(build_alpha(r31("1", "0.5", "1", "0"), unit_square(5))).passed());
}

TEST(Commutator, ConstantFieldsCommuteExactly) {
  const CommutatorReport r = check_commutator(constant_alpha(Complex{0.3, -1.2}, Complex{2.0, 0.7}));
  EXPECT_EQ(r.max_residual, 0.0);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(check_commutator(build_alpha(golden(), unit_square(9))).max_residual, 0.0);
}

TEST(Commutator, LinearNonCommutingFieldsFail) {
  const AlphaField a = sample_alpha(unit_square(17), [](double x, double) {
    return std::pair{-kI * (x + 1.0), Complex{1.0}};
  });
  const CommutatorReport r = check_commutator(a);
  EXPECT_NEAR(r.max_residual, 1.0, 1e-12);
  EXPECT_FALSE(r.passed());
}

TEST(Commutator, DiscreteBracketConvergesAtSecondOrder) {
  // a = -i sin x, b = 1 + i cos y: [a, b] = i (sin x sin y + cos x).
  auto error = [](std::size_t n) {
    const GridDomain d = unit_square(n);
    const AlphaField a = sample_alpha(d, [](double x, double y) {
      return std::pair{-kI * std::sin(x), Complex{1.0, std::cos(y)}};
    });
    double e = 0.0;
    for_interior(d, [&](std::size_t i, std::size_t j) {
      const Complex p = a.a1(i, j), q = a.a2(i, j);
      const Complex bracket = directional(p, fd::dx(a.a2, d, i, j), fd::dy(a.a2, d, i, j)) -
                              directional(q, fd::dx(a.a1, d, i, j), fd::dy(a.a1, d, i, j));
      const Complex exact = kI * (std::sin(d.x(i)) * std::sin(d.y(j)) + std::cos(d.x(i)));
      e = std::max(e, std::abs(bracket - exact));
    });
    return e;
  };
  const double ratio = error(17) / error(33);
  EXPECT_GT(ratio, 3.5);
  EXPECT_LT(ratio, 4.5);
}

TEST(Commutator, HolomorphicSeedWithConstantCurvatureCommutes) {
  // alpha1 / alpha2 is constant when f2 = 0 and h is constant.
  const CommutatorReport r = check_commutator(build_alpha(r31("exp(z)", "0", "1", "0.5"), unit_square(33)));
  EXPECT_TRUE(r.passed());
  const CommutatorReport bad = check_commutator(build_alpha(r31("cosh(z)", "sinh(z)", "1", "1"), unit_square(33)));
  EXPECT_FALSE(bad.passed());
}

TEST(DualForms, GoldenFrame) {
  const DualForms w = dual_at(-kI, 1.0);
  EXPECT_EQ(w.w1[0], 0.0);
  EXPECT_EQ(w.w1[1], -1.0);
  EXPECT_EQ(w.w2[0], 1.0);
  EXPECT_EQ(w.w2[1], 0.0);
}

TEST(DualForms, CoordinateFrameIsSelfDualAndScalingHalves) {
  const DualForms id = dual_at(1.0, kI);
  EXPECT_EQ(id.w1[0], 1.0);
  EXPECT_EQ(id.w1[1], 0.0);
  EXPECT_EQ(id.w2[0], 0.0);
  EXPECT_EQ(id.w2[1], 1.0);
  test::Rng rng(2);
  for (int n = 0; n < 100; ++n) {
    const Complex a = rng.complex(), b = rng.complex();
    if (std::abs(frame_det(a, b)) < 1e-3) continue;
    const DualForms w = dual_at(a, b), w2 = dual_at(2.0 * a, 2.0 * b);
    for (int k = 0; k < 2; ++k) {
      EXPECT_NEAR(w2.w1[k], 0.5 * w.w1[k], 1e-12);
      EXPECT_NEAR(w2.w2[k], 0.5 * w.w2[k], 1e-12);
    }
  }
}

TEST(DualForms, DualityHoldsOnRandomFrames) {
  test::Rng rng(4);
  for (int n = 0; n < 1000; ++n) {
    const Complex a = rng.complex(), b = rng.complex();
    if (std::abs(frame_det(a, b)) < 1e-3) continue;
    const DualForms w = dual_at(a, b);
    auto apply = [](const std::array<double, 2>& row, Complex v) { return row[0] * v.real() + row[1] * v.imag(); };
    const double scale = 1.0 / std::abs(frame_det(a, b));
    EXPECT_NEAR(apply(w.w1, a), 1.0, 1e-12 * scale);
    EXPECT_NEAR(apply(w.w1, b), 0.0, 1e-12 * scale);
    EXPECT_NEAR(apply(w.w2, a), 0.0, 1e-12 * scale);
    EXPECT_NEAR(apply(w.w2, b), 1.0, 1e-12 * scale);
  }
}

TEST(DualForms, RefusesIllConditionedFrames) {
  EXPECT_THROW(dual_forms(constant_alpha(1.0, 2.0)), DependentFrame);
  EXPECT_THROW(dual_forms(constant_alpha(Complex{1.0, 1e-12}, 1.0)), DependentFrame);
}
