#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "flatspin/cquat.hpp"
#include "support.hpp"

using namespace flatspin;
using flatspin::test::Rng;

namespace {

const CQuat kOne = CQuat::one();
const CQuat kIq = CQuat::unit_i();
const CQuat kJq = CQuat::unit_j();
const CQuat kKq = CQuat::unit_k();

void expect_quat_near(const CQuat& a, const CQuat& b, double tol = 1e-12) {
  EXPECT_LE(norm(a - b), tol) << a << " vs " << b;
}

void expect_vec_near(const MinkVec& a, const MinkVec& b, double tol = 1e-12) {
  EXPECT_LE(norm(a - b), tol) << a << " vs " << b;
}

void expect_mat_near(const Mat2C& a, const Mat2C& b, double tol = 1e-12) {
  EXPECT_LE(norm(a - b), tol) << a << " vs " << b;
}

}  // namespace

TEST(CQuatTable, BasisSquaresAreMinusOne) {
  for (const CQuat& e : {kIq, kJq, kKq}) expect_quat_near(e * e, -kOne);
}

TEST(CQuatTable, CyclicProducts) {
  expect_quat_near(kIq * kJq, kKq);
  expect_quat_near(kJq * kKq, kIq);
  expect_quat_near(kKq * kIq, kJq);
  expect_quat_near(kJq * kIq, -kKq);
}

TEST(CQuatTable, UnitIsNeutral) {
  Rng rng;
  for (int n = 0; n < 100; ++n) {
    const CQuat q = rng.quat();
    expect_quat_near(kOne * q, q);
    expect_quat_near(q * kOne, q);
  }
}

TEST(CQuatTable, ZeroDivisor) {
  const CQuat a = kOne * kI + kJq;
  const CQuat b = kOne * kI - kJq;
  expect_quat_near(a * b, CQuat{});
  EXPECT_NEAR(std::abs(bilinear_h(a, a)), 0.0, 1e-15);
}

TEST(CQuatTable, Associative) {
  Rng rng;
  for (int n = 0; n < 1000; ++n) {
    const CQuat p = rng.quat(), q = rng.quat(), r = rng.quat();
    expect_quat_near((p * q) * r, p * (q * r), 1e-13);
  }
}

TEST(BilinearH, Examples) {
  EXPECT_EQ(bilinear_h(kOne, kOne), Complex(1.0));
  const CQuat iK = kKq * kI;
  EXPECT_NEAR(std::abs(bilinear_h(iK, iK) + 1.0), 0.0, 1e-15);
  Rng rng;
  for (int n = 0; n < 100; ++n) {
    const Complex z = rng.complex(2.0);
    const CQuat q = kOne * std::cos(z) + kIq * std::sin(z);
    EXPECT_NEAR(std::abs(bilinear_h(q, q) - 1.0), 0.0, 1e-12);
  }
}

TEST(BilinearH, SymmetricAndRealPartIsMinkowski) {
  Rng rng;
  for (int n = 0; n < 100; ++n) {
    const CQuat p = rng.quat(), q = rng.quat();
    EXPECT_EQ(bilinear_h(p, q), bilinear_h(q, p));
    const MinkVec v = rng.vec();
    const double expected = -v.x1 * v.x1 + v.x2 * v.x2 + v.x3 * v.x3 + v.x4 * v.x4;
    EXPECT_NEAR(bilinear_h(embed(v), embed(v)).real(), expected, 1e-14);
    EXPECT_NEAR(minkowski(v, v), expected, 1e-14);
  }
}

TEST(Conjugation, Examples) {
  expect_quat_near(conj_bar(kOne + kIq), kOne - kIq);
  expect_quat_near(conj_hat(kOne * kI), kOne * -kI);
  Rng rng;
  for (int n = 0; n < 100; ++n) {
    const CQuat e = embed(rng.vec());
    expect_quat_near(conj_hat(conj_bar(e)), -e);
  }
}

TEST(Conjugation, InvolutionsAndProductLaws) {
  Rng rng;
  for (int n = 0; n < 1000; ++n) {
    const CQuat p = rng.quat(), q = rng.quat();
    expect_quat_near(conj_bar(conj_bar(p)), p, 0.0);
    expect_quat_near(conj_hat(conj_hat(p)), p, 0.0);
    expect_quat_near(conj_bar(p * q), conj_bar(q) * conj_bar(p), 1e-14);
    expect_quat_near(conj_hat(p * q), conj_hat(p) * conj_hat(q), 1e-14);
  }
}

TEST(Invert, Examples) {
  expect_quat_near(invert(kIq), -kIq);
  expect_quat_near(invert(kOne * 2.0), kOne * 0.5);
  EXPECT_THROW(invert(kOne * kI + kJq), NotInvertible);
}

TEST(Invert, RoundTripsOnInvertible) {
  Rng rng;
  for (int n = 0; n < 1000; ++n) {
    const CQuat q = rng.quat();
    if (std::abs(bilinear_h(q, q)) < 1e-3) continue;
    const CQuat inv = invert(q);
    expect_quat_near(q * inv, kOne, 1e-9);
    expect_quat_near(inv * q, kOne, 1e-9);
  }
}

TEST(Invert, RefusesNullElementsAtAnyScale) {
  for (double s : {1e-3, 1.0, 1e6}) {
    const CQuat null = (kOne * kI + kKq) * s;
    EXPECT_THROW(invert(null), NotInvertible) << s;
  }
}

TEST(NormMultiplicativity, RandomSamples) {
  Rng rng;
  for (int n = 0; n < 10000; ++n) {
    const CQuat p = rng.quat(), q = rng.quat();
    const Complex lhs = bilinear_h(p * q, p * q);
    const Complex rhs = bilinear_h(p, p) * bilinear_h(q, q);
    ASSERT_LE(std::abs(lhs - rhs), 1e-10 * std::max(1.0, std::abs(rhs)));
  }
}

TEST(SpinElem, RejectsNonUnit) {
  EXPECT_THROW(SpinElem(kOne * 2.0), NotASpinElement);
  EXPECT_NO_THROW(SpinElem{kOne});
}

TEST(DoubleCover, IdentityActsTrivially) {
  Rng rng;
  for (int n = 0; n < 100; ++n) {
    const MinkVec v = rng.vec();
    expect_vec_near(spin_act(SpinElem::identity(), v), v, 0.0);
  }
}

TEST(DoubleCover, RotationByTwiceTheAngle) {
  for (double r : {0.1, 0.7, 2.0}) {
    const SpinElem p(kOne * std::cos(r) + kIq * std::sin(r));
    expect_vec_near(spin_act(p, MinkVec{0, 0, 1, 0}), MinkVec{0, 0, std::cos(2 * r), std::sin(2 * r)});
  }
}

TEST(DoubleCover, BoostByTwiceTheRapidity) {
  for (double s : {0.1, 0.5, 1.3}) {
    const SpinElem p(kOne * std::cosh(s) + kIq * (kI * std::sinh(s)));
    expect_vec_near(spin_act(p, MinkVec{1, 0, 0, 0}), MinkVec{std::cosh(2 * s), -std::sinh(2 * s), 0, 0},
                    1e-12);
  }
}

TEST(DoubleCover, IsometryAndHomomorphism) {
  Rng rng;
  for (int n = 0; n < 10000; ++n) {
    const SpinElem p = rng.spin();
    const MinkVec v = rng.vec();
    const MinkVec w = spin_act(p, v);
    ASSERT_NEAR(minkowski(w, w), minkowski(v, v), 1e-10 * std::max(1.0, norm(w) * norm(w)));
  }
  for (int n = 0; n < 200; ++n) {
    const SpinElem p = rng.spin(), q = rng.spin();
    const SpinElem pq(p.value() * q.value());
    const MinkVec v = rng.vec();
    const MinkVec lhs = spin_act(pq, v);
    expect_vec_near(lhs, spin_act(p, spin_act(q, v)), 1e-9 * std::max(1.0, norm(lhs)));
  }
}

TEST(DoubleCover, PlusAndMinusGiveTheSameLorentzMap) {
  Rng rng;
  for (int n = 0; n < 100; ++n) {
    const SpinElem p = rng.spin();
    const SpinElem m(-p.value());
    const MinkVec v = rng.vec();
    expect_vec_near(spin_act(p, v), spin_act(m, v), 1e-10 * std::max(1.0, norm(spin_act(p, v))));
  }
}

TEST(ImQuat, CrossAndMixedExamples) {
  const ImQuat iI{1.0, 0.0, 0.0}, J{0.0, 1.0, 0.0}, iK{0.0, 0.0, 1.0};
  const ImQuat c = cross(iI, J);
  EXPECT_NEAR(std::abs(c.c1), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(c.c2), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(c.c3 - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(mixed(iI, J, iK) + 1.0), 0.0, 1e-15);
}

TEST(ImQuat, CrossIsAntisymmetricAndMixedAlternates) {
  Rng rng;
  for (int n = 0; n < 1000; ++n) {
    const ImQuat a = rng.imquat(), b = rng.imquat(), c = rng.imquat();
    const ImQuat aa = cross(a, a);
    EXPECT_LE(std::abs(aa.c1) + std::abs(aa.c2) + std::abs(aa.c3), 1e-15);
    const ImQuat s = cross(a, b) + cross(b, a);
    EXPECT_LE(std::abs(s.c1) + std::abs(s.c2) + std::abs(s.c3), 1e-14);
    const Complex abc = mixed(a, b, c);
    EXPECT_LE(std::abs(abc + mixed(b, a, c)), 1e-13);
    EXPECT_LE(std::abs(abc - mixed(b, c, a)), 1e-13);
    EXPECT_LE(std::abs(mixed(a, a, c)), 1e-13);
  }
}

TEST(ImQuat, MixedIsMinusTheCoordinateDeterminant) {
  Rng rng;
  for (int n = 0; n < 100; ++n) {
    const ImQuat a = rng.imquat(), b = rng.imquat(), c = rng.imquat();
    const Complex det3 = a.c1 * (b.c2 * c.c3 - b.c3 * c.c2) - a.c2 * (b.c1 * c.c3 - b.c3 * c.c1) +
                         a.c3 * (b.c1 * c.c2 - b.c2 * c.c1);
    EXPECT_LE(std::abs(mixed(a, b, c) + det3), 1e-13);
  }
}

TEST(Grassmannian, OrthonormalPairsLandInQ) {
  Rng rng;
  for (int n = 0; n < 1000; ++n) {
    const SpinElem p = rng.spin(0.7);
    const MinkVec u1 = spin_act(p, MinkVec{1, 0, 0, 0});
    const MinkVec u2 = spin_act(p, MinkVec{0, 1, 0, 0});
    const CQuat prod = embed(u1) * conj_hat(embed(u2));
    const double scale = norm(u1) * norm(u2);
    EXPECT_LE(std::abs(prod.q1), 1e-10 * scale);
    const ImQuat G = grassmannian_point(u1, u2);
    EXPECT_LE(std::abs(bilinear_h(to_cquat(G), to_cquat(G)) + 1.0), 1e-9 * scale * scale);
  }
}

TEST(Mat2, Examples) {
  expect_mat_near(to_mat2(kKq), Mat2C{0.0, kI, kI, 0.0}, 0.0);
  expect_mat_near(to_mat2(kOne), Mat2C::identity(), 0.0);
}

TEST(Mat2, DeterminantIsH) {
  Rng rng;
  for (int n = 0; n < 10000; ++n) {
    const CQuat q = rng.quat();
    ASSERT_LE(std::abs(det(to_mat2(q)) - bilinear_h(q, q)), 1e-10 * std::max(1.0, std::abs(bilinear_h(q, q))));
  }
}

TEST(Mat2, HomomorphismConjugationAndRoundTrip) {
  Rng rng;
  for (int n = 0; n < 10000; ++n) {
    const CQuat p = rng.quat(), q = rng.quat();
    ASSERT_LE(norm(to_mat2(p * q) - to_mat2(p) * to_mat2(q)), 1e-10 * std::max(1.0, norm(to_mat2(p * q))));
    ASSERT_LE(norm(to_mat2(conj_hat(conj_bar(q))) - adjoint(to_mat2(q))), 1e-14);
    ASSERT_LE(norm(from_mat2(to_mat2(q)) - q), 1e-14);
  }
}

TEST(Mat2, InverseAndAdjoint) {
  Rng rng;
  for (int n = 0; n < 100; ++n) {
    const CQuat q = rng.quat();
    const Mat2C m = to_mat2(q);
    if (std::abs(det(m)) < 1e-3) continue;
    expect_mat_near(m * inverse(m), Mat2C::identity(), 1e-10);
    expect_mat_near(adjoint(adjoint(m)), m, 0.0);
  }
}

TEST(Minkowski, CheckedExtractionRejectsComplexResidue) {
  EXPECT_THROW(to_minkowski(CQuat{1.0, 0.0, 0.0, 0.0}), RealityViolation);
  const MinkVec v{0.5, -1.0, 2.0, 3.0};
  expect_vec_near(to_minkowski(embed(v)), v, 0.0);
}
