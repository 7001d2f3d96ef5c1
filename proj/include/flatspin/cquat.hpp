#pragma once

// Complexified quaternions H^C = {q1 1 + q2 I + q3 J + q4 K : qk complex} with
// I^2 = J^2 = K^2 = -1 and IJ = -JI = K, together with the structures built on
// them: the complex bilinear form H, the two conjugations, the Minkowski
// embedding of R^{3,1}, the spin group action, the imaginary part Im H^C and
// the algebra isomorphism onto 2x2 complex matrices.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <ostream>

#include "flatspin/error.hpp"

namespace flatspin {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

/// Invertibility threshold, relative to the squared largest coefficient.
inline constexpr double kInvertEps = 1e-12;
/// Allowed deviation of H(p,p) from 1 for spin elements.
inline constexpr double kSpinTolerance = 1e-9;
/// Imaginary residue that spin_act clamps to zero (relative to the result size).
inline constexpr double kRealityEps = 1e-9;

struct CQuat {
  Complex q1{}, q2{}, q3{}, q4{};

  static constexpr CQuat one() { return {1.0, 0.0, 0.0, 0.0}; }
  static constexpr CQuat unit_i() { return {0.0, 1.0, 0.0, 0.0}; }
  static constexpr CQuat unit_j() { return {0.0, 0.0, 1.0, 0.0}; }
  static constexpr CQuat unit_k() { return {0.0, 0.0, 0.0, 1.0}; }

  [[nodiscard]] std::array<Complex, 4> coeffs() const { return {q1, q2, q3, q4}; }

  CQuat& operator+=(const CQuat& o) {
    q1 += o.q1;
    q2 += o.q2;
    q3 += o.q3;
    q4 += o.q4;
    return *this;
  }
  CQuat& operator-=(const CQuat& o) {
    q1 -= o.q1;
    q2 -= o.q2;
    q3 -= o.q3;
    q4 -= o.q4;
    return *this;
  }
  CQuat& operator*=(Complex s) {
    q1 *= s;
    q2 *= s;
    q3 *= s;
    q4 *= s;
    return *this;
  }

  friend bool operator==(const CQuat&, const CQuat&) = default;
};

inline CQuat operator+(CQuat a, const CQuat& b) { return a += b; }
inline CQuat operator-(CQuat a, const CQuat& b) { return a -= b; }
inline CQuat operator-(const CQuat& a) { return {-a.q1, -a.q2, -a.q3, -a.q4}; }
inline CQuat operator*(CQuat a, Complex s) { return a *= s; }
inline CQuat operator*(Complex s, CQuat a) { return a *= s; }
inline CQuat operator*(CQuat a, double s) { return a *= Complex{s}; }
inline CQuat operator*(double s, CQuat a) { return a *= Complex{s}; }
inline CQuat operator/(CQuat a, Complex s) { return a *= (1.0 / s); }
inline CQuat operator/(CQuat a, double s) { return a *= Complex{1.0 / s}; }

/// Quaternion product under the table I^2 = J^2 = K^2 = -1, IJ = K, JK = I, KI = J.
inline CQuat operator*(const CQuat& a, const CQuat& b) {
  return {a.q1 * b.q1 - a.q2 * b.q2 - a.q3 * b.q3 - a.q4 * b.q4,
          a.q1 * b.q2 + a.q2 * b.q1 + a.q3 * b.q4 - a.q4 * b.q3,
          a.q1 * b.q3 - a.q2 * b.q4 + a.q3 * b.q1 + a.q4 * b.q2,
          a.q1 * b.q4 + a.q2 * b.q3 - a.q3 * b.q2 + a.q4 * b.q1};
}

inline CQuat mul(const CQuat& p, const CQuat& q) { return p * q; }

/// H(p,q) = p1 q1 + p2 q2 + p3 q3 + p4 q4; complex bilinear and symmetric.
inline Complex bilinear_h(const CQuat& p, const CQuat& q) {
  return p.q1 * q.q1 + p.q2 * q.q2 + p.q3 * q.q3 + p.q4 * q.q4;
}

/// q-bar: negates the I, J, K parts. Anti-automorphism.
inline CQuat conj_bar(const CQuat& q) { return {q.q1, -q.q2, -q.q3, -q.q4}; }

/// q-hat: complex conjugation of every coefficient. Automorphism.
inline CQuat conj_hat(const CQuat& q) {
  return {std::conj(q.q1), std::conj(q.q2), std::conj(q.q3), std::conj(q.q4)};
}

inline double max_abs(const CQuat& q) {
  return std::max({std::abs(q.q1), std::abs(q.q2), std::abs(q.q3), std::abs(q.q4)});
}

/// Euclidean norm of the coefficient vector in C^4.
inline double norm(const CQuat& q) {
  return std::sqrt(std::norm(q.q1) + std::norm(q.q2) + std::norm(q.q3) + std::norm(q.q4));
}

/// Inverse q-bar / H(q,q). Zero divisors (H(q,q) = 0) are refused.
inline CQuat invert(const CQuat& q) {
  const Complex h = bilinear_h(q, q);
  const double scale = max_abs(q);
  if (!(std::abs(h) > kInvertEps * scale * scale)) {
    throw NotInvertible("H(q,q) vanishes (zero divisor or near-degenerate element)");
  }
  return conj_bar(q) / h;
}

inline std::ostream& operator<<(std::ostream& os, const CQuat& q) {
  return os << "(" << q.q1 << ", " << q.q2 << " I, " << q.q3 << " J, " << q.q4 << " K)";
}

// ---------------------------------------------------------------------------
// Minkowski space R^{3,1}, metric -dx1^2 + dx2^2 + dx3^2 + dx4^2.

struct MinkVec {
  double x1 = 0, x2 = 0, x3 = 0, x4 = 0;

  MinkVec& operator+=(const MinkVec& o) {
    x1 += o.x1;
    x2 += o.x2;
    x3 += o.x3;
    x4 += o.x4;
    return *this;
  }
  MinkVec& operator-=(const MinkVec& o) {
    x1 -= o.x1;
    x2 -= o.x2;
    x3 -= o.x3;
    x4 -= o.x4;
    return *this;
  }
  MinkVec& operator*=(double s) {
    x1 *= s;
    x2 *= s;
    x3 *= s;
    x4 *= s;
    return *this;
  }
  friend bool operator==(const MinkVec&, const MinkVec&) = default;
};

inline MinkVec operator+(MinkVec a, const MinkVec& b) { return a += b; }
inline MinkVec operator-(MinkVec a, const MinkVec& b) { return a -= b; }
inline MinkVec operator-(const MinkVec& a) { return {-a.x1, -a.x2, -a.x3, -a.x4}; }
inline MinkVec operator*(MinkVec a, double s) { return a *= s; }
inline MinkVec operator*(double s, MinkVec a) { return a *= s; }
inline MinkVec operator/(MinkVec a, double s) { return a *= 1.0 / s; }

inline double minkowski(const MinkVec& a, const MinkVec& b) {
  return -a.x1 * b.x1 + a.x2 * b.x2 + a.x3 * b.x3 + a.x4 * b.x4;
}

inline double norm(const MinkVec& v) {
  return std::sqrt(v.x1 * v.x1 + v.x2 * v.x2 + v.x3 * v.x3 + v.x4 * v.x4);
}

inline std::ostream& operator<<(std::ostream& os, const MinkVec& v) {
  return os << "(" << v.x1 << ", " << v.x2 << ", " << v.x3 << ", " << v.x4 << ")";
}

/// e = i x1 1 + x2 I + x3 J + x4 K; the image is {q : conj_hat(conj_bar(q)) = -q}.
inline CQuat embed(const MinkVec& v) { return {Complex{0.0, v.x1}, v.x2, v.x3, v.x4}; }

/// Size of the part of q lying outside the real image of R^{3,1}.
inline double reality_defect(const CQuat& q) {
  return std::max({std::abs(q.q1.real()), std::abs(q.q2.imag()), std::abs(q.q3.imag()),
                   std::abs(q.q4.imag())});
}

/// Drops the non-real residue of q without checking it.
inline MinkVec extract_minkowski(const CQuat& q) {
  return {q.q1.imag(), q.q2.real(), q.q3.real(), q.q4.real()};
}

/// Checked projection onto R^{3,1}: residue above kRealityEps (relative) throws.
inline MinkVec to_minkowski(const CQuat& q) {
  const double scale = std::max(1.0, max_abs(q));
  if (reality_defect(q) > kRealityEps * scale) {
    throw RealityViolation("quaternion is not in the image of R^{3,1}");
  }
  return extract_minkowski(q);
}

// ---------------------------------------------------------------------------
// Spin(3,1) = {p : H(p,p) = 1}

class SpinElem {
 public:
  /// Throws NotASpinElement if |H(p,p) - 1| exceeds kSpinTolerance.
  explicit SpinElem(const CQuat& p) : value_(p) {
    if (std::abs(bilinear_h(p, p) - 1.0) > kSpinTolerance) {
      throw NotASpinElement("|H(p,p) - 1| exceeds tolerance");
    }
  }
  static SpinElem identity() { return SpinElem(CQuat::one()); }

  /// Rescales p by the principal root of H(p,p); H(p,p) must be away from 0.
  static SpinElem normalized(const CQuat& p) {
    const Complex h = bilinear_h(p, p);
    if (std::abs(h) < 1e-300) throw NotASpinElement("H(p,p) = 0 cannot be normalized");
    return SpinElem(p / std::sqrt(h));
  }

  [[nodiscard]] const CQuat& value() const { return value_; }
  /// For spin elements the inverse is the bar conjugate.
  [[nodiscard]] CQuat inverse() const { return conj_bar(value_); }

 private:
  CQuat value_;
};

/// The double cover Phi(p): v -> p v conj_hat(p)^{-1}.
inline MinkVec spin_act(const SpinElem& p, const MinkVec& v) {
  const CQuat& q = p.value();
  const CQuat w = q * embed(v) * conj_bar(conj_hat(q));
  return to_minkowski(w);
}

/// Unchecked action on a quaternion: p q conj_hat(p)^{-1}.
inline CQuat spin_act(const SpinElem& p, const CQuat& v) {
  const CQuat& q = p.value();
  return q * v * conj_bar(conj_hat(q));
}

// ---------------------------------------------------------------------------
// Im H^C = C iI + C J + C iK, stored in the basis (iI, J, iK).

struct ImQuat {
  Complex c1{}, c2{}, c3{};

  friend bool operator==(const ImQuat&, const ImQuat&) = default;
};

inline CQuat to_cquat(const ImQuat& a) { return {0.0, kI * a.c1, a.c2, kI * a.c3}; }

/// Coordinates of the pure part of q in (iI, J, iK); the scalar part is discarded.
inline ImQuat to_imquat(const CQuat& q) { return {-kI * q.q2, q.q3, -kI * q.q4}; }

inline ImQuat operator+(const ImQuat& a, const ImQuat& b) {
  return {a.c1 + b.c1, a.c2 + b.c2, a.c3 + b.c3};
}
inline ImQuat operator-(const ImQuat& a, const ImQuat& b) {
  return {a.c1 - b.c1, a.c2 - b.c2, a.c3 - b.c3};
}
inline ImQuat operator*(Complex s, const ImQuat& a) { return {s * a.c1, s * a.c2, s * a.c3}; }
inline ImQuat operator*(const ImQuat& a, double s) { return Complex{s} * a; }

/// a x b = (ab - ba) / 2, closed in Im H^C.
inline ImQuat cross(const ImQuat& a, const ImQuat& b) {
  const CQuat p = to_cquat(a);
  const CQuat q = to_cquat(b);
  return to_imquat((p * q - q * p) * 0.5);
}

/// [a, b, c] = H(a x b, c). Equals minus the determinant of the (iI, J, iK) coordinates.
inline Complex mixed(const ImQuat& a, const ImQuat& b, const ImQuat& c) {
  return bilinear_h(to_cquat(cross(a, b)), to_cquat(c));
}

/// Point u1 u2 of the Grassmannian of oriented timelike planes, for an
/// orthonormal pair with <u1,u1> = -1 and <u2,u2> = 1 (Clifford product u1 conj_hat(u2)).
inline ImQuat grassmannian_point(const MinkVec& u1, const MinkVec& u2) {
  return to_imquat(embed(u1) * conj_hat(embed(u2)));
}

// ---------------------------------------------------------------------------
// Spinor pairing <<psi, psi'>> = conj_bar(psi') psi and Clifford action of vectors.

inline CQuat spinor_pairing(const CQuat& psi, const CQuat& psi2) { return conj_bar(psi2) * psi; }

/// [X . phi] = [X] conj_hat([phi]) for a vector X.
inline CQuat clifford_vector_action(const MinkVec& x, const CQuat& phi) {
  return embed(x) * conj_hat(phi);
}

// ---------------------------------------------------------------------------
// 2x2 complex matrices and the isomorphism A : H^C -> M_2(C).

struct Mat2C {
  Complex a{}, b{}, c{}, d{};  // [[a, b], [c, d]]

  static constexpr Mat2C identity() { return {1.0, 0.0, 0.0, 1.0}; }
  friend bool operator==(const Mat2C&, const Mat2C&) = default;
};

inline Mat2C operator*(const Mat2C& m, const Mat2C& n) {
  return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d, m.c * n.a + m.d * n.c,
          m.c * n.b + m.d * n.d};
}
inline Mat2C operator+(const Mat2C& m, const Mat2C& n) {
  return {m.a + n.a, m.b + n.b, m.c + n.c, m.d + n.d};
}
inline Mat2C operator-(const Mat2C& m, const Mat2C& n) {
  return {m.a - n.a, m.b - n.b, m.c - n.c, m.d - n.d};
}
inline Mat2C operator*(Complex s, const Mat2C& m) { return {s * m.a, s * m.b, s * m.c, s * m.d}; }
inline Mat2C operator*(const Mat2C& m, Complex s) { return s * m; }
inline Mat2C operator*(double s, const Mat2C& m) { return Complex{s} * m; }
inline Mat2C operator*(const Mat2C& m, double s) { return Complex{s} * m; }
inline Mat2C operator/(const Mat2C& m, Complex s) { return (1.0 / s) * m; }
inline Mat2C operator/(const Mat2C& m, double s) { return (1.0 / s) * m; }

inline Complex det(const Mat2C& m) { return m.a * m.d - m.b * m.c; }

/// Conjugate transpose.
inline Mat2C adjoint(const Mat2C& m) {
  return {std::conj(m.a), std::conj(m.c), std::conj(m.b), std::conj(m.d)};
}

inline Mat2C inverse(const Mat2C& m) {
  const Complex dt = det(m);
  const double scale = std::max({std::abs(m.a), std::abs(m.b), std::abs(m.c), std::abs(m.d)});
  if (!(std::abs(dt) > kInvertEps * scale * scale)) throw NotInvertible("singular 2x2 matrix");
  return Mat2C{m.d, -m.b, -m.c, m.a} / dt;
}

inline double norm(const Mat2C& m) {
  return std::sqrt(std::norm(m.a) + std::norm(m.b) + std::norm(m.c) + std::norm(m.d));
}

inline std::ostream& operator<<(std::ostream& os, const Mat2C& m) {
  return os << "[[" << m.a << ", " << m.b << "], [" << m.c << ", " << m.d << "]]";
}

/// A(q) = [[q1 + i q2, q3 + i q4], [-q3 + i q4, q1 - i q2]].
inline Mat2C to_mat2(const CQuat& q) {
  return {q.q1 + kI * q.q2, q.q3 + kI * q.q4, -q.q3 + kI * q.q4, q.q1 - kI * q.q2};
}

inline CQuat from_mat2(const Mat2C& m) {
  return {(m.a + m.d) * 0.5, (m.a - m.d) / (2.0 * kI), (m.b - m.c) * 0.5, (m.b + m.c) / (2.0 * kI)};
}

}  // namespace flatspin
