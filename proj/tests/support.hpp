#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <string>

#include "flatspin/cquat.hpp"
#include "flatspin/holoexpr.hpp"
#include "flatspin/seeddomain.hpp"

namespace flatspin::test {

class Rng {
 public:
  explicit Rng(std::uint64_t seed = 20240611) : gen_(seed) {}

  double real(double lo = -1.0, double hi = 1.0) { return std::uniform_real_distribution<>(lo, hi)(gen_); }
  Complex complex(double r = 1.0) { return {real(-r, r), real(-r, r)}; }
  CQuat quat(double r = 1.0) { return {complex(r), complex(r), complex(r), complex(r)}; }
  MinkVec vec(double r = 1.0) { return {real(-r, r), real(-r, r), real(-r, r), real(-r, r)}; }
  ImQuat imquat(double r = 1.0) { return {complex(r), complex(r), complex(r)}; }

  /// Spin element; the rescaling keeps H(p,p) away from zero.
  SpinElem spin(double r = 1.0) {
    for (;;) {
      const CQuat p = quat(r);
      if (std::abs(bilinear_h(p, p)) > 0.1) return SpinElem::normalized(p);
    }
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

inline double rel(double err, double scale) { return err / std::max(1.0, scale); }

inline expr::Expression analytic(const char* s) { return expr::parse(s, expr::Mode::analytic); }
inline expr::Expression real(const char* s) { return expr::parse(s, expr::Mode::real_smooth); }

inline SeedR31 r31(const char* f1, const char* f2, const char* h1, const char* h2) {
  return {analytic(f1), analytic(f2), real(h1), real(h2)};
}

inline SeedArc arc(const char* psi, const char* h1, const char* h2) { return {analytic(psi), real(h1), real(h2)}; }

inline SeedR31 golden() { return r31("1", "0", "1", "1"); }

inline GridDomain unit_square(std::size_t n) { return {0.0, 1.0, 0.0, 1.0, n, n}; }

/// Random well-formed analytic expression text; depth bounds the nesting.
inline std::string random_expression(Rng& rng, int depth) {
  static const char* kFuncs[] = {"exp", "sin", "cos", "sinh", "cosh"};
  auto pick = [&rng](int n) { return static_cast<int>(rng.real(0.0, n - 1e-9)); };
  if (depth <= 0) {
    switch (pick(4)) {
      case 0: return "z";
      case 1: return std::to_string(pick(9) + 1);
      case 2: return "0." + std::to_string(pick(90) + 10) + "i";
      default: return "1.5";
    }
  }
  const std::string a = random_expression(rng, depth - 1);
  switch (pick(7)) {
    case 0: return "(" + a + ")+" + random_expression(rng, depth - 1);
    case 1: return a + "-" + random_expression(rng, depth - 1);
    case 2: return "(" + a + ")*(" + random_expression(rng, depth - 1) + ")";
    case 3: return "(" + a + ")/(2+z*z)";
    case 4: return "(" + a + ")^" + std::to_string(pick(3) + 1);
    case 5: return "-" + a;
    default: return std::string(kFuncs[pick(5)]) + "(" + a + "/3)";
  }
}

}  // namespace flatspin::test
