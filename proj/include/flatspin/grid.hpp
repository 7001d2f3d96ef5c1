#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <type_traits>
#include <vector>

#include "flatspin/cquat.hpp"
#include "flatspin/error.hpp"

namespace flatspin {

/// Closed rectangle [x0, x1] x [y0, y1] sampled at nx by ny points, endpoints included.
struct GridDomain {
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  std::size_t nx = 3, ny = 3;

  [[nodiscard]] double hx() const { return (x1 - x0) / static_cast<double>(nx - 1); }
  [[nodiscard]] double hy() const { return (y1 - y0) / static_cast<double>(ny - 1); }
  [[nodiscard]] double h() const { return std::max(hx(), hy()); }
  [[nodiscard]] double x(std::size_t i) const { return x0 + static_cast<double>(i) * hx(); }
  [[nodiscard]] double y(std::size_t j) const { return y0 + static_cast<double>(j) * hy(); }
  [[nodiscard]] Complex point(std::size_t i, std::size_t j) const { return {x(i), y(j)}; }
  [[nodiscard]] std::size_t size() const { return nx * ny; }

  void validate() const {
    if (!(x0 < x1) || !(y0 < y1)) throw InvalidDomain("bounds must satisfy x0 < x1 and y0 < y1");
    if (!std::isfinite(x0) || !std::isfinite(x1) || !std::isfinite(y0) || !std::isfinite(y1)) {
      throw InvalidDomain("bounds must be finite");
    }
    if (nx < 3 || ny < 3) throw InvalidDomain("at least 3 samples per direction are required");
  }

  /// Same rectangle with (n - 1) * factor + 1 samples per direction.
  [[nodiscard]] GridDomain refined(std::size_t factor) const {
    GridDomain d = *this;
    d.nx = (nx - 1) * factor + 1;
    d.ny = (ny - 1) * factor + 1;
    return d;
  }

  friend bool operator==(const GridDomain&, const GridDomain&) = default;
};

/// Values sampled on a GridDomain; index (i, j) is x-major within rows of constant y.
template <class T>
class Field {
 public:
  Field() = default;
  Field(std::size_t nx, std::size_t ny, T init = T{}) : nx_(nx), ny_(ny), data_(nx * ny, init) {}
  explicit Field(const GridDomain& d, T init = T{}) : Field(d.nx, d.ny, init) {}

  [[nodiscard]] std::size_t nx() const { return nx_; }
  [[nodiscard]] std::size_t ny() const { return ny_; }
  [[nodiscard]] std::size_t size() const { return data_.size(); }
  [[nodiscard]] bool empty() const { return data_.empty(); }

  T& operator()(std::size_t i, std::size_t j) { return data_[j * nx_ + i]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[j * nx_ + i]; }

  [[nodiscard]] const std::vector<T>& values() const { return data_; }
  std::vector<T>& values() { return data_; }

 private:
  std::size_t nx_ = 0, ny_ = 0;
  std::vector<T> data_;
};

/// Samples fn(i, j) on every grid point.
template <class Fn>
auto sample(const GridDomain& d, Fn&& fn) {
  using T = std::invoke_result_t<Fn&, std::size_t, std::size_t>;
  Field<T> f(d);
  for (std::size_t j = 0; j < d.ny; ++j) {
    for (std::size_t i = 0; i < d.nx; ++i) f(i, j) = fn(i, j);
  }
  return f;
}

// Magnitudes used by residual reports.
inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(Complex v) { return std::abs(v); }
inline double magnitude(const CQuat& q) { return norm(q); }
inline double magnitude(const MinkVec& v) { return norm(v); }
inline double magnitude(const Mat2C& m) { return norm(m); }
inline double magnitude(const ImQuat& a) { return norm(to_cquat(a)); }

template <class T>
double max_magnitude(const Field<T>& f) {
  double m = 0.0;
  for (const auto& v : f.values()) m = std::max(m, magnitude(v));
  return m;
}

// Second order central differences, valid at interior points only.
namespace fd {

template <class T>
T dx(const Field<T>& f, const GridDomain& d, std::size_t i, std::size_t j) {
  return (f(i + 1, j) - f(i - 1, j)) * (0.5 / d.hx());
}

template <class T>
T dy(const Field<T>& f, const GridDomain& d, std::size_t i, std::size_t j) {
  return (f(i, j + 1) - f(i, j - 1)) * (0.5 / d.hy());
}

template <class T>
T dxx(const Field<T>& f, const GridDomain& d, std::size_t i, std::size_t j) {
  const double h = d.hx();
  return (f(i + 1, j) - f(i, j) * 2.0 + f(i - 1, j)) * (1.0 / (h * h));
}

template <class T>
T dyy(const Field<T>& f, const GridDomain& d, std::size_t i, std::size_t j) {
  const double h = d.hy();
  return (f(i, j + 1) - f(i, j) * 2.0 + f(i, j - 1)) * (1.0 / (h * h));
}

template <class T>
T dxy(const Field<T>& f, const GridDomain& d, std::size_t i, std::size_t j) {
  return (f(i + 1, j + 1) - f(i + 1, j - 1) - f(i - 1, j + 1) + f(i - 1, j - 1)) *
         (0.25 / (d.hx() * d.hy()));
}

/// Partial derivatives of a field at an interior point.
template <class T>
struct Jet {
  T x, y, xx, yy, xy;
};

template <class T>
Jet<T> jet(const Field<T>& f, const GridDomain& d, std::size_t i, std::size_t j) {
  return {dx(f, d, i, j), dy(f, d, i, j), dxx(f, d, i, j), dyy(f, d, i, j), dxy(f, d, i, j)};
}

}  // namespace fd

/// Visits interior points (boundary ring excluded) in grid order.
template <class Fn>
void for_interior(const GridDomain& d, Fn&& fn) {
  for (std::size_t j = 1; j + 1 < d.ny; ++j) {
    for (std::size_t i = 1; i + 1 < d.nx; ++i) fn(i, j);
  }
}

}  // namespace flatspin
