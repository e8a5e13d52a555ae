#pragma once

// Small fixed-capacity vectors. The library supports dimensions 2..kMaxDim;
// jets and points live on the stack so evaluation loops stay allocation-free.

#include <array>
#include <cmath>
#include <cstdint>

#include "apblow/ddouble.hpp"
#include "apblow/errors.hpp"

namespace apblow {

inline constexpr int kMaxDim = 4;

struct Vec {
  int n = 0;
  std::array<double, kMaxDim> c{};

  Vec() = default;
  explicit Vec(int dim) : n(dim) {}
  double& operator[](int i) { return c[static_cast<size_t>(i)]; }
  double operator[](int i) const { return c[static_cast<size_t>(i)]; }

  double norm2() const {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += c[static_cast<size_t>(i)] * c[static_cast<size_t>(i)];
    return s;
  }
  double norm() const { return std::sqrt(norm2()); }
};

inline Vec vec_of(std::initializer_list<double> xs) {
  Vec v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline Vec operator+(Vec a, const Vec& b) {
  for (int i = 0; i < a.n; ++i) a[i] += b[i];
  return a;
}

inline Vec operator*(double s, Vec a) {
  for (int i = 0; i < a.n; ++i) a[i] *= s;
  return a;
}

struct DDVec {
  int n = 0;
  std::array<DDouble, kMaxDim> c{};

  DDVec() = default;
  explicit DDVec(int dim) : n(dim) {}
  explicit DDVec(const Vec& v) : n(v.n) {
    for (int i = 0; i < n; ++i) c[static_cast<size_t>(i)] = DDouble(v[i]);
  }
  DDouble& operator[](int i) { return c[static_cast<size_t>(i)]; }
  DDouble operator[](int i) const { return c[static_cast<size_t>(i)]; }

  Vec rounded() const {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = to_double(c[static_cast<size_t>(i)]);
    return v;
  }
};

inline DDVec operator-(const DDVec& a, const DDVec& b) {
  DDVec d(a.n);
  for (int i = 0; i < a.n; ++i) d[i] = a[i] - b[i];
  return d;
}

inline DDouble dd_norm2(const DDVec& a) {
  DDouble s;
  for (int i = 0; i < a.n; ++i) s = s + dd_sqr(a[i]);
  return s;
}

inline DDouble dd_norm(const DDVec& a) { return dd_sqrt(dd_norm2(a)); }

// Largest integer m >= 0 with m^3 <= x (exact; no reliance on cbrt rounding).
inline int icbrt(int x) {
  if (x < 1) return 0;
  int m = static_cast<int>(std::cbrt(static_cast<double>(x)));
  while (static_cast<long long>(m + 1) * (m + 1) * (m + 1) <= x) ++m;
  while (static_cast<long long>(m) * m * m > x) --m;
  return m;
}

inline double unit_ball_volume(int n) {
  switch (n) {
    case 1: return 2.0;
    case 2: return M_PI;
    case 3: return 4.0 * M_PI / 3.0;
    case 4: return M_PI * M_PI / 2.0;
    default: raise(Errc::domain_error, "unit_ball_volume: unsupported dimension");
  }
}

}  // namespace apblow
