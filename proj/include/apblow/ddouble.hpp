#pragma once

// Double-double arithmetic (an unevaluated sum of two doubles) used for ball
// centers and center differences. The error-free transformations are the
// classical ones (Dekker/Knuth two-sum, FMA-based two-prod); only the handful
// of operations the geometry needs are provided.

#include <cmath>

namespace apblow {

struct DDouble {
  double hi = 0.0;
  double lo = 0.0;

  constexpr DDouble() = default;
  constexpr DDouble(double x) : hi(x) {}
  constexpr DDouble(double h, double l) : hi(h), lo(l) {}
};

inline DDouble two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

// Requires |a| >= |b| (or a == 0).
inline DDouble quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}

inline DDouble two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline DDouble operator+(DDouble a, DDouble b) {
  DDouble s = two_sum(a.hi, b.hi);
  DDouble t = two_sum(a.lo, b.lo);
  double c = s.lo + t.hi;
  DDouble v = quick_two_sum(s.hi, c);
  double w = t.lo + v.lo;
  return quick_two_sum(v.hi, w);
}

inline DDouble operator-(DDouble a) { return {-a.hi, -a.lo}; }
inline DDouble operator-(DDouble a, DDouble b) { return a + (-b); }

inline DDouble operator*(DDouble a, double b) {
  DDouble p = two_prod(a.hi, b);
  return quick_two_sum(p.hi, std::fma(a.lo, b, p.lo));
}

inline DDouble operator*(DDouble a, DDouble b) {
  DDouble p = two_prod(a.hi, b.hi);
  double t = std::fma(a.hi, b.lo, std::fma(a.lo, b.hi, p.lo));
  return quick_two_sum(p.hi, t);
}

inline DDouble operator/(DDouble a, double b) {
  double q1 = a.hi / b;
  DDouble p = two_prod(q1, b);
  double q2 = (((a.hi - p.hi) - p.lo) + a.lo) / b;
  return quick_two_sum(q1, q2);
}

inline double to_double(DDouble a) { return a.hi + a.lo; }

inline DDouble dd_sqr(DDouble a) { return a * a; }

inline DDouble dd_sqrt(DDouble a) {
  if (a.hi <= 0.0) return {0.0, 0.0};  // callers guard the domain
  double s = std::sqrt(a.hi);
  DDouble s2 = two_prod(s, s);
  double e = (((a.hi - s2.hi) - s2.lo) + a.lo) / (2.0 * s);
  return quick_two_sum(s, e);
}

inline bool operator<(DDouble a, DDouble b) {
  return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}
inline bool operator>(DDouble a, DDouble b) { return b < a; }
inline bool operator<=(DDouble a, DDouble b) { return !(b < a); }
inline bool operator>=(DDouble a, DDouble b) { return !(a < b); }
inline bool operator==(DDouble a, DDouble b) { return a.hi == b.hi && a.lo == b.lo; }

}  // namespace apblow
