#pragma once

// Numerical A_alpha machinery for the shear weight (1 + |Du|)^{p-2}:
// averaged integrals of the weight and its dual power over balls, the
// composed ratio, scans along the ball family exhibiting blow-up, the p<2
// duality map, and the explicit constants of the averaged-integral lower
// bound.

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "apblow/field.hpp"
#include "apblow/quadrature.hpp"

namespace apblow {

double dual_exponent(double alpha);  // alpha/(alpha-1); DomainError for alpha <= 1

struct WeightParams {
  double p = 3.0;
  double alpha = 2.0;

  void validate(bool allow_p2 = false) const {
    if (!(p > 1.0) || !std::isfinite(p)) raise(Errc::domain_error, "p must lie in (1, inf)");
    if (!allow_p2 && p == 2.0) raise(Errc::domain_error, "p = 2 gives the trivial unit weight");
    if (!(alpha > 1.0) || !std::isfinite(alpha)) raise(Errc::domain_error, "alpha must exceed 1");
  }
  double alpha_prime() const { return dual_exponent(alpha); }
};

// (p-2)/(1-alpha) + 2; exceeds 2 exactly when p < 2.
double p0_map(const WeightParams& params);

struct APRatioEstimate {
  int l = 0;  // 0 when the ball is not a family member
  double mean_w = 0.0;
  double mean_dual = 0.0;
  double ratio = 0.0;
  double se_w = 0.0;
  double se_dual = 0.0;
  double se_ratio = 0.0;
  uint64_t samples = 0;
};

// Composes mean(w) * mean(dual)^(alpha-1) from per-sample (w, dual) pairs,
// with delta-method standard errors. fn(i, w, dual) fills the pair.
template <class PairFn>
APRatioEstimate ap_ratio_core(uint64_t nsamples, double alpha, PairFn fn) {
  struct Acc {
    PairMoments m;
    void merge(const Acc& o) { m.merge(o.m); }
  };
  Acc acc = chunked_reduce<Acc>(nsamples, [&](uint64_t b, uint64_t e) {
    Acc a;
    for (uint64_t i = b; i < e; ++i) {
      double w = 0.0, d = 0.0;
      fn(i, w, d);
      a.m.add(w, d);
    }
    return a;
  });
  APRatioEstimate est;
  est.samples = acc.m.n;
  est.mean_w = acc.m.mean_w();
  est.mean_dual = acc.m.mean_d();
  est.ratio = est.mean_w * std::pow(est.mean_dual, alpha - 1.0);
  const double N = static_cast<double>(acc.m.n);
  est.se_w = std::sqrt(acc.m.var_w() / N);
  est.se_dual = std::sqrt(acc.m.var_d() / N);
  const double A = std::pow(est.mean_dual, alpha - 1.0);
  const double B = (alpha - 1.0) * est.mean_w * std::pow(est.mean_dual, alpha - 2.0);
  double var = A * A * acc.m.var_w() + B * B * acc.m.var_d() + 2.0 * A * B * acc.m.cov_wd();
  est.se_ratio = std::sqrt(std::max(0.0, var) / N);
  return est;
}

// Ratio over the family ball E_l.
APRatioEstimate ap_ratio(const FieldConfig& cfg, const WeightParams& params, int l,
                         const QuadratureSpec& quadrature);
// Ratio over an arbitrary ball B(center, radius) contained in the domain.
APRatioEstimate ap_ratio(const FieldConfig& cfg, const WeightParams& params, const Vec& center,
                         double radius, const QuadratureSpec& quadrature);

// Explicit constants of the averaged-integral lower bound. The dual factor is
// grouped to match the background envelope (2 + 2n l^(2/3)) exactly:
// c3 * (c4 + l^(2/3)) = 2 + 2n l^(2/3) with c3 = 2n, c4 = 1/n.
struct BoundConstants {
  int n = 2;
  double p = 3.0;
  double epsilon = 0.07;

  double c1() const { return 1.0 / (3.0 * std::pow(2.0, n)); }
  double shear_coefficient() const { return epsilon * epsilon * epsilon / (1.0 - epsilon); }
  double background_coefficient() const { return 2.0 * n; }
  double c3() const { return 2.0 * n; }
  double c4() const { return 1.0 / n; }
  // Index where shear growth c*l overtakes the background 2n l^(2/3).
  double crossover() const {
    double q = background_coefficient() / shear_coefficient();
    return q * q * q;
  }
};

enum class BoundStatus { positive, not_yet_positive };

struct BoundValue {
  BoundStatus status = BoundStatus::not_yet_positive;
  double value = std::numeric_limits<double>::quiet_NaN();
  double crossover = 0.0;
};

// c1/c3^(alpha-1) * ((c l - 2n l^(2/3)) / (c4 + l^(2/3)))^(p-2) when the inner
// numerator is positive; NotYetPositive otherwise (the bound is vacuous at
// small l and that is reported, not hidden). Requires p > 2.
BoundValue lower_bound(const BoundConstants& consts, const WeightParams& params, double l);

struct Subdomain {
  Vec center;
  double radius = 0.0;
};

struct APScanRow {
  int l = 0;
  APRatioEstimate est;
  BoundValue bound;
};

struct APScanReport {
  std::vector<APScanRow> rows;
  double loglog_slope = 0.0;
  int balls_in_subdomain = 0;
};

APScanReport ap_scan(const FieldConfig& cfg, const WeightParams& params, const std::vector<int>& ls,
                     const QuadratureSpec& quadrature, const RegionParams& region_params,
                     const std::optional<Subdomain>& subdomain = {}, bool allow_trivial = false);

// Relative deviation between the direct A_alpha expression for p in (1,2) and
// its p0-transformed form on the same sample stream; an exact algebraic
// identity, so the deviation is pure rounding.
double duality_identity_check(const FieldConfig& cfg, const WeightParams& params, int l,
                              const QuadratureSpec& quadrature);

double loglog_slope(const std::vector<std::pair<double, double>>& points);

}  // namespace apblow
