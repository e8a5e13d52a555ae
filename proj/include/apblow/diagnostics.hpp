#pragma once

// Batch verification suites: pointwise estimate checks for the bump values,
// gradients and Hessians, the exact two-part decomposition on M_l, the shear
// and background sandwich bounds, finite-difference validation of the closed
// forms, partial-sum Sobolev norm series, and the weighted Hessian
// integrability computation. Vacuous inequalities are flagged, never passed
// silently.

#include <vector>

#include "apblow/field.hpp"
#include "apblow/quadrature.hpp"

namespace apblow {

inline constexpr double kOneSidedTol = 1e-12;

struct BoundsCheckReport {
  int k = 0;
  uint64_t samples = 0;
  double worst_value_ratio = 0.0;  // |u^k_m| / (k r_k)
  double worst_grad_ratio = 0.0;   // |d_i u^k_m| / (2k)
  double worst_hess_ratio = 0.0;   // |d_j d_i u^k_m| / (4k / r_k)
  bool pass(double tol = kOneSidedTol) const {
    return worst_value_ratio <= 1.0 + tol && worst_grad_ratio <= 1.0 + tol &&
           worst_hess_ratio <= 1.0 + tol;
  }
};
BoundsCheckReport bounds_check(const FieldConfig& cfg, int k, const QuadratureSpec& quadrature);

struct DecompositionReport {
  int l = 0;
  uint64_t samples_total = 0;
  uint64_t samples_in_region = 0;
  double max_rel_deviation = 0.0;
};
DecompositionReport decomposition_check(const FieldConfig& cfg, const RegionParams& params, int l,
                                        const QuadratureSpec& quadrature);

struct SandwichReport {
  int l = 0;
  // (a) shear lower bound on G_l samples
  double shear_threshold = 0.0;
  uint64_t shear_samples = 0, shear_passes = 0;
  double shear_worst = 0.0;  // smallest observed |d_1 u^l_1|
  // (b) combined lower bound on M_l samples; vacuous when the threshold <= 0
  double lower_threshold = 0.0;
  bool lower_vacuous = true;
  uint64_t lower_samples = 0, lower_passes = 0;
  // (c) background upper bound on E_l \ union_{k>=l} B_k samples
  double background_threshold = 0.0;
  uint64_t background_samples = 0, background_passes = 0;
  double background_worst = 0.0;  // largest observed |Du0|
  double crossover = 0.0;         // index where the lower bound stops being vacuous
  bool pass() const {
    bool a = shear_samples > 0 && shear_passes == shear_samples;
    bool b = lower_vacuous || lower_passes == lower_samples;
    bool c = background_samples > 0 && background_passes == background_samples;
    return a && b && c;
  }
};
SandwichReport sandwich_check(const FieldConfig& cfg, const RegionParams& params, int l,
                              const QuadratureSpec& quadrature);

struct FDReport {
  uint64_t points = 0;
  uint64_t grad_floored = 0, hess_floored = 0;
  double worst_grad_dev = 0.0;  // max |err(h)/err(h/2) - 4| among non-floored
  double worst_hess_dev = 0.0;
  bool pass() const { return worst_grad_dev <= 0.5 && worst_hess_dev <= 0.5; }
};
// Central differences at steps h and h/2 (in anchor units) against the
// analytic gradient and Hessian; points must clear the smoothness margin or
// NonSmoothPoint is raised.
FDReport finite_difference_check(const FieldConfig& cfg, const std::vector<AnchoredPoint>& points,
                                 double h);

enum class SeriesMode { grad_ls, hess_lq };

struct SeriesRow {
  int k = 0;
  double term = 0.0;   // max over components of the sampled L-norm over B_k
  double bound = 0.0;  // 2k |B_k|^(1/s)  resp.  (4k/r_k) |B_k|^(1/q)
  double cum_term = 0.0;
  double cum_bound = 0.0;
};
struct SeriesReport {
  SeriesMode mode = SeriesMode::grad_ls;
  double exponent = 2.0;
  double majorant = 0.0;  // closed-form geometric majorant of the full series
  std::vector<SeriesRow> rows;
};
SeriesReport sobolev_partial_norms(const FieldConfig& cfg, SeriesMode mode, double exponent,
                                   int kmax, const QuadratureSpec& quadrature);

struct HessianIntegralRow {
  int truncation = 0;
  double value = 0.0;       // integral of (1+|Du|)^(p-2) |hess u|^2
  double unweighted = 0.0;  // integral of |hess u|^2 on the same samples
  double holder_hess52 = 0.0;  // (integral of |hess u|^(5/2))^(4/5), p > 2 only
  double holder_du = 0.0;      // (integral of |Du|^(5(p-2)))^(1/5), p > 2 only
};
struct HessianIntegralReport {
  double p = 2.0;
  uint64_t samples = 0;
  std::vector<HessianIntegralRow> rows;
};
// Importance-sampled over a mixture of the domain and the inner balls; all
// truncations share one sample stream so increments are coupled.
HessianIntegralReport weighted_hessian_integral(const FieldConfig& cfg, double p,
                                                const std::vector<int>& truncations,
                                                const QuadratureSpec& quadrature);

// Max residual of hess[i][j][k] = d_j D_ik + d_k D_ij - d_i D_jk over the jet,
// normalized by the largest Hessian entry.
double hessian_symgrad_identity_residual(const Jet& jet);

struct DivergenceReport {
  uint64_t samples = 0;
  double worst_rel = 0.0;  // max |div u| / (1 + |grad u|)
};
// Anchors cycle over the domain frame and balls 1..max_anchor.
DivergenceReport divergence_check(const FieldConfig& cfg, const QuadratureSpec& quadrature,
                                  int max_anchor);

}  // namespace apblow
