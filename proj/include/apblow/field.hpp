#pragma once

// Closed-form evaluation of the compactly supported rotational bumps u^k, the
// boundary lift w, and the truncated field u = sum_k u^k + w, together with
// the derived objects (gradient, Hessian, symmetric gradient, shear weight).
//
// All bump formulas are evaluated in ball-local coordinates xi = (x - x^k)/r_k
// with the radial bracket written as (1-tau)^2/2, so evaluation stays accurate
// for radii far below the absolute resolution of doubles. Trace cancellation
// of each solenoidal term is exact in floating point because the paired
// diagonal entries share one product.

#include <array>

#include "apblow/geometry.hpp"

namespace apblow {

inline constexpr double kDefaultSmoothMargin = 1e-6;

struct Jet {
  int n = 0;
  bool hessian_defined = true;   // false within the center margin of some bump
  bool boundary_flag = false;    // within margin of some bump sphere (one-sided values)
  std::array<double, kMaxDim> value{};
  std::array<std::array<double, kMaxDim>, kMaxDim> grad{};  // grad[i][j] = d_j u_i
  std::array<std::array<std::array<double, kMaxDim>, kMaxDim>, kMaxDim>
      hess{};  // hess[i][j][k] = d_j d_k u_i, symmetric in (j,k)

  Jet() = default;
  explicit Jet(int dim) : n(dim) {}
};

struct SymGrad {
  int n = 0;
  std::array<std::array<double, kMaxDim>, kMaxDim> d{};
  double magnitude = 0.0;  // Frobenius norm
};

class FieldConfig {
 public:
  // lift_scale <= 0 requests calibration (largest scale with sup |grad w| < 1).
  FieldConfig(const BallSystem* sys, int truncation, double lift_scale = 0.0,
              double smooth_margin = kDefaultSmoothMargin);

  const BallSystem& system() const { return *sys_; }
  int truncation() const { return truncation_; }
  double lift_scale() const { return lift_scale_; }
  double smooth_margin() const { return eta_; }

 private:
  const BallSystem* sys_;
  int truncation_;
  double lift_scale_;
  double eta_;
};

// Scale for the rotational lift w(x) = c (1-|x|^2)(-x2, x1, 0, ...): the
// estimated sup of the unscaled gradient over the closed ball, times a 1%
// safety factor, inverted.
double calibrate_lift_scale(const Domain& domain);

Jet eval_bump_jet(const BallSystem& sys, int k, const AnchoredPoint& x);
Jet eval_lift_jet(const Domain& domain, double lift_scale, const Vec& x_abs);
Jet eval_field_jet(const FieldConfig& cfg, const AnchoredPoint& x);

// In-place accumulation used by the batch evaluators.
void accumulate_bump_jet(Jet& jet, const BallSystem& sys, int k, const AnchoredPoint& x,
                         double smooth_margin = kDefaultSmoothMargin);
void accumulate_bump_frame(Jet& jet, int k, double r_k, const LocalFrame& frame,
                           double smooth_margin = kDefaultSmoothMargin);
void accumulate_lift_jet(Jet& jet, double lift_scale, const Vec& x_abs);

// Bump sum without the lift, truncated at min(max_k, config truncation).
Jet eval_bump_sum(const FieldConfig& cfg, const AnchoredPoint& x, int max_k);
// Two-part closed form valid on M_l: u^l + sum_{k <= icbrt(l), k != l} u^k.
Jet eval_window_sum(const FieldConfig& cfg, int l, const AnchoredPoint& x);

SymGrad sym_gradient(const Jet& jet);
double divergence(const Jet& jet);
SymGrad f_transform(const SymGrad& d, double p);
double weight_value(const FieldConfig& cfg, double p, const AnchoredPoint& x);

double grad_frobenius(const Jet& jet);
double grad_max_entry(const Jet& jet);
double hess_max_entry(const Jet& jet);
double hess_frobenius2(const Jet& jet);
double value_max_entry(const Jet& jet);

}  // namespace apblow
