#include "apblow/field.hpp"

#include <cmath>

namespace apblow {

namespace {

// Jet of the k-th bump at local offset xi (units of r_k), tau = |xi|.
// Amplitude k/r_k, radial bracket r_k * (1-tau)^2 / 2, support tau < 1.
void accumulate_bump(Jet& J, int k, double r, const Vec& xi, double tau, double eta) {
  const int n = J.n;
  if (tau >= 1.0) {
    if (tau - 1.0 <= eta) J.boundary_flag = true;
    return;
  }
  if (1.0 - tau <= eta) J.boundary_flag = true;

  const double amp_g = static_cast<double>(k);
  const double amp_v = amp_g * r;
  const double amp_h = amp_g / r;

  if (tau == 0.0) {
    // Removable limit at the center: value 0, gradient keeps only the delta
    // terms with bracket value 1/2. The Hessian has no limit there.
    J.grad[0][1] += amp_g * 0.5;
    J.grad[1][0] -= amp_g * 0.5;
    J.hessian_defined = false;
    return;
  }
  if (tau <= eta) J.hessian_defined = false;

  const double phi = 0.5 * (1.0 - tau) * (1.0 - tau);
  const double s = (tau - 1.0) / tau;  // = 1 - 1/tau, nonpositive on the support

  J.value[0] += amp_v * (xi[1] * phi);
  J.value[1] -= amp_v * (xi[0] * phi);

  // The diagonal pair shares one product: the trace contribution cancels
  // exactly in floating point.
  const double cross = xi[0] * xi[1] * s;
  J.grad[0][0] += amp_g * cross;
  J.grad[1][1] -= amp_g * cross;
  J.grad[0][1] += amp_g * (phi + xi[1] * xi[1] * s);
  J.grad[1][0] -= amp_g * (phi + xi[0] * xi[0] * s);
  for (int j = 2; j < n; ++j) {
    J.grad[0][j] += amp_g * (xi[1] * xi[j] * s);
    J.grad[1][j] -= amp_g * (xi[0] * xi[j] * s);
  }

  if (!std::isfinite(amp_h * 4.0)) {
    // k/r_k exceeds the double range; second derivatives of this bump are
    // not representable. Values and first derivatives above remain valid.
    J.hessian_defined = false;
    return;
  }
  const double inv_tau3 = 1.0 / (tau * tau * tau);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double dsum0 = (i == 1 ? xi[j] : 0.0) + (j == 1 ? xi[i] : 0.0) + (i == j ? xi[1] : 0.0);
      const double dsum1 = (i == 0 ? xi[j] : 0.0) + (j == 0 ? xi[i] : 0.0) + (i == j ? xi[0] : 0.0);
      const double core = (xi[i] * xi[j]) * inv_tau3;
      const double h0 = amp_h * (dsum0 * s + xi[1] * core);
      const double h1 = -amp_h * (dsum1 * s + xi[0] * core);
      J.hess[0][i][j] += h0;
      J.hess[1][i][j] += h1;
      if (i != j) {
        J.hess[0][j][i] += h0;
        J.hess[1][j][i] += h1;
      }
    }
  }
}

void accumulate_lift(Jet& J, double cw, const Vec& x) {
  const int n = J.n;
  const double g = 1.0 - x.norm2();

  J.value[0] += cw * g * (-x[1]);
  J.value[1] += cw * g * x[0];

  const double cross = cw * (2.0 * (x[0] * x[1]));
  J.grad[0][0] += cross;
  J.grad[1][1] -= cross;
  J.grad[0][1] += cw * (2.0 * (x[1] * x[1]) - g);
  J.grad[1][0] += cw * (g - 2.0 * (x[0] * x[0]));
  for (int j = 2; j < n; ++j) {
    J.grad[0][j] += cw * (2.0 * (x[j] * x[1]));
    J.grad[1][j] -= cw * (2.0 * (x[j] * x[0]));
  }

  const double c2 = 2.0 * cw;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double h0 = c2 * ((i == j ? x[1] : 0.0) + (i == 1 ? x[j] : 0.0) + (j == 1 ? x[i] : 0.0));
      const double h1 = -c2 * ((i == j ? x[0] : 0.0) + (i == 0 ? x[j] : 0.0) + (j == 0 ? x[i] : 0.0));
      J.hess[0][i][j] += h0;
      J.hess[1][i][j] += h1;
      if (i != j) {
        J.hess[0][j][i] += h0;
        J.hess[1][j][i] += h1;
      }
    }
  }
}

}  // namespace

double calibrate_lift_scale(const Domain& domain) {
  domain.validate();
  const int n = domain.n;
  double sup = 0.0;
  auto probe = [&](const Vec& x) {
    Jet J = eval_lift_jet(domain, 1.0, x);
    sup = std::max(sup, grad_frobenius(J));
  };
  // Axis and diagonal boundary points (the sup sits on the boundary equator),
  // then a fixed dense sample of the closed ball.
  for (int i = 0; i < n; ++i) {
    Vec e(n);
    e[i] = 1.0;
    probe(e);
    e[i] = -1.0;
    probe(e);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Vec e(n);
      e[i] = e[j] = std::sqrt(0.5);
      probe(e);
    }
  QuadratureSpec spec{Scheme::low_discrepancy, 1 << 13, 0x4C494654ull, 0};
  BallSampler interior(n, 1.0, spec);
  for (uint64_t i = 0; i < spec.samples; ++i) probe(interior.offset(i));
  BallSampler shell(n, 1.0, spec.with_stream(7));
  for (uint64_t i = 0; i < 2048; ++i) {
    Vec y = shell.offset(i);
    double nn = y.norm();
    if (nn > 0) probe((1.0 / nn) * y);
  }
  return 1.0 / (1.01 * sup);
}

FieldConfig::FieldConfig(const BallSystem* sys, int truncation, double lift_scale,
                         double smooth_margin)
    : sys_(sys), truncation_(truncation), lift_scale_(lift_scale), eta_(smooth_margin) {
  if (!sys_) raise(Errc::config_error, "field config requires a ball system");
  if (truncation_ < 1 || truncation_ > sys_->size())
    raise(Errc::config_error, "field truncation out of range");
  if (!(eta_ > 0.0) || eta_ >= 0.5) raise(Errc::config_error, "smooth margin must lie in (0, 1/2)");
  if (lift_scale_ <= 0.0) lift_scale_ = calibrate_lift_scale(sys_->domain());
}

void accumulate_bump_jet(Jet& jet, const BallSystem& sys, int k, const AnchoredPoint& x,
                         double smooth_margin) {
  LocalFrame f = sys.local_frame(x, k);
  accumulate_bump(jet, k, sys.ball(k).r(), f.xi, f.dist, smooth_margin);
}

void accumulate_bump_frame(Jet& jet, int k, double r_k, const LocalFrame& frame,
                           double smooth_margin) {
  accumulate_bump(jet, k, r_k, frame.xi, frame.dist, smooth_margin);
}

void accumulate_lift_jet(Jet& jet, double lift_scale, const Vec& x_abs) {
  accumulate_lift(jet, lift_scale, x_abs);
}

Jet eval_bump_jet(const BallSystem& sys, int k, const AnchoredPoint& x) {
  validate_anchored(x);
  Jet J(sys.domain().n);
  accumulate_bump_jet(J, sys, k, x);
  return J;
}

Jet eval_lift_jet(const Domain& domain, double lift_scale, const Vec& x_abs) {
  Jet J(domain.n);
  accumulate_lift(J, lift_scale, x_abs);
  return J;
}

Jet eval_bump_sum(const FieldConfig& cfg, const AnchoredPoint& x, int max_k) {
  const BallSystem& sys = cfg.system();
  validate_anchored(x);
  Jet J(sys.domain().n);
  const int cut = std::min(max_k, cfg.truncation());
  visit_candidates(sys, x, cut, [&](int k, const LocalFrame& f) {
    accumulate_bump(J, k, sys.ball(k).r(), f.xi, f.dist, cfg.smooth_margin());
    return true;
  });
  return J;
}

Jet eval_field_jet(const FieldConfig& cfg, const AnchoredPoint& x) {
  Jet J = eval_bump_sum(cfg, x, cfg.truncation());
  accumulate_lift(J, cfg.lift_scale(), cfg.system().absolute(x));
  return J;
}

Jet eval_window_sum(const FieldConfig& cfg, int l, const AnchoredPoint& x) {
  const BallSystem& sys = cfg.system();
  if (l < 1 || l > cfg.truncation()) raise(Errc::index_out_of_range, "window index out of range");
  Jet J(sys.domain().n);
  const int w = std::min(icbrt(l), l - 1);
  for (int k = 1; k <= w; ++k) {
    LocalFrame f = sys.local_frame(x, k);
    accumulate_bump(J, k, sys.ball(k).r(), f.xi, f.dist, cfg.smooth_margin());
  }
  LocalFrame f = sys.local_frame(x, l);
  accumulate_bump(J, l, sys.ball(l).r(), f.xi, f.dist, cfg.smooth_margin());
  return J;
}

SymGrad sym_gradient(const Jet& jet) {
  SymGrad D;
  D.n = jet.n;
  double s2 = 0.0;
  for (int i = 0; i < jet.n; ++i) {
    for (int j = 0; j < jet.n; ++j) {
      double v = 0.5 * (jet.grad[i][j] + jet.grad[j][i]);
      D.d[i][j] = v;
      s2 += v * v;
    }
  }
  D.magnitude = std::sqrt(s2);
  return D;
}

double divergence(const Jet& jet) {
  double t = 0.0;
  for (int i = 0; i < jet.n; ++i) t += jet.grad[i][i];
  return t;
}

SymGrad f_transform(const SymGrad& d, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) raise(Errc::domain_error, "exponent p must lie in (1, inf)");
  SymGrad out = d;
  const double factor = std::pow(1.0 + d.magnitude, 0.5 * (p - 2.0));
  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.n; ++j) out.d[i][j] = factor * d.d[i][j];
  out.magnitude = factor * d.magnitude;
  return out;
}

double weight_value(const FieldConfig& cfg, double p, const AnchoredPoint& x) {
  if (!(p > 1.0) || !std::isfinite(p)) raise(Errc::domain_error, "exponent p must lie in (1, inf)");
  SymGrad D = sym_gradient(eval_field_jet(cfg, x));
  return std::pow(1.0 + D.magnitude, p - 2.0);
}

double grad_frobenius(const Jet& jet) {
  double s = 0.0;
  for (int i = 0; i < jet.n; ++i)
    for (int j = 0; j < jet.n; ++j) s += jet.grad[i][j] * jet.grad[i][j];
  return std::sqrt(s);
}

double grad_max_entry(const Jet& jet) {
  double m = 0.0;
  for (int i = 0; i < jet.n; ++i)
    for (int j = 0; j < jet.n; ++j) m = std::max(m, std::fabs(jet.grad[i][j]));
  return m;
}

double hess_max_entry(const Jet& jet) {
  double m = 0.0;
  for (int i = 0; i < jet.n; ++i)
    for (int j = 0; j < jet.n; ++j)
      for (int k = 0; k < jet.n; ++k) m = std::max(m, std::fabs(jet.hess[i][j][k]));
  return m;
}

double hess_frobenius2(const Jet& jet) {
  double s = 0.0;
  for (int i = 0; i < jet.n; ++i)
    for (int j = 0; j < jet.n; ++j)
      for (int k = 0; k < jet.n; ++k) s += jet.hess[i][j][k] * jet.hess[i][j][k];
  return s;
}

double value_max_entry(const Jet& jet) {
  double m = 0.0;
  for (int i = 0; i < jet.n; ++i) m = std::max(m, std::fabs(jet.value[i]));
  return m;
}

}  // namespace apblow
