#include <doctest.h>

#include <cmath>

#include "apblow/field.hpp"

using namespace apblow;

namespace {

BallSystem& shared_system() {
  static BallSystem sys = BallSystem::build(Domain{2}, 0.49, 200);
  return sys;
}

// Ball 1 with center 0 and r_1 = 1 (R = 2), so local offsets can be read as
// absolute coordinates; containment is irrelevant for the formula checks.
BallSystem& unit_bump_system() {
  static BallSystem sys =
      BallSystem::from_parts(Domain{2}, 0.49, {Ball{DDVec(vec_of({0.0, 0.0})), 2.0}});
  return sys;
}

Jet bump_at(double x0, double x1) {
  // anchor units are R = 2, so halve the absolute coordinates
  return eval_bump_jet(unit_bump_system(), 1, {1, vec_of({0.5 * x0, 0.5 * x1})});
}

}  // namespace

TEST_CASE("bump jet reproduces the hand-evaluated closed forms") {
  // r = 1, k = 1, x = (0.3, 0.4): t = 0.5, bracket = 1/2 + t^2/2 - t = 0.125.
  Jet J = bump_at(0.3, 0.4);
  CHECK(J.value[0] == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(J.value[1] == doctest::Approx(-0.0375).epsilon(1e-14));
  // d1 u1 = k x2 x1 (1/r - 1/t) = 0.4*0.3*(1-2) = -0.12, d2 u2 = +0.12.
  CHECK(J.grad[0][0] == doctest::Approx(-0.12).epsilon(1e-14));
  CHECK(J.grad[1][1] == doctest::Approx(0.12).epsilon(1e-14));
  // d2 u1 = k (bracket + x2^2 (1/r - 1/t)) = 0.125 - 0.16 = -0.035.
  CHECK(J.grad[0][1] == doctest::Approx(-0.035).epsilon(1e-14));
  CHECK(J.grad[1][0] == doctest::Approx(-(0.125 - 0.09)).epsilon(1e-14));
}

TEST_CASE("bump jet vanishes outside its ball and is continuous at the sphere") {
  Jet outside = bump_at(0.9, 0.9);
  CHECK(value_max_entry(outside) == 0.0);
  CHECK(grad_max_entry(outside) == 0.0);
  CHECK(hess_max_entry(outside) == 0.0);

  // bracket(r_k) = 0: values and first derivatives tend to zero at the sphere.
  Jet nearby = bump_at(0.0, 1.0 - 1e-8);
  CHECK(value_max_entry(nearby) <= 1e-7);
  CHECK(grad_max_entry(nearby) <= 1e-7);
  CHECK(nearby.boundary_flag);
}

TEST_CASE("bump jet center limits") {
  Jet at_center = eval_bump_jet(unit_bump_system(), 1, {1, Vec(2)});
  CHECK(value_max_entry(at_center) == 0.0);
  CHECK(at_center.grad[0][1] == doctest::Approx(0.5));
  CHECK(at_center.grad[1][0] == doctest::Approx(-0.5));
  CHECK(at_center.grad[0][0] == 0.0);
  CHECK_FALSE(at_center.hessian_defined);
}

TEST_CASE("pointwise envelopes hold on bump samples") {
  const BallSystem& sys = shared_system();
  QuadratureSpec probe{Scheme::pseudo_random, 4000, 5, 0};
  for (int k : {1, 7, 40}) {
    BallSampler sampler(2, 0.5, probe);
    double rk = sys.ball(k).r();
    for (uint64_t i = 0; i < probe.samples; ++i) {
      Jet J = eval_bump_jet(sys, k, {k, sampler.offset(i)});
      CHECK(value_max_entry(J) <= k * rk * (1 + 1e-12));
      CHECK(grad_max_entry(J) <= 2.0 * k * (1 + 1e-12));
      CHECK(hess_max_entry(J) <= 4.0 * k / rk * (1 + 1e-12));
    }
  }
}

TEST_CASE("lift jet formulas") {
  Domain d{2};
  const double cw = 0.25;
  Jet origin = eval_lift_jet(d, cw, Vec(2));
  CHECK(value_max_entry(origin) == 0.0);
  CHECK(origin.grad[1][0] == doctest::Approx(cw));   // d1 w2 = cw
  CHECK(origin.grad[0][1] == doctest::Approx(-cw));  // d2 w1 = -cw
  CHECK(divergence(origin) == 0.0);

  Jet half = eval_lift_jet(d, cw, vec_of({0.5, 0.0}));
  CHECK(half.value[0] == 0.0);
  CHECK(half.value[1] == doctest::Approx(0.375 * cw));

  QuadratureSpec probe{Scheme::pseudo_random, 2000, 9, 0};
  BallSampler sampler(2, 1.0, probe);
  for (uint64_t i = 0; i < probe.samples; ++i) {
    Jet J = eval_lift_jet(d, cw, sampler.offset(i));
    CHECK(divergence(J) == 0.0);  // exact cancellation by construction
  }
}

TEST_CASE("calibrated lift scale keeps the gradient under 1") {
  Domain d{2};
  double cw = calibrate_lift_scale(d);
  // sup |grad w~| = 2 on the boundary equator, so cw = 1/(1.01 * 2).
  CHECK(cw == doctest::Approx(1.0 / 2.02).epsilon(1e-12));
  QuadratureSpec probe{Scheme::low_discrepancy, 20000, 31, 0};
  BallSampler sampler(d.n, 1.0, probe);
  double sup = 0.0;
  for (uint64_t i = 0; i < probe.samples; ++i)
    sup = std::max(sup, grad_frobenius(eval_lift_jet(d, cw, sampler.offset(i))));
  CHECK(sup < 1.0);

  double cw3 = calibrate_lift_scale(Domain{3});
  CHECK(cw3 == doctest::Approx(1.0 / 2.02).epsilon(1e-6));
}

TEST_CASE("field jet equals the lift away from all balls") {
  const BallSystem& sys = shared_system();
  FieldConfig cfg(&sys, sys.size());
  QuadratureSpec probe{Scheme::pseudo_random, 200, 21, 0};
  BallSampler sampler(2, 1.0, probe);
  int clean = 0;
  for (uint64_t i = 0; i < probe.samples; ++i) {
    AnchoredPoint x{0, sampler.offset(i)};
    Jet bumps = eval_bump_sum(cfg, x, cfg.truncation());
    if (value_max_entry(bumps) != 0.0 || grad_max_entry(bumps) != 0.0) continue;
    ++clean;
    Jet field = eval_field_jet(cfg, x);
    Jet lift = eval_lift_jet(sys.domain(), cfg.lift_scale(), x.offset);
    for (int a = 0; a < 2; ++a) {
      CHECK(field.value[a] == lift.value[a]);
      for (int b = 0; b < 2; ++b) CHECK(field.grad[a][b] == lift.grad[a][b]);
    }
  }
  CHECK(clean > 50);  // most of the domain is untouched by the 200 balls
}

TEST_CASE("field divergence vanishes to rounding everywhere") {
  const BallSystem& sys = shared_system();
  FieldConfig cfg(&sys, sys.size());
  QuadratureSpec probe{Scheme::pseudo_random, 3000, 2, 0};
  BallSampler sampler(2, 1.0, probe);
  for (uint64_t i = 0; i < probe.samples; ++i) {
    int anchor = static_cast<int>(i % 101);
    Jet J = eval_field_jet(cfg, {anchor, sampler.offset(i)});
    CHECK(std::fabs(divergence(J)) <= 1e-12 * (1.0 + grad_frobenius(J)));
  }
}

TEST_CASE("window form matches the full sum on untouched good-region points") {
  const BallSystem& sys = shared_system();
  FieldConfig cfg(&sys, sys.size());
  RegionParams params{0.07};
  const int l = 8;
  QuadratureSpec probe{Scheme::pseudo_random, 3000, 13, 0};
  BallSampler sampler(2, 0.5, probe);
  int hits = 0;
  for (uint64_t i = 0; i < probe.samples; ++i) {
    AnchoredPoint x{l, sampler.offset(i)};
    if (!region_membership(sys, params, l, x, Region::M)) continue;
    ++hits;
    Jet full = eval_bump_sum(cfg, x, cfg.truncation());
    Jet win = eval_window_sum(cfg, l, x);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        CHECK(full.grad[a][b] ==
              doctest::Approx(win.grad[a][b]).epsilon(1e-12).scale(1.0 + std::fabs(win.grad[a][b])));
  }
  CHECK(hits > 100);
}

TEST_CASE("window form at l = 1 is the first bump alone") {
  const BallSystem& sys = shared_system();
  FieldConfig cfg(&sys, sys.size());
  AnchoredPoint x{1, vec_of({0.2, 0.1})};
  Jet win = eval_window_sum(cfg, 1, x);
  Jet one = eval_bump_jet(sys, 1, x);
  for (int a = 0; a < 2; ++a) CHECK(win.value[a] == one.value[a]);
}

TEST_CASE("symmetric gradient algebra") {
  Jet J(2);
  J.grad[0][1] = 1.5;
  J.grad[1][0] = -1.5;  // antisymmetric
  CHECK(sym_gradient(J).magnitude == 0.0);

  Jet S(2);
  S.grad[0][0] = 2.0;
  S.grad[0][1] = 0.5;
  S.grad[1][0] = 0.5;
  S.grad[1][1] = -1.0;
  SymGrad D = sym_gradient(S);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) CHECK(D.d[a][b] == S.grad[a][b]);

  Jet U(2);
  U.grad[0][1] = 3.0;  // G = [[0, a], [0, 0]]
  SymGrad H = sym_gradient(U);
  CHECK(H.d[0][1] == doctest::Approx(1.5));
  CHECK(H.d[1][0] == doctest::Approx(1.5));
  CHECK(H.magnitude == doctest::Approx(3.0 / std::sqrt(2.0)));

  Jet Id(2);
  Id.grad[0][0] = Id.grad[1][1] = 1.0;
  CHECK(divergence(Id) == 2.0);
}

TEST_CASE("shear transform algebra") {
  SymGrad zero;
  zero.n = 2;
  CHECK(f_transform(zero, 3.0).magnitude == 0.0);

  SymGrad D;
  D.n = 2;
  D.d[0][0] = 3.0;
  D.magnitude = 3.0;
  SymGrad F2 = f_transform(D, 2.0);
  CHECK(F2.d[0][0] == 3.0);

  for (double p : {1.3, 2.0, 3.7}) {
    SymGrad F = f_transform(D, p);
    double lhs = F.magnitude * F.magnitude;
    double rhs = std::pow(1.0 + D.magnitude, p - 2.0) * D.magnitude * D.magnitude;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
  }
  CHECK_THROWS_AS(f_transform(D, 1.0), Error);
}

TEST_CASE("weight values") {
  // (1+|Du|)^(p-2) with |Du| = 3: p=3 -> 4, p=1.5 -> 1/2, p=2 -> 1.
  CHECK(std::pow(1.0 + 3.0, 3.0 - 2.0) == 4.0);
  CHECK(std::pow(1.0 + 3.0, 1.5 - 2.0) == 0.5);
  const BallSystem& sys = shared_system();
  FieldConfig cfg(&sys, sys.size());
  for (double off : {0.1, 0.3, 0.45}) {
    AnchoredPoint x{3, vec_of({off, -off})};
    CHECK(weight_value(cfg, 2.0, x) == 1.0);
    CHECK(weight_value(cfg, 3.0, x) > 0.0);
  }
}

TEST_CASE("deep single-bump derivatives pass a scale-free difference test") {
  BallSystem sys = BallSystem::build(Domain{2}, 0.49, 520);
  const int k = 500;
  const double rk = sys.ball(k).r();
  const double Rk = sys.ball(k).R;
  AnchoredPoint base{k, vec_of({0.17, 0.11})};
  Jet J0 = eval_bump_jet(sys, k, base);
  CHECK(J0.hessian_defined);

  const double h = 1e-4;  // anchor units
  double err[2] = {0.0, 0.0};
  for (int half = 0; half < 2; ++half) {
    double step = half ? h / 2 : h;
    for (int j = 0; j < 2; ++j) {
      AnchoredPoint xp = base, xm = base;
      xp.offset[j] += step;
      xm.offset[j] -= step;
      Jet Jp = eval_bump_jet(sys, k, xp);
      Jet Jm = eval_bump_jet(sys, k, xm);
      for (int i = 0; i < 2; ++i) {
        double fd = (Jp.value[i] - Jm.value[i]) / (2 * step * Rk);
        err[half] = std::max(err[half], std::fabs(fd - J0.grad[i][j]));
      }
    }
  }
  // second-order error shrinks by ~4 when the step halves
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.15));
  CHECK(err[0] < 1e-3 * rk / rk);  // absolute scale sanity: errors are O(h^2) in local units
}

TEST_CASE("anchored chart bound is enforced") {
  const BallSystem& sys = shared_system();
  FieldConfig cfg(&sys, sys.size());
  AnchoredPoint bad{3, vec_of({5.0, 0.0})};
  CHECK_THROWS_AS(eval_field_jet(cfg, bad), Error);
}

TEST_CASE("the lift never erases the bump field: 1 + |Du| >= |Du0|") {
  const BallSystem& sys = shared_system();
  FieldConfig cfg(&sys, sys.size());
  QuadratureSpec probe{Scheme::pseudo_random, 2000, 6, 0};
  BallSampler sampler(2, 1.0, probe);
  for (uint64_t i = 0; i < probe.samples; ++i) {
    int anchor = static_cast<int>(i % 101);
    AnchoredPoint x{anchor, sampler.offset(i)};
    double du_full = sym_gradient(eval_field_jet(cfg, x)).magnitude;
    double du_bumps = sym_gradient(eval_bump_sum(cfg, x, cfg.truncation())).magnitude;
    CHECK(1.0 + du_full >= du_bumps * (1.0 - 1e-12));
  }
}

TEST_CASE("hessians are symmetric in the two derivative indices") {
  const BallSystem& sys = shared_system();
  FieldConfig cfg(&sys, sys.size());
  QuadratureSpec probe{Scheme::pseudo_random, 500, 14, 0};
  BallSampler sampler(2, 0.8, probe);
  for (uint64_t i = 0; i < probe.samples; ++i) {
    Jet J = eval_field_jet(cfg, {static_cast<int>(i % 31), sampler.offset(i)});
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c) CHECK(J.hess[a][b][c] == J.hess[a][c][b]);
  }
}

TEST_CASE("triangle bound on the untouched region") {
  // |Du0| >= |d1 u1^l| - n * sum_{k <= cbrt(l)} max_ij |d_i u_j^k| pointwise.
  const BallSystem& sys = shared_system();
  FieldConfig cfg(&sys, sys.size());
  const int n = 2;
  for (int l : {8, 27}) {
    QuadratureSpec probe{Scheme::pseudo_random, 2000, 15 + static_cast<uint64_t>(l), 0};
    BallSampler sampler(2, 0.5, probe);
    RegionParams params{0.07};
    for (uint64_t i = 0; i < probe.samples; ++i) {
      AnchoredPoint x{l, sampler.offset(i)};
      if (!region_membership(sys, params, l, x, Region::M)) continue;
      double du0 = sym_gradient(eval_bump_sum(cfg, x, cfg.truncation())).magnitude;
      double shear = std::fabs(eval_bump_jet(sys, l, x).grad[0][0]);
      double window = 0.0;
      for (int k = 1; k <= std::min(icbrt(l), l - 1); ++k)
        window += grad_max_entry(eval_bump_jet(sys, k, x));
      CHECK(du0 >= (shear - n * window) * (1.0 - 1e-12));
    }
  }
}

TEST_CASE("planar bump shear magnitude matches its polar closed form") {
  // In the plane the symmetric gradient of a single bump is purely radial:
  // D11 = -D22 = k xi1 xi2 (1 - 1/tau), D12 = (k/2)(xi2^2 - xi1^2)(1 - 1/tau),
  // so |D|^2 = k^2 (1 - 1/tau)^2 [2 xi1^2 xi2^2 + (xi2^2 - xi1^2)^2 / 2]
  //          = k^2 tau^2 (1 - tau)^2 / 2.
  const BallSystem& sys = shared_system();
  QuadratureSpec probe{Scheme::pseudo_random, 3000, 27, 0};
  BallSampler sampler(2, 0.5, probe);
  for (int k : {1, 9, 60}) {
    for (uint64_t i = 0; i < probe.samples / 3; ++i) {
      AnchoredPoint x{k, sampler.offset(i)};
      LocalFrame f = sys.local_frame(x, k);
      if (f.dist < 1e-6 || f.dist > 1 - 1e-6) continue;
      double got = sym_gradient(eval_bump_jet(sys, k, x)).magnitude;
      double want = k * f.dist * (1.0 - f.dist) / std::sqrt(2.0);
      CHECK(got == doctest::Approx(want).epsilon(1e-13));
    }
  }
}
