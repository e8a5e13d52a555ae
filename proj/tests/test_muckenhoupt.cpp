#include <doctest.h>

#include <cmath>

#include "apblow/muckenhoupt.hpp"

using namespace apblow;

namespace {

BallSystem& shared_system() {
  static BallSystem sys = BallSystem::build(Domain{2}, 0.49, 200);
  return sys;
}

FieldConfig& shared_config() {
  static FieldConfig cfg(&shared_system(), shared_system().size());
  return cfg;
}

const QuadratureSpec kQuad{Scheme::low_discrepancy, 50000, 29, 0};

}  // namespace

TEST_CASE("dual exponent") {
  CHECK(dual_exponent(2.0) == 2.0);
  CHECK(dual_exponent(3.0) == doctest::Approx(1.5));
  CHECK(dual_exponent(1.5) == doctest::Approx(3.0));
  CHECK_THROWS_AS(dual_exponent(1.0), Error);
  CHECK_THROWS_AS(dual_exponent(0.5), Error);
}

TEST_CASE("p0 map") {
  CHECK(p0_map({1.5, 2.0}) == doctest::Approx(2.5));
  CHECK(p0_map({1.9, 10.0}) == doctest::Approx(2.0 + 0.1 / 9.0));
  CHECK(p0_map({1.999, 2.0}) == doctest::Approx(2.001));
  CHECK(p0_map({1.2, 3.0}) > 2.0);
  CHECK_THROWS_AS(p0_map({2.5, 2.0}), Error);
  CHECK_THROWS_AS(p0_map({1.5, 1.0}), Error);
}

TEST_CASE("constant weight gives ratio one") {
  // (1-alpha')(alpha-1) = -1, so the lambdas cancel exactly.
  for (double alpha : {1.5, 2.0, 3.0}) {
    auto est = ap_ratio_core(1 << 12, alpha, [&](uint64_t, double& w, double& d) {
      w = 3.7;
      d = std::pow(3.7, 1.0 - dual_exponent(alpha));
    });
    CHECK(est.ratio == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(est.se_ratio <= 1e-12);
  }
}

TEST_CASE("radial weight oracle: |x| on a planar disc has ratio 4/3") {
  // fint |x| = 2R/3 and fint |x|^{-1} = 2/R by polar integration.
  const double R = 0.37;
  QuadratureSpec quad = kQuad.with_samples(200000);
  BallSampler sampler(2, R, quad);
  auto est = ap_ratio_core(quad.samples, 2.0, [&](uint64_t i, double& w, double& d) {
    double r = sampler.offset(i).norm();
    w = r;
    d = 1.0 / r;
  });
  CHECK(est.mean_w == doctest::Approx(2.0 * R / 3.0).epsilon(1e-3));
  CHECK(est.mean_dual == doctest::Approx(2.0 / R).epsilon(2e-2));
  CHECK(std::fabs(est.ratio - 4.0 / 3.0) <= 3.0 * est.se_ratio);
}

TEST_CASE("scale invariance of the composed ratio") {
  const double lambda = 1e6;
  QuadratureSpec quad = kQuad.with_samples(1 << 12);
  BallSampler sampler(2, 1.0, quad);
  for (double alpha : {2.0, 3.0}) {
    double ap = dual_exponent(alpha);
    auto base = ap_ratio_core(quad.samples, alpha, [&](uint64_t i, double& w, double& d) {
      double v = 1.0 + sampler.offset(i).norm2();
      w = v;
      d = std::pow(v, 1.0 - ap);
    });
    auto scaled = ap_ratio_core(quad.samples, alpha, [&](uint64_t i, double& w, double& d) {
      double v = lambda * (1.0 + sampler.offset(i).norm2());
      w = v;
      d = std::pow(v, 1.0 - ap);
    });
    CHECK(scaled.ratio == doctest::Approx(base.ratio).epsilon(1e-12));
  }
}

TEST_CASE("field ratio over a family ball and the trivial exponent") {
  auto& cfg = shared_config();
  WeightParams trivial{2.0, 2.0};
  auto est = ap_ratio(cfg, trivial, 8, kQuad.with_samples(4000));
  CHECK(est.ratio == 1.0);  // weight is identically one, means are exact
  CHECK(est.se_ratio == 0.0);

  WeightParams wp{3.0, 2.0};
  auto e8 = ap_ratio(cfg, wp, 8, kQuad.with_samples(20000));
  CHECK(e8.ratio > 1.0 - 3.0 * e8.se_ratio);  // Jensen holds for exact integrals
  CHECK(e8.se_ratio > 0.0);
  CHECK(e8.samples == 20000);
}

TEST_CASE("generic balls must sit inside the domain") {
  auto& cfg = shared_config();
  WeightParams wp{3.0, 2.0};
  CHECK_THROWS_AS(ap_ratio(cfg, wp, vec_of({0.9, 0.0}), 0.3, kQuad), Error);
  auto est = ap_ratio(cfg, wp, vec_of({0.2, 0.1}), 0.15, kQuad.with_samples(4000));
  CHECK(est.ratio > 0.0);
}

TEST_CASE("lower bound is honestly vacuous at desk scale") {
  BoundConstants consts{2, 3.0, 0.07};
  WeightParams wp{3.0, 2.0};
  // c = eps^3/(1-eps) ~ 3.69e-4, so c*l is dwarfed by 2n l^(2/3) at l = 100.
  CHECK(consts.shear_coefficient() == doctest::Approx(std::pow(0.07, 3) / 0.93).epsilon(1e-12));
  BoundValue b = lower_bound(consts, wp, 100.0);
  CHECK(b.status == BoundStatus::not_yet_positive);
  CHECK(std::isnan(b.value));
  // crossover solves c*l = 2n*l^(2/3)
  CHECK(b.crossover == doctest::Approx(std::pow(4.0 / consts.shear_coefficient(), 3)).epsilon(1e-12));
  CHECK(b.crossover > 1e12);

  // far beyond the crossover the bound is positive and grows without bound
  BoundValue b1 = lower_bound(consts, wp, 1e13);
  BoundValue b2 = lower_bound(consts, wp, 1e15);
  CHECK(b1.status == BoundStatus::positive);
  CHECK(b2.value > b1.value);
  CHECK_THROWS_AS(lower_bound(consts, WeightParams{1.5, 2.0}, 10.0), Error);
}

TEST_CASE("the ratio scan grows along the family and reports bounds") {
  auto& cfg = shared_config();
  WeightParams wp{3.0, 2.0};
  RegionParams params{0.07};
  auto report = ap_scan(cfg, wp, {8, 27, 125}, kQuad.with_samples(20000), params);
  REQUIRE(report.rows.size() == 3);
  CHECK(report.rows[0].est.ratio < report.rows[1].est.ratio);
  CHECK(report.rows[1].est.ratio < report.rows[2].est.ratio);
  CHECK(report.loglog_slope > 0.0);
  for (const auto& row : report.rows) CHECK(row.bound.status == BoundStatus::not_yet_positive);

  // p = 2 is rejected unless explicitly allowed; then everything is 1.
  CHECK_THROWS_AS(ap_scan(cfg, WeightParams{2.0, 2.0}, {8}, kQuad, params), Error);
  auto trivial = ap_scan(cfg, WeightParams{2.0, 2.0}, {8, 27}, kQuad.with_samples(2000), params, {},
                         true);
  for (const auto& row : trivial.rows) CHECK(row.est.ratio == 1.0);
  CHECK(trivial.loglog_slope == doctest::Approx(0.0));
}

TEST_CASE("subdomain scans keep only enclosed balls") {
  auto& cfg = shared_config();
  const BallSystem& sys = shared_system();
  WeightParams wp{3.0, 2.0};
  RegionParams params{0.07};

  // A tiny ball around a late center still captures that ball's outer ball.
  Vec c150 = sys.ball(150).center.rounded();
  Subdomain sub{c150, 1e-3};
  auto report = ap_scan(cfg, wp, {8, 150}, kQuad.with_samples(2000), params, sub);
  CHECK(report.balls_in_subdomain >= 1);
  for (const auto& row : report.rows) CHECK(row.l != 8);  // E_8 is far too large

  Subdomain nowhere{vec_of({0.9, 0.0}), 1e-9};
  CHECK_THROWS_AS(ap_scan(cfg, wp, {8, 150}, kQuad, params, nowhere), Error);
}

TEST_CASE("duality identity holds to rounding for p < 2") {
  auto& cfg = shared_config();
  for (auto [p, alpha] : std::vector<std::pair<double, double>>{{1.5, 2.0}, {1.2, 3.0}}) {
    double dev = duality_identity_check(cfg, WeightParams{p, alpha}, 12, kQuad.with_samples(20000));
    CHECK(dev <= 1e-10);
  }
  CHECK_THROWS_AS(duality_identity_check(cfg, WeightParams{3.0, 2.0}, 12, kQuad), Error);
}

TEST_CASE("log-log slope helper") {
  std::vector<std::pair<double, double>> pts;
  for (double l : {8.0, 64.0, 512.0}) pts.emplace_back(l, 2.0 * std::pow(l, 0.4));
  CHECK(loglog_slope(pts) == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("the two sampling schemes agree within their error bars") {
  auto& cfg = shared_config();
  WeightParams wp{3.0, 2.0};
  QuadratureSpec ld{Scheme::low_discrepancy, 40000, 5, 0};
  QuadratureSpec pr{Scheme::pseudo_random, 40000, 5, 0};
  auto a = ap_ratio(cfg, wp, 8, ld);
  auto b = ap_ratio(cfg, wp, 8, pr);
  CHECK(std::fabs(a.ratio - b.ratio) <= 4.0 * (a.se_ratio + b.se_ratio));

  auto fa = estimate_region_fraction(shared_system(), RegionParams{0.07}, 12, Region::G, ld);
  auto fb = estimate_region_fraction(shared_system(), RegionParams{0.07}, 12, Region::G, pr);
  CHECK(std::fabs(fa.fraction - fb.fraction) <= 4.0 * (fa.std_error + fb.std_error));
}
