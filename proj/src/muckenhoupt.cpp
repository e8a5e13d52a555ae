#include "apblow/muckenhoupt.hpp"

#include <algorithm>

namespace apblow {

namespace {
constexpr uint64_t kStreamAPRatio = 0x61707261ull;
constexpr uint64_t kStreamDuality = 0x6475616Cull;
}  // namespace

double dual_exponent(double alpha) {
  if (!(alpha > 1.0) || !std::isfinite(alpha))
    raise(Errc::domain_error, "dual exponent requires alpha > 1");
  return alpha / (alpha - 1.0);
}

double p0_map(const WeightParams& params) {
  if (!(params.p > 1.0 && params.p < 2.0))
    raise(Errc::domain_error, "p0 map requires p in (1, 2)");
  if (!(params.alpha > 1.0)) raise(Errc::domain_error, "p0 map requires alpha > 1");
  return (params.p - 2.0) / (1.0 - params.alpha) + 2.0;
}

APRatioEstimate ap_ratio(const FieldConfig& cfg, const WeightParams& params, int l,
                         const QuadratureSpec& quadrature) {
  params.validate(true);
  if (l < 1 || l > cfg.truncation()) raise(Errc::index_out_of_range, "scan ball out of range");
  const int n = cfg.system().domain().n;
  const double ew = params.p - 2.0;
  const double ed = ew * (1.0 - params.alpha_prime());
  BallSampler sampler(n, 1.0, quadrature.with_stream(kStreamAPRatio + 977 * static_cast<uint64_t>(l)));
  APRatioEstimate est = ap_ratio_core(quadrature.samples, params.alpha, [&](uint64_t i, double& w, double& d) {
    AnchoredPoint x{l, sampler.offset(i)};
    double base = 1.0 + sym_gradient(eval_field_jet(cfg, x)).magnitude;
    w = std::pow(base, ew);
    d = std::pow(base, ed);
  });
  est.l = l;
  return est;
}

APRatioEstimate ap_ratio(const FieldConfig& cfg, const WeightParams& params, const Vec& center,
                         double radius, const QuadratureSpec& quadrature) {
  params.validate(true);
  if (!(radius > 0.0) || center.norm() + radius > 1.0)
    raise(Errc::domain_error, "ball must be contained in the domain");
  const int n = cfg.system().domain().n;
  const double ew = params.p - 2.0;
  const double ed = ew * (1.0 - params.alpha_prime());
  BallSampler sampler(n, radius, quadrature.with_stream(kStreamAPRatio ^ 0xB0B0ull));
  return ap_ratio_core(quadrature.samples, params.alpha, [&](uint64_t i, double& w, double& d) {
    AnchoredPoint x{0, center + sampler.offset(i)};
    double base = 1.0 + sym_gradient(eval_field_jet(cfg, x)).magnitude;
    w = std::pow(base, ew);
    d = std::pow(base, ed);
  });
}

BoundValue lower_bound(const BoundConstants& consts, const WeightParams& params, double l) {
  if (!(params.p > 2.0)) raise(Errc::domain_error, "lower bound requires p > 2; map p < 2 first");
  if (!(params.alpha > 1.0)) raise(Errc::domain_error, "lower bound requires alpha > 1");
  BoundValue out;
  out.crossover = consts.crossover();
  const double l23 = std::cbrt(l) * std::cbrt(l);
  const double num = consts.shear_coefficient() * l - consts.background_coefficient() * l23;
  if (!(num > 0.0)) return out;  // status: not yet positive
  out.status = BoundStatus::positive;
  out.value = consts.c1() / std::pow(consts.c3(), params.alpha - 1.0) *
              std::pow(num / (consts.c4() + l23), params.p - 2.0);
  return out;
}

APScanReport ap_scan(const FieldConfig& cfg, const WeightParams& params, const std::vector<int>& ls,
                     const QuadratureSpec& quadrature, const RegionParams& region_params,
                     const std::optional<Subdomain>& subdomain, bool allow_trivial) {
  params.validate(allow_trivial);
  const BallSystem& sys = cfg.system();
  std::vector<int> scan_ls;
  for (int l : ls) {
    if (l < 1 || l > cfg.truncation()) raise(Errc::index_out_of_range, "scan ball out of range");
    if (subdomain) {
      double reach = to_double(dd_norm(sys.ball(l).center - DDVec(subdomain->center))) + sys.ball(l).R;
      if (reach > subdomain->radius) continue;  // E_l not inside the subdomain
    }
    scan_ls.push_back(l);
  }
  if (scan_ls.empty()) raise(Errc::empty_scan, "no family ball fits the subdomain");

  APScanReport report;
  report.balls_in_subdomain = static_cast<int>(scan_ls.size());
  BoundConstants consts{sys.domain().n, params.p, region_params.epsilon};

  for (int l : scan_ls) {
    APScanRow row;
    row.l = l;
    row.est = ap_ratio(cfg, params, l, quadrature);
    if (params.p > 2.0) {
      row.bound = lower_bound(consts, params, static_cast<double>(l));
    } else if (params.p < 2.0) {
      // Duality: the p<2 ratio equals the (p0, alpha') ratio raised to the
      // power alpha-1, so the bound maps the same way.
      WeightParams mapped{p0_map(params), params.alpha_prime()};
      BoundConstants mapped_consts{sys.domain().n, mapped.p, region_params.epsilon};
      BoundValue inner = lower_bound(mapped_consts, mapped, static_cast<double>(l));
      row.bound = inner;
      if (inner.status == BoundStatus::positive)
        row.bound.value = std::pow(inner.value, params.alpha - 1.0);
    } else {
      row.bound.crossover = std::numeric_limits<double>::infinity();
    }
    report.rows.push_back(row);
  }

  std::vector<std::pair<double, double>> pts;
  for (const auto& row : report.rows)
    if (row.est.ratio > 0.0) pts.emplace_back(static_cast<double>(row.l), row.est.ratio);
  report.loglog_slope = loglog_slope(pts);
  return report;
}

double duality_identity_check(const FieldConfig& cfg, const WeightParams& params, int l,
                              const QuadratureSpec& quadrature) {
  if (!(params.p > 1.0 && params.p < 2.0))
    raise(Errc::domain_error, "duality identity requires p in (1, 2)");
  const double ap = params.alpha_prime();
  const double p0 = p0_map(params);
  const double e1 = params.p - 2.0;
  const double e2 = (params.p - 2.0) * (1.0 - ap);
  const double e3 = (p0 - 2.0) * (1.0 - params.alpha);
  const double e4 = p0 - 2.0;
  const int n = cfg.system().domain().n;
  if (l < 1 || l > cfg.truncation()) raise(Errc::index_out_of_range, "ball out of range");

  struct Acc {
    double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    uint64_t n = 0;
    void merge(const Acc& o) {
      s1 += o.s1;
      s2 += o.s2;
      s3 += o.s3;
      s4 += o.s4;
      n += o.n;
    }
  };
  BallSampler sampler(n, 1.0, quadrature.with_stream(kStreamDuality + 977 * static_cast<uint64_t>(l)));
  Acc acc = chunked_reduce<Acc>(quadrature.samples, [&](uint64_t b, uint64_t e) {
    Acc a;
    for (uint64_t i = b; i < e; ++i) {
      AnchoredPoint x{l, sampler.offset(i)};
      double base = 1.0 + sym_gradient(eval_field_jet(cfg, x)).magnitude;
      a.s1 += std::pow(base, e1);
      a.s2 += std::pow(base, e2);
      a.s3 += std::pow(base, e3);
      a.s4 += std::pow(base, e4);
      ++a.n;
    }
    return a;
  });
  const double N = static_cast<double>(acc.n);
  const double lhs = (acc.s1 / N) * std::pow(acc.s2 / N, params.alpha - 1.0);
  const double rhs = std::pow(std::pow(acc.s3 / N, ap - 1.0) * (acc.s4 / N), params.alpha - 1.0);
  return std::fabs(lhs - rhs) / std::fabs(rhs);
}

double loglog_slope(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : points) {
    double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(points.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace apblow
