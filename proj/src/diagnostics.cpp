#include "apblow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace apblow {

namespace {
constexpr uint64_t kStreamBounds = 0x626E6473ull;
constexpr uint64_t kStreamDecomp = 0x64636D70ull;
constexpr uint64_t kStreamSandwich = 0x736E6477ull;
constexpr uint64_t kStreamSeries = 0x73657273ull;
constexpr uint64_t kStreamHessInt = 0x68657373ull;
constexpr uint64_t kStreamDivergence = 0x64697665ull;
}  // namespace

BoundsCheckReport bounds_check(const FieldConfig& cfg, int k, const QuadratureSpec& quadrature) {
  const BallSystem& sys = cfg.system();
  if (k < 1 || k > cfg.truncation()) raise(Errc::index_out_of_range, "bump index out of range");
  const int n = sys.domain().n;
  const double rk = sys.ball(k).r();
  const double inv_v = 1.0 / (static_cast<double>(k) * rk);
  const double inv_g = 1.0 / (2.0 * k);
  const double inv_h = rk / (4.0 * k);

  struct Acc {
    double v = 0, g = 0, h = 0;
    uint64_t n = 0;
    void merge(const Acc& o) {
      v = std::max(v, o.v);
      g = std::max(g, o.g);
      h = std::max(h, o.h);
      n += o.n;
    }
  };
  BallSampler sampler(n, 0.5, quadrature.with_stream(kStreamBounds + 977 * static_cast<uint64_t>(k)));
  Acc acc = chunked_reduce<Acc>(quadrature.samples, [&](uint64_t b, uint64_t e) {
    Acc a;
    for (uint64_t i = b; i < e; ++i) {
      Jet J = eval_bump_jet(sys, k, AnchoredPoint{k, sampler.offset(i)});
      a.v = std::max(a.v, value_max_entry(J) * inv_v);
      a.g = std::max(a.g, grad_max_entry(J) * inv_g);
      a.h = std::max(a.h, hess_max_entry(J) * inv_h);
      ++a.n;
    }
    return a;
  });
  return BoundsCheckReport{k, acc.n, acc.v, acc.g, acc.h};
}

DecompositionReport decomposition_check(const FieldConfig& cfg, const RegionParams& params, int l,
                                        const QuadratureSpec& quadrature) {
  const BallSystem& sys = cfg.system();
  if (l < 1 || l > cfg.truncation()) raise(Errc::index_out_of_range, "region index out of range");
  struct Acc {
    double dev = 0.0;
    uint64_t total = 0, hits = 0;
    void merge(const Acc& o) {
      dev = std::max(dev, o.dev);
      total += o.total;
      hits += o.hits;
    }
  };
  BallSampler sampler(sys.domain().n, 0.5,
                      quadrature.with_stream(kStreamDecomp + 977 * static_cast<uint64_t>(l)));
  Acc acc = chunked_reduce<Acc>(quadrature.samples, [&](uint64_t b, uint64_t e) {
    Acc a;
    for (uint64_t i = b; i < e; ++i) {
      AnchoredPoint x{l, sampler.offset(i)};
      ++a.total;
      if (!region_membership(sys, params, l, x, Region::M)) continue;
      ++a.hits;
      SymGrad full = sym_gradient(eval_bump_sum(cfg, x, cfg.truncation()));
      SymGrad win = sym_gradient(eval_window_sum(cfg, l, x));
      double diff = 0.0;
      for (int r = 0; r < full.n; ++r)
        for (int c = 0; c < full.n; ++c) diff = std::max(diff, std::fabs(full.d[r][c] - win.d[r][c]));
      double denom = std::max(full.magnitude, 1e-300);
      a.dev = std::max(a.dev, diff / denom);
    }
    return a;
  });
  if (acc.hits == 0) raise(Errc::region_empty, "no M_l sample found within the budget");
  return DecompositionReport{l, acc.total, acc.hits, acc.dev};
}

SandwichReport sandwich_check(const FieldConfig& cfg, const RegionParams& params, int l,
                              const QuadratureSpec& quadrature) {
  const BallSystem& sys = cfg.system();
  // l <= L/2 keeps the truncation error of the untouched region negligible.
  if (l < 1 || l > cfg.truncation() / 2)
    raise(Errc::index_out_of_range, "sandwich depth must satisfy l <= truncation/2");
  const int n = sys.domain().n;
  const double eps = params.epsilon;
  const double shear_thr = eps * eps * eps * static_cast<double>(l) / (1.0 - eps);
  const double l23 = std::cbrt(static_cast<double>(l)) * std::cbrt(static_cast<double>(l));
  const double bg_thr = 2.0 * n * l23;
  const double lower_thr = shear_thr - bg_thr;

  SandwichReport rep;
  rep.l = l;
  rep.shear_threshold = shear_thr;
  rep.lower_threshold = lower_thr;
  rep.lower_vacuous = !(lower_thr > 0.0);
  rep.background_threshold = bg_thr;
  const double c = eps * eps * eps / (1.0 - eps);
  const double q = 2.0 * n / c;
  rep.crossover = q * q * q;

  struct AccA {
    uint64_t g = 0, gpass = 0, m = 0, mpass = 0;
    double worst = std::numeric_limits<double>::infinity();
    void merge(const AccA& o) {
      g += o.g;
      gpass += o.gpass;
      m += o.m;
      mpass += o.mpass;
      worst = std::min(worst, o.worst);
    }
  };
  BallSampler inner(n, 0.5, quadrature.with_stream(kStreamSandwich + 977 * static_cast<uint64_t>(l)));
  AccA a = chunked_reduce<AccA>(quadrature.samples, [&](uint64_t b, uint64_t e) {
    AccA acc;
    for (uint64_t i = b; i < e; ++i) {
      AnchoredPoint x{l, inner.offset(i)};
      if (!region_membership(sys, params, l, x, Region::G)) continue;
      ++acc.g;
      double shear = std::fabs(eval_bump_jet(sys, l, x).grad[0][0]);
      acc.worst = std::min(acc.worst, shear);
      if (shear >= shear_thr * (1.0 - kOneSidedTol)) ++acc.gpass;
      if (!later_ball_hit(sys, x, l, cfg.truncation())) {
        ++acc.m;
        if (rep.lower_vacuous) {
          ++acc.mpass;
        } else {
          double du0 = sym_gradient(eval_bump_sum(cfg, x, cfg.truncation())).magnitude;
          if (du0 >= lower_thr * (1.0 - kOneSidedTol)) ++acc.mpass;
        }
      }
    }
    return acc;
  });
  rep.shear_samples = a.g;
  rep.shear_passes = a.gpass;
  rep.shear_worst = a.g ? a.worst : 0.0;
  rep.lower_samples = a.m;
  rep.lower_passes = a.mpass;

  struct AccC {
    uint64_t m = 0, pass = 0;
    double worst = 0.0;
    void merge(const AccC& o) {
      m += o.m;
      pass += o.pass;
      worst = std::max(worst, o.worst);
    }
  };
  BallSampler outer(n, 1.0, quadrature.with_stream(kStreamSandwich ^ (0x9E37ull + static_cast<uint64_t>(l))));
  AccC cacc = chunked_reduce<AccC>(quadrature.samples, [&](uint64_t b, uint64_t e) {
    AccC acc;
    for (uint64_t i = b; i < e; ++i) {
      AnchoredPoint x{l, outer.offset(i)};
      if (later_ball_hit(sys, x, l - 1, cfg.truncation())) continue;
      ++acc.m;
      double du0 = sym_gradient(eval_bump_sum(cfg, x, cfg.truncation())).magnitude;
      acc.worst = std::max(acc.worst, du0);
      if (du0 <= bg_thr * (1.0 + kOneSidedTol)) ++acc.pass;
    }
    return acc;
  });
  rep.background_samples = cacc.m;
  rep.background_passes = cacc.pass;
  rep.background_worst = cacc.worst;

  if (rep.shear_samples == 0 || rep.background_samples == 0)
    raise(Errc::region_empty, "sandwich regions produced no samples");
  return rep;
}

FDReport finite_difference_check(const FieldConfig& cfg, const std::vector<AnchoredPoint>& points,
                                 double h) {
  const BallSystem& sys = cfg.system();
  const int n = sys.domain().n;
  const double eta = cfg.smooth_margin();
  FDReport rep;

  for (const AnchoredPoint& pt : points) {
    const double scale = sys.anchor_scale(pt.anchor);
    visit_candidates(sys, pt, cfg.truncation(), [&](int k, const LocalFrame& f) {
      double reach = 1.5 * h * scale / sys.ball(k).r();
      if (f.dist <= eta + reach || std::fabs(f.dist - 1.0) <= eta + reach)
        raise(Errc::non_smooth_point, "finite-difference point violates the smoothness margin");
      return true;
    });
    if (pt.offset.norm() + h > 4.0)
      raise(Errc::non_smooth_point, "finite-difference stencil leaves the anchored chart");

    Jet J0 = eval_field_jet(cfg, pt);
    double eg[2] = {0.0, 0.0};  // gradient FD error at h, h/2
    double eh[2] = {0.0, 0.0};  // hessian FD error at h, h/2
    for (int half = 0; half < 2; ++half) {
      const double step = half ? 0.5 * h : h;
      const double denom = 2.0 * step * scale;
      for (int j = 0; j < n; ++j) {
        AnchoredPoint xp = pt, xm = pt;
        xp.offset[j] += step;
        xm.offset[j] -= step;
        Jet Jp = eval_field_jet(cfg, xp);
        Jet Jm = eval_field_jet(cfg, xm);
        for (int i = 0; i < n; ++i) {
          double fd = (Jp.value[i] - Jm.value[i]) / denom;
          eg[half] = std::max(eg[half], std::fabs(fd - J0.grad[i][j]));
          for (int c = 0; c < n; ++c) {
            double fdh = (Jp.grad[i][c] - Jm.grad[i][c]) / denom;
            eh[half] = std::max(eh[half], std::fabs(fdh - J0.hess[i][j][c]));
          }
        }
      }
    }
    ++rep.points;
    if (eg[0] < 1e-12) {
      ++rep.grad_floored;
    } else {
      rep.worst_grad_dev = std::max(rep.worst_grad_dev, std::fabs(eg[0] / eg[1] - 4.0));
    }
    if (eh[0] < 1e-12) {
      ++rep.hess_floored;
    } else {
      rep.worst_hess_dev = std::max(rep.worst_hess_dev, std::fabs(eh[0] / eh[1] - 4.0));
    }
  }
  return rep;
}

SeriesReport sobolev_partial_norms(const FieldConfig& cfg, SeriesMode mode, double exponent,
                                   int kmax, const QuadratureSpec& quadrature) {
  const BallSystem& sys = cfg.system();
  const int n = sys.domain().n;
  if (mode == SeriesMode::grad_ls) {
    if (!(exponent > 1.0) || !(exponent <= 64.0))
      raise(Errc::domain_error, "gradient series needs s in (1, 64]");
  } else {
    if (!(exponent > 1.0 && exponent < static_cast<double>(n)))
      raise(Errc::domain_error, "hessian series needs q in (1, n); the series diverges at q >= n");
  }
  if (kmax < 1 || kmax > cfg.truncation()) raise(Errc::index_out_of_range, "series kmax out of range");

  const double ex = exponent;
  const double vol_pref = std::pow(unit_ball_volume(n), 1.0 / ex);
  SeriesReport rep;
  rep.mode = mode;
  rep.exponent = ex;

  struct Acc {
    std::array<std::array<std::array<double, kMaxDim>, kMaxDim>, 2> s{};
    uint64_t n = 0;
    void merge(const Acc& o) {
      for (int m = 0; m < 2; ++m)
        for (int i = 0; i < kMaxDim; ++i)
          for (int j = 0; j < kMaxDim; ++j) s[m][i][j] += o.s[m][i][j];
      n += o.n;
    }
  };

  double cum_term = 0.0, cum_bound = 0.0;
  for (int k = 1; k <= kmax; ++k) {
    const double rk = sys.ball(k).r();
    BallSampler sampler(n, 0.5,
                        quadrature.with_stream(kStreamSeries + 977 * static_cast<uint64_t>(k) +
                                               (mode == SeriesMode::hess_lq ? 7 : 0)));
    Acc acc = chunked_reduce<Acc>(quadrature.samples, [&](uint64_t b, uint64_t e) {
      Acc a;
      for (uint64_t i = b; i < e; ++i) {
        Jet J = eval_bump_jet(sys, k, AnchoredPoint{k, sampler.offset(i)});
        if (mode == SeriesMode::grad_ls) {
          for (int m = 0; m < 2; ++m)
            for (int d = 0; d < n; ++d) a.s[m][d][0] += std::pow(std::fabs(J.grad[m][d]), ex);
        } else {
          for (int m = 0; m < 2; ++m)
            for (int d = 0; d < n; ++d)
              for (int c = d; c < n; ++c) a.s[m][d][c] += std::pow(std::fabs(J.hess[m][d][c]), ex);
        }
        ++a.n;
      }
      return a;
    });
    double worst_mean = 0.0;
    for (int m = 0; m < 2; ++m)
      for (int i = 0; i < kMaxDim; ++i)
        for (int j = 0; j < kMaxDim; ++j)
          worst_mean = std::max(worst_mean, acc.s[m][i][j] / static_cast<double>(acc.n));

    SeriesRow row;
    row.k = k;
    if (mode == SeriesMode::grad_ls) {
      row.term = vol_pref * std::pow(rk, static_cast<double>(n) / ex) * std::pow(worst_mean, 1.0 / ex);
      row.bound = 2.0 * k * vol_pref * std::pow(rk, static_cast<double>(n) / ex);
    } else {
      row.term = vol_pref * std::pow(rk, static_cast<double>(n) / ex) * std::pow(worst_mean, 1.0 / ex);
      row.bound = 4.0 * k * vol_pref * std::pow(rk, static_cast<double>(n) / ex - 1.0);
    }
    cum_term += row.term;
    cum_bound += row.bound;
    row.cum_term = cum_term;
    row.cum_bound = cum_bound;
    rep.rows.push_back(row);
  }

  const double z = mode == SeriesMode::grad_ls ? std::pow(sys.rho(), static_cast<double>(n) / ex)
                                               : std::pow(sys.rho(), static_cast<double>(n) / ex - 1.0);
  const double pref = (mode == SeriesMode::grad_ls ? 2.0 : 4.0) * vol_pref;
  rep.majorant = pref * z / ((1.0 - z) * (1.0 - z));
  return rep;
}

HessianIntegralReport weighted_hessian_integral(const FieldConfig& cfg, double p,
                                                const std::vector<int>& truncations,
                                                const QuadratureSpec& quadrature) {
  const BallSystem& sys = cfg.system();
  const int n = sys.domain().n;
  if (!(p > 1.0) || !std::isfinite(p)) raise(Errc::domain_error, "exponent p must lie in (1, inf)");
  if (truncations.empty()) raise(Errc::domain_error, "at least one truncation level required");
  for (size_t i = 0; i < truncations.size(); ++i) {
    if (truncations[i] < 1 || truncations[i] > cfg.truncation())
      raise(Errc::index_out_of_range, "truncation level out of range");
    if (i > 0 && truncations[i] <= truncations[i - 1])
      raise(Errc::domain_error, "truncation levels must increase");
  }
  const int lmax = truncations.back();
  const size_t T = truncations.size();

  // Mixture proposal: half the mass uniform on the domain, half split evenly
  // over the inner balls. Equal ball shares keep every truncation band
  // resolved; mass-proportional shares would starve the deep balls and the
  // coupled increments between truncation levels would degenerate to zero.
  std::vector<double> weight(static_cast<size_t>(lmax) + 1, 0.0);
  std::vector<double> inv_vol(static_cast<size_t>(lmax) + 1, 0.0);
  double wsum = 0.0;
  for (int k = 1; k <= lmax; ++k) {
    double rk = sys.ball(k).r();
    weight[static_cast<size_t>(k)] = 1.0;
    wsum += weight[static_cast<size_t>(k)];
    inv_vol[static_cast<size_t>(k)] = 1.0 / (unit_ball_volume(n) * std::pow(rk, n));
  }
  std::vector<double> cum(static_cast<size_t>(lmax) + 1, 0.0);
  double run = 0.0;
  for (int k = 1; k <= lmax; ++k) {
    run += 0.5 * weight[static_cast<size_t>(k)] / wsum;
    cum[static_cast<size_t>(k)] = run;
  }
  const double q_domain = 0.5 / unit_ball_volume(n);

  struct Acc {
    std::array<double, 8> I{}, unw{}, h52{}, dup{};
    uint64_t n = 0;
    void merge(const Acc& o) {
      for (size_t t = 0; t < 8; ++t) {
        I[t] += o.I[t];
        unw[t] += o.unw[t];
        h52[t] += o.h52[t];
        dup[t] += o.dup[t];
      }
      n += o.n;
    }
  };
  if (T > 8) raise(Errc::domain_error, "at most 8 truncation levels supported");

  BallSampler sampler(n, 1.0, quadrature.with_stream(kStreamHessInt));
  SampleStream select(quadrature.scheme, quadrature.seed,
                      quadrature.with_stream(kStreamHessInt ^ 0x51ull).stream, 1);

  Acc acc = chunked_reduce<Acc>(quadrature.samples, [&](uint64_t b, uint64_t e) {
    Acc a;
    thread_local std::vector<std::pair<int, LocalFrame>> frames;
    for (uint64_t i = b; i < e; ++i) {
      ++a.n;
      // Mixture component: [0, 0.5) -> domain, [0.5, 1) -> ball by mass.
      double usel = select.u(i, 0);
      int comp = 0;
      if (usel >= 0.5) {
        double target = usel - 0.5;
        comp = lmax;
        for (int k = 1; k <= lmax; ++k) {
          if (target <= cum[static_cast<size_t>(k)]) {
            comp = k;
            break;
          }
        }
      }
      Vec off = sampler.offset(i);
      AnchoredPoint x = comp == 0 ? AnchoredPoint{0, off} : AnchoredPoint{comp, 0.5 * off};
      Vec x_abs = sys.absolute(x);

      // Pass 1: candidate frames and the full proposal density at x.
      frames.clear();
      double q = q_domain;
      visit_candidates(sys, x, lmax, [&](int k, const LocalFrame& f) {
        frames.emplace_back(k, f);
        if (f.dist < 1.0)
          q += 0.5 * (weight[static_cast<size_t>(k)] / wsum) * inv_vol[static_cast<size_t>(k)];
        return true;
      });
      const double invq = 1.0 / q;

      auto tally = [&](size_t t, const Jet& partial) {
        Jet J = partial;
        accumulate_lift_jet(J, cfg.lift_scale(), x_abs);
        double h2 = hess_frobenius2(J);
        if (!std::isfinite(h2)) return;  // unrepresentable deep-bump Hessian
        // Flagged (near-sphere / near-center) points are valid for quadrature:
        // the discontinuity set is null.
        double du = sym_gradient(J).magnitude;
        a.I[t] += std::pow(1.0 + du, p - 2.0) * h2 * invq;
        a.unw[t] += h2 * invq;
        if (p > 2.0) {
          a.h52[t] += std::pow(h2, 1.25) * invq;
          a.dup[t] += std::pow(du, 5.0 * (p - 2.0)) * invq;
        }
      };

      // Pass 2: progressive bump sums snapshotted at each truncation level.
      Jet partial(n);
      size_t ti = 0;
      for (const auto& [k, f] : frames) {
        while (ti < T && k > truncations[ti]) {
          tally(ti, partial);
          ++ti;
        }
        accumulate_bump_frame(partial, k, sys.ball(k).r(), f, cfg.smooth_margin());
      }
      while (ti < T) {
        tally(ti, partial);
        ++ti;
      }
    }
    return a;
  });

  HessianIntegralReport rep;
  rep.p = p;
  rep.samples = acc.n;
  const double N = static_cast<double>(acc.n);
  for (size_t t = 0; t < T; ++t) {
    HessianIntegralRow row;
    row.truncation = truncations[t];
    row.value = acc.I[t] / N;
    row.unweighted = acc.unw[t] / N;
    if (p > 2.0) {
      row.holder_hess52 = std::pow(acc.h52[t] / N, 0.8);
      row.holder_du = std::pow(acc.dup[t] / N, 0.2);
    }
    rep.rows.push_back(row);
  }
  return rep;
}

double hessian_symgrad_identity_residual(const Jet& jet) {
  double scale = 1.0;
  for (int i = 0; i < jet.n; ++i)
    for (int j = 0; j < jet.n; ++j)
      for (int k = 0; k < jet.n; ++k) scale = std::max(scale, std::fabs(jet.hess[i][j][k]));
  double worst = 0.0;
  for (int i = 0; i < jet.n; ++i) {
    for (int j = 0; j < jet.n; ++j) {
      for (int k = 0; k < jet.n; ++k) {
        double djDik = 0.5 * (jet.hess[i][j][k] + jet.hess[k][j][i]);
        double dkDij = 0.5 * (jet.hess[i][k][j] + jet.hess[j][k][i]);
        double diDjk = 0.5 * (jet.hess[j][i][k] + jet.hess[k][i][j]);
        worst = std::max(worst, std::fabs(jet.hess[i][j][k] - (djDik + dkDij - diDjk)));
      }
    }
  }
  return worst / scale;
}

DivergenceReport divergence_check(const FieldConfig& cfg, const QuadratureSpec& quadrature,
                                  int max_anchor) {
  const BallSystem& sys = cfg.system();
  const int n = sys.domain().n;
  const int A = std::min(max_anchor, cfg.truncation());
  if (A < 0) raise(Errc::index_out_of_range, "divergence check needs a nonnegative anchor range");
  struct Acc {
    double worst = 0.0;
    uint64_t n = 0;
    void merge(const Acc& o) {
      worst = std::max(worst, o.worst);
      n += o.n;
    }
  };
  BallSampler sampler(n, 1.0, quadrature.with_stream(kStreamDivergence));
  Acc acc = chunked_reduce<Acc>(quadrature.samples, [&](uint64_t b, uint64_t e) {
    Acc a;
    for (uint64_t i = b; i < e; ++i) {
      int anchor = static_cast<int>(i % static_cast<uint64_t>(A + 1));
      AnchoredPoint x{anchor, sampler.offset(i)};
      Jet J = eval_field_jet(cfg, x);
      double rel = std::fabs(divergence(J)) / (1.0 + grad_frobenius(J));
      a.worst = std::max(a.worst, rel);
      ++a.n;
    }
    return a;
  });
  return DivergenceReport{acc.n, acc.worst};
}

}  // namespace apblow
