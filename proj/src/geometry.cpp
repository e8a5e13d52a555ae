#include "apblow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "apblow/io.hpp"

namespace apblow {

namespace {

// Builder guard: radii below this lose double representability entirely.
constexpr double kMinRadius = 1e-320;
// Dense-sequence indices scanned per construction step before giving up.
constexpr uint64_t kSearchBudget = 4000000;
// Hard cap on materialized dense points (memory guard).
constexpr uint64_t kDensePointCap = 1u << 26;

constexpr uint64_t kStreamRegionFraction = 0x7265676Eull;
constexpr uint64_t kStreamCovering = 0x636F7672ull;
constexpr uint64_t kStreamEpsilon = 0x65707369ull;

}  // namespace

// ---------------------------------------------------------------------------
// Dense sequence

void DenseSequence::extend_level() {
  const int m = next_m_++;
  const int64_t M = int64_t(1) << m;
  const int64_t limit2 = M * M;  // |p| < 1  <=>  sum a_i^2 < 4^m
  std::array<int64_t, kMaxDim> a{};
  for (int i = 0; i < n_; ++i) a[static_cast<size_t>(i)] = -M;
  for (;;) {
    bool fresh = (m == 0);
    if (!fresh) {
      for (int i = 0; i < n_; ++i)
        if (a[static_cast<size_t>(i)] & 1) {
          fresh = true;
          break;
        }
    }
    if (fresh) {
      int64_t s = 0;
      for (int i = 0; i < n_; ++i) s += a[static_cast<size_t>(i)] * a[static_cast<size_t>(i)];
      if (s < limit2) {
        Vec p(n_);
        for (int i = 0; i < n_; ++i)
          p[i] = std::ldexp(static_cast<double>(a[static_cast<size_t>(i)]), -m);
        pts_.push_back(p);
        if (pts_.size() > kDensePointCap)
          raise(Errc::candidate_search_overflow, "dense sequence: point cap exceeded");
      }
    }
    int i = n_ - 1;
    while (i >= 0 && a[static_cast<size_t>(i)] == M) {
      a[static_cast<size_t>(i)] = -M;
      --i;
    }
    if (i < 0) break;
    ++a[static_cast<size_t>(i)];
  }
}

const Vec& DenseSequence::point(uint64_t index1) {
  if (index1 == 0) raise(Errc::index_out_of_range, "dense sequence index is 1-based");
  while (pts_.size() < index1) extend_level();
  return pts_[index1 - 1];
}

Vec dense_sequence_point(const Domain& domain, uint64_t index1) {
  domain.validate();
  DenseSequence seq(domain.n);
  return seq.point(index1);
}

// ---------------------------------------------------------------------------
// Builder

namespace {

// Spatial index for the blocking test inside the greedy construction.
struct BlockIndex {
  explicit BlockIndex(int n) : n_(n) {}

  static constexpr double kCell = 0.04;

  void insert(int k, const Vec& c, double R) {
    if (R >= kCell) {
      big_.push_back(k);
      centers_.push_back(c);
      radii_.push_back(R);
      return;
    }
    small_centers_[static_cast<size_t>(k)] = c;
    small_radii_[static_cast<size_t>(k)] = R;
    int64_t lo[kMaxDim], hi[kMaxDim];
    for (int i = 0; i < n_; ++i) {
      lo[i] = cell_coord(c[i] - R);
      hi[i] = cell_coord(c[i] + R);
    }
    for_cells(lo, hi, [&](int64_t key) { map_[key].push_back(k); });
  }

  void reserve(int count) {
    small_centers_.resize(static_cast<size_t>(count) + 1);
    small_radii_.assign(static_cast<size_t>(count) + 1, -1.0);
  }

  // Visit every ball k whose surface may lie within `reach` of p.
  template <class Fn>
  void visit_near(const Vec& p, double reach, Fn&& fn) const {
    for (size_t i = 0; i < big_.size(); ++i) fn(big_[i], centers_[i], radii_[i]);
    int64_t lo[kMaxDim], hi[kMaxDim];
    double pad = reach + kCell;  // small balls have R < kCell
    for (int i = 0; i < n_; ++i) {
      lo[i] = cell_coord(p[i] - pad);
      hi[i] = cell_coord(p[i] + pad);
    }
    for_cells(lo, hi, [&](int64_t key) {
      auto it = map_.find(key);
      if (it == map_.end()) return;
      for (int k : it->second)
        fn(k, small_centers_[static_cast<size_t>(k)], small_radii_[static_cast<size_t>(k)]);
    });
  }

 private:
  int64_t cell_coord(double x) const { return static_cast<int64_t>(std::floor(x / kCell)) + 512; }

  template <class Fn>
  void for_cells(const int64_t* lo, const int64_t* hi, Fn&& fn) const {
    int64_t idx[kMaxDim];
    for (int i = 0; i < n_; ++i) idx[i] = lo[i];
    for (;;) {
      int64_t key = 0;
      for (int i = 0; i < n_; ++i) key = (key << 12) | (idx[i] & 0xFFF);
      fn(key);
      int i = n_ - 1;
      while (i >= 0 && idx[i] == hi[i]) {
        idx[i] = lo[i];
        --i;
      }
      if (i < 0) break;
      ++idx[i];
    }
  }

  int n_;
  std::vector<int> big_;
  std::vector<Vec> centers_;
  std::vector<double> radii_;
  std::vector<Vec> small_centers_;
  std::vector<double> small_radii_;
  std::unordered_map<int64_t, std::vector<int>> map_;
};

// Exact double-double test: |p - c| <= R, with p exact in working precision.
bool inside_closed_ball(const Vec& p, const DDVec& c, double R) {
  DDVec d(p.n);
  for (int i = 0; i < p.n; ++i) d[i] = DDouble(p[i]) - c[i];
  return dd_norm2(d) <= two_prod(R, R);
}

double dd_distance(const Vec& p, const DDVec& c) {
  DDVec d(p.n);
  for (int i = 0; i < p.n; ++i) d[i] = DDouble(p[i]) - c[i];
  return to_double(dd_norm(d));
}

}  // namespace

BallSystem BallSystem::build(const Domain& domain, double rho, int count, BuildLog* log) {
  domain.validate();
  if (!(rho > 0.0 && rho < 0.5)) raise(Errc::domain_error, "rho must lie in (0, 1/2)");
  if (count < 1) raise(Errc::domain_error, "ball count must be >= 1");

  const int n = domain.n;
  DenseSequence seq(n);
  std::vector<Ball> balls;
  balls.reserve(static_cast<size_t>(count));
  std::unordered_set<uint64_t> used;
  BlockIndex blocks(n);
  blocks.reserve(count);
  if (log) log->clear();

  const Vec x1 = seq.point(1);
  double bd1 = domain.boundary_distance(x1);
  // Admissibility fallback: shrink if B(x^1, rho) does not fit.
  double R1 = rho < bd1 ? rho : 0.5 * bd1;
  balls.push_back(Ball{DDVec(x1), R1});
  blocks.insert(1, x1, R1);
  used.insert(1);
  if (log) log->push_back(BuildLogEntry{1, 1, R1 != rho, R1});

  for (int l = 1; l < count; ++l) {
    const int lo = icbrt(l + 1);
    const double R_prev = balls.back().R;

    // First unused dense point in G_l = Omega \ closure(union of windowed E_k).
    int chosen = -1;
    uint64_t chosen_index = 0;
    Vec p;
    for (uint64_t i = 1; i <= kSearchBudget; ++i) {
      if (used.count(i)) continue;
      const Vec& cand = seq.point(i);
      bool blocked = false;
      blocks.visit_near(cand, 0.0, [&](int k, const Vec&, double) {
        if (blocked || k < lo) return;
        if (inside_closed_ball(cand, balls[static_cast<size_t>(k - 1)].center,
                               balls[static_cast<size_t>(k - 1)].R))
          blocked = true;
      });
      if (!blocked) {
        chosen = 1;
        chosen_index = i;
        p = cand;
        break;
      }
    }
    if (chosen < 0)
      raise(Errc::candidate_search_overflow, "no admissible dense point found within budget");

    // Clearance to the boundary and to the windowed balls, capped: values
    // beyond 2*rho*R_prev cannot influence the radius rule.
    const double cap = 2.0 * rho * R_prev;
    double d = domain.boundary_distance(p);
    blocks.visit_near(p, std::min(d, cap), [&](int k, const Vec&, double R) {
      if (k < lo) return;
      double clear = dd_distance(p, balls[static_cast<size_t>(k - 1)].center) - R;
      if (clear < d) d = clear;
    });

    double R = std::min(rho * R_prev, 0.5 * d);
    if (!(R > kMinRadius))
      raise(Errc::precision_exhausted,
            "radius underflow at ball " + std::to_string(l + 1) + " (R = " + std::to_string(R) + ")");

    balls.push_back(Ball{DDVec(p), R});
    blocks.insert(l + 1, p, R);
    used.insert(chosen_index);
    if (log) log->push_back(BuildLogEntry{l + 1, chosen_index, 0.5 * d < rho * R_prev, R});
  }

  BallSystem sys;
  sys.domain_ = domain;
  sys.rho_ = rho;
  sys.balls_ = std::move(balls);
  sys.finalize();
  return sys;
}

BallSystem BallSystem::from_parts(const Domain& domain, double rho, std::vector<Ball> balls) {
  domain.validate();
  if (!(rho > 0.0 && rho < 0.5)) raise(Errc::domain_error, "rho must lie in (0, 1/2)");
  if (balls.empty()) raise(Errc::domain_error, "ball system must be nonempty");
  for (const Ball& b : balls) {
    if (b.center.n != domain.n) raise(Errc::domain_error, "ball center dimension mismatch");
    if (!(b.R > 0.0) || !std::isfinite(b.R)) raise(Errc::domain_error, "ball radius must be positive");
  }
  BallSystem sys;
  sys.domain_ = domain;
  sys.rho_ = rho;
  sys.balls_ = std::move(balls);
  sys.finalize();
  return sys;
}

void BallSystem::finalize() {
  const int L = size();
  const int n = domain_.n;

  neighbors_.assign(static_cast<size_t>(L) + 1, {});
  for (int a = 1; a <= L; ++a) {
    const Ball& ba = balls_[static_cast<size_t>(a - 1)];
    const double reach = 4.0 * ba.R;
    auto& list = neighbors_[static_cast<size_t>(a)];
    for (int k = 1; k <= L; ++k) {
      const Ball& bk = balls_[static_cast<size_t>(k - 1)];
      double lim = (bk.r() + reach) * (1.0 + 1e-9);
      DDVec diff = center_diff(a, k);
      if (k == a || to_double(dd_norm(diff)) <= lim) list.push_back(Neighbor{k, diff});
    }
  }

  grid_.per_dim = n == 2 ? 64 : (n == 3 ? 16 : 8);
  grid_.cell = 2.2 / grid_.per_dim;
  size_t ncells = 1;
  for (int i = 0; i < n; ++i) ncells *= static_cast<size_t>(grid_.per_dim);
  grid_.cells.assign(ncells, {});
  grid_.big.clear();
  for (int k = 1; k <= L; ++k) grid_insert(k);
}

size_t BallSystem::grid_cell_of(const Vec& x) const {
  size_t idx = 0;
  for (int i = 0; i < x.n; ++i) {
    double t = (x[i] + 1.1) / grid_.cell;
    long c = std::lround(std::floor(t));
    c = std::clamp<long>(c, 0, grid_.per_dim - 1);
    idx = idx * static_cast<size_t>(grid_.per_dim) + static_cast<size_t>(c);
  }
  return idx;
}

void BallSystem::grid_insert(int k) {
  const Ball& b = balls_[static_cast<size_t>(k - 1)];
  const int n = domain_.n;
  const double pad = b.r() * (1.0 + 1e-9) + 1e-300;
  if (b.r() >= grid_.cell) {
    grid_.big.push_back(k);
    return;
  }
  Vec c = b.center.rounded();
  long lo[kMaxDim], hi[kMaxDim];
  for (int i = 0; i < n; ++i) {
    lo[i] = std::clamp<long>(std::lround(std::floor((c[i] - pad + 1.1) / grid_.cell)), 0,
                             grid_.per_dim - 1);
    hi[i] = std::clamp<long>(std::lround(std::floor((c[i] + pad + 1.1) / grid_.cell)), 0,
                             grid_.per_dim - 1);
  }
  long idx[kMaxDim];
  for (int i = 0; i < n; ++i) idx[i] = lo[i];
  for (;;) {
    size_t key = 0;
    for (int i = 0; i < n; ++i) key = key * static_cast<size_t>(grid_.per_dim) + static_cast<size_t>(idx[i]);
    grid_.cells[key].push_back(k);
    int i = n - 1;
    while (i >= 0 && idx[i] == hi[i]) {
      idx[i] = lo[i];
      --i;
    }
    if (i < 0) break;
    ++idx[i];
  }
}

DDVec BallSystem::center_diff(int a, int k) const {
  check_index(a);
  check_index(k);
  return balls_[static_cast<size_t>(a - 1)].center - balls_[static_cast<size_t>(k - 1)].center;
}

const std::vector<Neighbor>& BallSystem::neighbors(int a) const {
  check_index(a);
  return neighbors_[static_cast<size_t>(a)];
}

void BallSystem::candidates_at(const Vec& x, std::vector<int>& out) const {
  const auto& cell = grid_.cells[grid_cell_of(x)];
  out.clear();
  std::merge(grid_.big.begin(), grid_.big.end(), cell.begin(), cell.end(), std::back_inserter(out));
}

LocalFrame BallSystem::local_frame(const AnchoredPoint& x, int k) const {
  check_index(k);
  if (x.anchor < 0 || x.anchor > size()) raise(Errc::index_out_of_range, "anchor out of range");
  const Ball& bk = balls_[static_cast<size_t>(k - 1)];
  LocalFrame f;
  f.xi = Vec(domain_.n);
  if (x.anchor == k) {
    // Offsets are in units of R_k = 2 r_k; exact rescale.
    for (int i = 0; i < domain_.n; ++i) f.xi[i] = 2.0 * x.offset[i];
  } else {
    const double scale = anchor_scale(x.anchor);
    const double rk = bk.r();
    for (int i = 0; i < domain_.n; ++i) {
      DDouble d = x.anchor == 0 ? DDouble(x.offset[i]) - bk.center[i]
                                : (center_diff(x.anchor, k)[i] + two_prod(scale, x.offset[i]));
      f.xi[i] = to_double(d / rk);
    }
  }
  f.dist = f.xi.norm();
  return f;
}

LocalFrame BallSystem::local_frame(const AnchoredPoint& x, const Neighbor& nb) const {
  LocalFrame f;
  f.xi = Vec(domain_.n);
  if (x.anchor == nb.k) {
    for (int i = 0; i < domain_.n; ++i) f.xi[i] = 2.0 * x.offset[i];
  } else {
    const double scale = anchor_scale(x.anchor);
    const double rk = balls_[static_cast<size_t>(nb.k - 1)].r();
    for (int i = 0; i < domain_.n; ++i)
      f.xi[i] = to_double((nb.diff[i] + two_prod(scale, x.offset[i])) / rk);
  }
  f.dist = f.xi.norm();
  return f;
}

Vec BallSystem::absolute(const AnchoredPoint& x) const {
  if (x.anchor == 0) return x.offset;
  check_index(x.anchor);
  const Ball& ba = balls_[static_cast<size_t>(x.anchor - 1)];
  Vec out(domain_.n);
  for (int i = 0; i < domain_.n; ++i)
    out[i] = to_double(ba.center[i] + two_prod(ba.R, x.offset[i]));
  return out;
}

double BallSystem::tail_inner_volume_ratio(int l) const {
  check_index(l);
  const double rl = ball(l).r();
  double s = 0.0;
  for (int k = size(); k > l; --k) s += std::pow(ball(k).r() / rl, domain_.n);
  return s;
}

double BallSystem::truncation_tail_bound(int l) const {
  check_index(l);
  const double rl = ball(l).r();
  const double rL = ball(size()).r();
  const double rn = std::pow(rho_, domain_.n);
  return std::pow(rL / rl, domain_.n) * rn / (1.0 - rn);
}

// ---------------------------------------------------------------------------
// Checks

std::vector<std::pair<int, int>> check_window_disjointness(const BallSystem& sys) {
  std::vector<std::pair<int, int>> violations;
  const int L = sys.size();
  for (int l = 2; l <= L; ++l) {
    for (int k = icbrt(l); k < l; ++k) {
      if (k < 1) continue;
      double thr = (sys.ball(k).R + sys.ball(l).R) * (1.0 + 1e-12);
      DDouble d2 = dd_norm2(sys.center_diff(k, l));
      if (d2 <= two_prod(thr, thr)) violations.emplace_back(k, l);
    }
  }
  return violations;
}

RadiusDecayReport check_radius_decay(const BallSystem& sys) {
  if (sys.size() < 2) raise(Errc::insufficient_balls, "radius decay needs at least two balls");
  RadiusDecayReport rep;
  rep.worst_ratio = 0.0;
  rep.ok = sys.ball(1).r() <= sys.rho() * (1.0 + 1e-12);
  for (int k = 1; k < sys.size(); ++k) {
    const double rk = sys.ball(k).R, rk1 = sys.ball(k + 1).R;
    rep.worst_ratio = std::max(rep.worst_ratio, rk1 / rk);
    // Subnormal radii quantize at the absolute denormal step; widen the
    // relative tolerance by that quantum so a correctly built system is
    // never rejected at the representability floor.
    double tol = 1e-12 + std::numeric_limits<double>::denorm_min() / rk1;
    if (rk1 > rk * sys.rho() * (1.0 + tol)) rep.ok = false;
  }
  return rep;
}

ContainmentReport check_containment(const BallSystem& sys) {
  ContainmentReport rep;
  rep.worst_reach = 0.0;
  for (int k = 1; k <= sys.size(); ++k) {
    double reach = to_double(dd_norm(DDVec(sys.ball(k).center))) + sys.ball(k).R;
    rep.worst_reach = std::max(rep.worst_reach, reach);
  }
  rep.ok = rep.worst_reach < 1.0;
  return rep;
}

// ---------------------------------------------------------------------------
// Covering radius

namespace {
struct MaxAcc {
  double v = 0.0;
  void merge(const MaxAcc& o) { v = std::max(v, o.v); }
};
}  // namespace

double covering_radius(const BallSystem& sys, const QuadratureSpec& probes) {
  if (sys.size() < 1) raise(Errc::insufficient_balls, "covering radius needs a nonempty system");
  const int n = sys.domain().n;
  const int L = sys.size();
  std::vector<Vec> centers;
  centers.reserve(static_cast<size_t>(L));
  for (int k = 1; k <= L; ++k) centers.push_back(sys.ball(k).center.rounded());
  BallSampler sampler(n, 1.0, probes.with_stream(kStreamCovering));
  MaxAcc acc = chunked_reduce<MaxAcc>(probes.samples, [&](uint64_t b, uint64_t e) {
    MaxAcc m;
    for (uint64_t i = b; i < e; ++i) {
      Vec z = sampler.offset(i);
      double best = std::numeric_limits<double>::infinity();
      for (const Vec& c : centers) {
        double s = 0.0;
        for (int d = 0; d < n; ++d) {
          double t = z[d] - c[d];
          s += t * t;
        }
        best = std::min(best, s);
      }
      m.v = std::max(m.v, std::sqrt(best));
    }
    return m;
  });
  return acc.v;
}

// ---------------------------------------------------------------------------
// Regions

const char* region_name(Region r) {
  switch (r) {
    case Region::E: return "E";
    case Region::B: return "B";
    case Region::G: return "G";
    case Region::M: return "M";
    case Region::EFree: return "E_free";
  }
  return "?";
}

bool later_ball_hit(const BallSystem& sys, const AnchoredPoint& x, int k_min_exclusive, int k_max) {
  bool hit = false;
  visit_candidates(sys, x, k_max, [&](int k, const LocalFrame& f) {
    if (k > k_min_exclusive && f.dist < 1.0) {
      hit = true;
      return false;
    }
    return true;
  });
  return hit;
}

bool region_membership(const BallSystem& sys, const RegionParams& params, int l,
                       const AnchoredPoint& x, Region region) {
  if (l < 1 || l > sys.size()) raise(Errc::index_out_of_range, "region index out of range");
  validate_anchored(x);
  LocalFrame f = sys.local_frame(x, l);  // units of r_l
  switch (region) {
    case Region::E:
      return f.dist < 2.0;
    case Region::B:
      return f.dist < 1.0;
    case Region::G:
      return std::fabs(f.xi[0]) >= params.epsilon && std::fabs(f.xi[1]) >= params.epsilon &&
             f.dist <= 1.0 - params.epsilon;
    case Region::M:
      return region_membership(sys, params, l, x, Region::G) &&
             !later_ball_hit(sys, x, l, sys.size());
    case Region::EFree:
      return f.dist < 2.0 && !later_ball_hit(sys, x, l - 1, sys.size());
  }
  return false;
}

RegionParams calibrate_epsilon(const Domain& domain, const QuadratureSpec& quadrature) {
  domain.validate();
  struct EpsAcc {
    std::array<uint64_t, 41> ge{};
    uint64_t n = 0;
    void merge(const EpsAcc& o) {
      n += o.n;
      for (size_t j = 0; j < ge.size(); ++j) ge[j] += o.ge[j];
    }
  };
  BallSampler sampler(domain.n, 1.0, quadrature.with_stream(kStreamEpsilon));
  EpsAcc acc = chunked_reduce<EpsAcc>(quadrature.samples, [&](uint64_t b, uint64_t e) {
    EpsAcc a;
    for (uint64_t i = b; i < e; ++i) {
      Vec y = sampler.offset(i);
      double estar = std::min({std::fabs(y[0]), std::fabs(y[1]), 1.0 - y.norm()});
      ++a.n;
      for (int j = 1; j <= 40; ++j)
        if (estar >= 0.01 * j) ++a.ge[static_cast<size_t>(j)];
    }
    return a;
  });
  for (int j = 40; j >= 1; --j) {
    double frac = static_cast<double>(acc.ge[static_cast<size_t>(j)]) / static_cast<double>(acc.n);
    double se = std::sqrt(std::max(0.0, frac * (1.0 - frac)) / static_cast<double>(acc.n));
    if (frac >= 2.0 / 3.0 + 3.0 * se) return RegionParams{0.01 * j};
  }
  raise(Errc::calibration_failed, "no grid epsilon reaches a 2/3 volume fraction");
}

RegionReport estimate_region_fraction(const BallSystem& sys, const RegionParams& params, int l,
                                      Region region, const QuadratureSpec& quadrature) {
  if (l < 1 || l > sys.size()) raise(Errc::index_out_of_range, "region index out of range");
  const bool outer_reference = region == Region::E || region == Region::EFree;
  const double ref_radius = outer_reference ? 1.0 : 0.5;  // anchor units (R_l)
  BallSampler sampler(sys.domain().n, ref_radius,
                      quadrature.with_stream(kStreamRegionFraction + 131 * static_cast<uint64_t>(l) +
                                             static_cast<uint64_t>(region)));
  HitCount hc = chunked_reduce<HitCount>(quadrature.samples, [&](uint64_t b, uint64_t e) {
    HitCount h;
    for (uint64_t i = b; i < e; ++i) {
      AnchoredPoint p{l, sampler.offset(i)};
      ++h.total;
      if (region_membership(sys, params, l, p, region)) ++h.hits;
    }
    return h;
  });
  RegionReport rep;
  rep.region = region;
  rep.l = l;
  rep.fraction = hc.fraction();
  rep.std_error = hc.std_error();
  rep.samples = hc.total;
  rep.truncation_tail_ratio =
      (region == Region::M || region == Region::EFree) ? sys.truncation_tail_bound(l) : 0.0;
  return rep;
}

// ---------------------------------------------------------------------------
// Serialization

std::string BallSystem::to_json_string() const {
  nlohmann::ordered_json doc;
  doc["n"] = domain_.n;
  doc["rho"] = rho_;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const Ball& b : balls_) {
    nlohmann::ordered_json jb;
    std::vector<double> hi(static_cast<size_t>(domain_.n)), lo(static_cast<size_t>(domain_.n));
    for (int i = 0; i < domain_.n; ++i) {
      hi[static_cast<size_t>(i)] = b.center[i].hi;
      lo[static_cast<size_t>(i)] = b.center[i].lo;
    }
    jb["center_hi"] = hi;
    jb["center_lo"] = lo;
    jb["R"] = b.R;
    arr.push_back(std::move(jb));
  }
  doc["balls"] = std::move(arr);
  return doc.dump(1);
}

BallSystem BallSystem::from_json_string(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const std::exception& ex) {
    raise(Errc::io_error, std::string("ball system parse error: ") + ex.what());
  }
  if (!doc.contains("n") || !doc.contains("rho") || !doc.contains("balls"))
    raise(Errc::io_error, "ball system document missing n/rho/balls");
  Domain domain{doc["n"].get<int>()};
  double rho = doc["rho"].get<double>();
  std::vector<Ball> balls;
  for (const auto& jb : doc["balls"]) {
    Ball b;
    b.center = DDVec(domain.n);
    auto hi = jb.at("center_hi").get<std::vector<double>>();
    auto lo = jb.at("center_lo").get<std::vector<double>>();
    if (static_cast<int>(hi.size()) != domain.n || static_cast<int>(lo.size()) != domain.n)
      raise(Errc::io_error, "ball center has wrong dimension");
    for (int i = 0; i < domain.n; ++i)
      b.center[i] = DDouble(hi[static_cast<size_t>(i)], lo[static_cast<size_t>(i)]);
    b.R = jb.at("R").get<double>();
    balls.push_back(std::move(b));
  }
  return from_parts(domain, rho, std::move(balls));
}

void BallSystem::save(const std::string& path) const { atomic_write_file(path, to_json_string()); }

BallSystem BallSystem::load(const std::string& path) {
  return from_json_string(read_file(path));
}

}  // namespace apblow
