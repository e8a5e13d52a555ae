#pragma once

// Greedy construction of the countable disjoint-window ball system on the
// unit ball, plus region predicates (E_l, B_l, G_l, M_l) and deterministic
// measure estimation. Centers and center differences are kept in
// double-double precision: at depth l the radii shrink like rho^l and points
// inside late balls are far below the absolute resolution of plain doubles,
// so sample points are always carried as (anchor ball, local offset).

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "apblow/errors.hpp"
#include "apblow/linalg.hpp"
#include "apblow/quadrature.hpp"

namespace apblow {

struct Domain {
  int n = 2;  // unit ball centered at the origin, radius 1 (fixed in v1)

  void validate() const {
    if (n < 2 || n > kMaxDim) raise(Errc::config_error, "domain dimension must be in [2,4]");
  }
  // Distance from an interior point to the boundary sphere.
  double boundary_distance(const Vec& x) const { return 1.0 - x.norm(); }
  bool contains(const Vec& x) const { return x.norm2() < 1.0; }
};

struct Ball {
  DDVec center;
  double R = 0.0;  // outer radius; the inner ball has radius r() = R/2
  double r() const { return 0.5 * R; }
};

struct BuildLogEntry {
  int l = 0;               // 1-based ball index
  uint64_t dense_index = 0;  // index into the dense point enumeration
  bool clearance_bound = false;  // radius came from d/2 rather than rho*R_prev
  double R = 0.0;
};
using BuildLog = std::vector<BuildLogEntry>;

// Deterministic enumeration of dyadic lattice points 2^-m Z^n inside the unit
// ball, ordered by level m and lexicographically within a level; points
// already emitted at a coarser level are skipped. Dense in the domain.
class DenseSequence {
 public:
  explicit DenseSequence(int n) : n_(n) {}
  const Vec& point(uint64_t index1);  // 1-based
  uint64_t generated() const { return pts_.size(); }

 private:
  void extend_level();
  int n_;
  int next_m_ = 0;
  std::vector<Vec> pts_;
};

Vec dense_sequence_point(const Domain& domain, uint64_t index1);

struct AnchoredPoint {
  int anchor = 0;  // 0 = domain frame (scale 1); k >= 1 = ball k frame (scale R_k)
  Vec offset;      // in units of the anchor scale; |offset| <= 4
};

// Offsets beyond a few anchor radii must be re-anchored: the candidate-ball
// pruning assumes a reach of 4 anchor scales.
inline void validate_anchored(const AnchoredPoint& x) {
  if (x.offset.norm2() > 16.0 * (1.0 + 1e-9))
    raise(Errc::domain_error, "anchored offset exceeds the 4-radius chart");
}

struct RadiusDecayReport {
  bool ok = false;
  double worst_ratio = 0.0;
};

struct ContainmentReport {
  bool ok = false;
  double worst_reach = 0.0;  // max over k of |x^k| + R_k (must stay < 1)
};

struct RegionParams {
  double epsilon = 0.0;  // slab/annulus margin; depends only on the dimension
};

enum class Region { E, B, G, M, EFree };
const char* region_name(Region r);

struct RegionReport {
  Region region = Region::E;
  int l = 0;
  double fraction = 0.0;
  double std_error = 0.0;
  uint64_t samples = 0;
  // Upper bound on Sum_{k>L} |B_k| / |B_l| neglected by the truncated M_l
  // predicate (0 for regions that do not reference later balls).
  double truncation_tail_ratio = 0.0;
};

// Offset of an anchored point relative to ball k, in units of r_k.
struct LocalFrame {
  Vec xi;
  double dist = 0.0;  // |x - x^k| / r_k
};

// Cached center difference x^a - x^k for a ball within reach of anchor a.
struct Neighbor {
  int k = 0;
  DDVec diff;
};

class BallSystem {
 public:
  BallSystem() = default;

  static BallSystem build(const Domain& domain, double rho, int count, BuildLog* log = nullptr);
  // Assembles a system from explicit parts (used by the loader and by tests
  // that need hand-made systems); only structural validity is enforced.
  static BallSystem from_parts(const Domain& domain, double rho, std::vector<Ball> balls);

  const Domain& domain() const { return domain_; }
  double rho() const { return rho_; }
  int size() const { return static_cast<int>(balls_.size()); }
  const Ball& ball(int k) const {  // 1-based
    check_index(k);
    return balls_[static_cast<size_t>(k - 1)];
  }

  double anchor_scale(int a) const { return a == 0 ? 1.0 : ball(a).R; }

  // x^a - x^k in double-double (a, k >= 1).
  DDVec center_diff(int a, int k) const;

  // Balls that can contain any point within reach 4*R_a of anchor a (a >= 1),
  // ascending and including a itself, with cached center differences.
  const std::vector<Neighbor>& neighbors(int a) const;

  // Balls that may contain the domain-frame position x; appended ascending.
  void candidates_at(const Vec& x, std::vector<int>& out) const;

  LocalFrame local_frame(const AnchoredPoint& x, int k) const;
  // Same, but with the center difference taken from the neighbor cache.
  LocalFrame local_frame(const AnchoredPoint& x, const Neighbor& nb) const;
  Vec absolute(const AnchoredPoint& x) const;

  // Sum_{k=l+1}^{L} |B_k|/|B_l| computed from the built radii.
  double tail_inner_volume_ratio(int l) const;
  // Geometric bound on the tail beyond the truncation: |B_L|/|B_l| * rho^n/(1-rho^n).
  double truncation_tail_bound(int l) const;

  std::string to_json_string() const;
  static BallSystem from_json_string(const std::string& text);
  void save(const std::string& path) const;
  static BallSystem load(const std::string& path);

 private:
  void check_index(int k) const {
    if (k < 1 || k > size()) raise(Errc::index_out_of_range, "ball index out of range");
  }
  void finalize();

  Domain domain_;
  double rho_ = 0.0;
  std::vector<Ball> balls_;
  std::vector<std::vector<Neighbor>> neighbors_;  // per anchor 1..L

  // Domain-frame lookup grid: cell -> ball ids whose inflated ball meets it.
  struct Grid {
    double cell = 0.0;
    int per_dim = 0;
    std::vector<std::vector<int>> cells;
    std::vector<int> big;  // balls larger than a cell, tested unconditionally
  } grid_;
  void grid_insert(int k);
  size_t grid_cell_of(const Vec& x) const;
};

// Visit the balls (ascending k <= k_max) that may contain x, with their local
// frames; fn returns false to stop early. Anchored points use the neighbor
// cache, domain-frame points the lookup grid.
template <class Fn>
void visit_candidates(const BallSystem& sys, const AnchoredPoint& x, int k_max, Fn&& fn) {
  if (x.anchor >= 1) {
    for (const Neighbor& nb : sys.neighbors(x.anchor)) {
      if (nb.k > k_max) break;
      if (!fn(nb.k, sys.local_frame(x, nb))) return;
    }
  } else {
    thread_local std::vector<int> scratch;
    sys.candidates_at(x.offset, scratch);
    for (int k : scratch) {
      if (k > k_max) break;
      if (!fn(k, sys.local_frame(x, k))) return;
    }
  }
}

std::vector<std::pair<int, int>> check_window_disjointness(const BallSystem& sys);
RadiusDecayReport check_radius_decay(const BallSystem& sys);
ContainmentReport check_containment(const BallSystem& sys);

double covering_radius(const BallSystem& sys, const QuadratureSpec& probes);

bool region_membership(const BallSystem& sys, const RegionParams& params, int l,
                       const AnchoredPoint& x, Region region);

// True when some inner ball B_k with k_min_exclusive < k <= k_max contains x.
bool later_ball_hit(const BallSystem& sys, const AnchoredPoint& x, int k_min_exclusive, int k_max);

RegionParams calibrate_epsilon(const Domain& domain, const QuadratureSpec& quadrature);

RegionReport estimate_region_fraction(const BallSystem& sys, const RegionParams& params, int l,
                                      Region region, const QuadratureSpec& quadrature);

}  // namespace apblow
