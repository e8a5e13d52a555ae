#pragma once

// Deterministic sampling plans and a schedule-independent parallel reducer.
// All averaged integrals and measure estimates in the library flow through
// this header; identical (scheme, N, seed) input yields bit-identical output
// for any worker count because samples are processed in fixed-size chunks
// that are always combined in chunk order.

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

#include "apblow/linalg.hpp"
#include "apblow/rng.hpp"

namespace apblow {

struct QuadratureSpec {
  Scheme scheme = Scheme::low_discrepancy;
  uint64_t samples = 100000;
  uint64_t seed = 0;
  uint64_t stream = 0;  // per-purpose substream identifier

  QuadratureSpec with_stream(uint64_t s) const {
    QuadratureSpec q = *this;
    q.stream = splitmix64(stream ^ splitmix64(s + 0x9E3779B97F4A7C15ull));
    return q;
  }
  QuadratureSpec with_samples(uint64_t n) const {
    QuadratureSpec q = *this;
    q.samples = n;
    return q;
  }
};

// Uniform samples over an n-ball of given radius centered at the origin of
// whatever frame the caller anchors them in. Draw count per sample is fixed
// (one radius uniform + n normal quantiles), so streams never desynchronize.
class BallSampler {
 public:
  BallSampler(int n, double radius, const QuadratureSpec& spec)
      : n_(n), radius_(radius), stream_(spec.scheme, spec.seed, spec.stream, n + 1) {}

  Vec offset(uint64_t i) const {
    Vec z(n_);
    for (int d = 0; d < n_; ++d) z[d] = inverse_normal_cdf(stream_.u(i, d + 1));
    double zn = z.norm();
    if (zn == 0.0) {  // unreachable in practice; keep the map total
      z[0] = 1.0;
      zn = 1.0;
    }
    double t = radius_ * std::pow(stream_.u(i, 0), 1.0 / n_);
    return (t / zn) * z;
  }

 private:
  int n_;
  double radius_;
  SampleStream stream_;
};

// Worker cap: APBLOW_THREADS if set, else hardware concurrency (max 8).
int worker_threads();

inline constexpr uint64_t kReduceChunk = 8192;

// Acc needs: default construction and merge(const Acc&). fn(chunk_begin,
// chunk_end) -> Acc. Results are merged in ascending chunk order.
template <class Acc, class ChunkFn>
Acc chunked_reduce(uint64_t total, ChunkFn fn, int threads = -1) {
  if (threads < 0) threads = worker_threads();
  const uint64_t nchunks = (total + kReduceChunk - 1) / kReduceChunk;
  Acc result{};
  if (nchunks == 0) return result;
  if (threads <= 1 || nchunks == 1) {
    for (uint64_t c = 0; c < nchunks; ++c) {
      uint64_t b = c * kReduceChunk;
      uint64_t e = std::min(total, b + kReduceChunk);
      Acc part = fn(b, e);
      result.merge(part);
    }
    return result;
  }
  std::vector<Acc> parts(nchunks);
  std::atomic<uint64_t> next{0};
  auto work = [&]() {
    for (;;) {
      uint64_t c = next.fetch_add(1);
      if (c >= nchunks) return;
      uint64_t b = c * kReduceChunk;
      uint64_t e = std::min(total, b + kReduceChunk);
      parts[c] = fn(b, e);
    }
  };
  std::vector<std::thread> pool;
  int nt = static_cast<int>(std::min<uint64_t>(static_cast<uint64_t>(threads), nchunks));
  pool.reserve(static_cast<size_t>(nt));
  for (int t = 0; t < nt; ++t) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  for (auto& p : parts) result.merge(p);
  return result;
}

// First and second moments of a pair of per-sample values, enough for the
// delta-method standard errors of composed ratios.
struct PairMoments {
  uint64_t n = 0;
  double sw = 0, sd = 0, sww = 0, sdd = 0, swd = 0;

  void add(double w, double d) {
    ++n;
    sw += w;
    sd += d;
    sww += w * w;
    sdd += d * d;
    swd += w * d;
  }
  void merge(const PairMoments& o) {
    n += o.n;
    sw += o.sw;
    sd += o.sd;
    sww += o.sww;
    sdd += o.sdd;
    swd += o.swd;
  }
  double mean_w() const { return sw / static_cast<double>(n); }
  double mean_d() const { return sd / static_cast<double>(n); }
  double var_w() const {
    double m = mean_w();
    return std::max(0.0, sww / static_cast<double>(n) - m * m);
  }
  double var_d() const {
    double m = mean_d();
    return std::max(0.0, sdd / static_cast<double>(n) - m * m);
  }
  double cov_wd() const { return swd / static_cast<double>(n) - mean_w() * mean_d(); }
};

struct HitCount {
  uint64_t hits = 0;
  uint64_t total = 0;
  void merge(const HitCount& o) {
    hits += o.hits;
    total += o.total;
  }
  double fraction() const { return total ? static_cast<double>(hits) / static_cast<double>(total) : 0.0; }
  double std_error() const {
    if (!total) return 0.0;
    double f = fraction();
    return std::sqrt(std::max(0.0, f * (1.0 - f)) / static_cast<double>(total));
  }
};

}  // namespace apblow
