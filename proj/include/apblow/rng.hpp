#pragma once

// Counter-based uniform streams. Every draw is a pure function of
// (seed, stream, sample index, dimension), so estimates are reproducible
// regardless of how samples are partitioned across workers.
//
// Two schemes:
//  - pseudo_random: Philox4x32-10 (Salmon et al., SC 2011 constants).
//  - low_discrepancy: scrambled Halton; base 2 uses a bit-reversal XOR
//    scramble, odd prime bases use a seeded digit permutation with pi(0)=0.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace apblow {

uint64_t splitmix64(uint64_t x);

std::array<uint32_t, 4> philox4x32_10(std::array<uint32_t, 4> ctr, uint32_t k0, uint32_t k1);

// Strictly interior uniform: (bits>>11 + 0.5) * 2^-53 in (0,1).
double u01_open(uint64_t bits);

enum class Scheme { low_discrepancy, pseudo_random };

const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

class SampleStream {
 public:
  SampleStream(Scheme scheme, uint64_t seed, uint64_t stream, int dims);

  // i-th sample (0-based), dimension dim in [0, dims). Values in (0,1) except
  // the base-2 low-discrepancy dimension 0, which may return 0.
  double u(uint64_t i, int dim) const;

  int dims() const { return dims_; }
  Scheme scheme() const { return scheme_; }

 private:
  Scheme scheme_;
  int dims_;
  uint32_t key0_ = 0, key1_ = 0;           // philox
  uint64_t mask2_ = 0;                     // halton base-2 scramble
  std::vector<std::vector<uint16_t>> perms_;  // halton digit permutations, dims >= 1
  std::vector<int> bases_;
};

// Wichura's AS241 double-precision normal quantile.
double inverse_normal_cdf(double p);

}  // namespace apblow
