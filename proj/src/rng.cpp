#include "apblow/rng.hpp"

#include <cmath>
#include <string>

#include "apblow/errors.hpp"

namespace apblow {

uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

namespace {

constexpr uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_round(std::array<uint32_t, 4>& c, uint32_t k0, uint32_t k1) {
  uint64_t p0 = static_cast<uint64_t>(kPhiloxM0) * c[0];
  uint64_t p1 = static_cast<uint64_t>(kPhiloxM1) * c[2];
  uint32_t hi0 = static_cast<uint32_t>(p0 >> 32), lo0 = static_cast<uint32_t>(p0);
  uint32_t hi1 = static_cast<uint32_t>(p1 >> 32), lo1 = static_cast<uint32_t>(p1);
  c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
}

constexpr int kHaltonPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};

uint64_t reverse_bits64(uint64_t x) {
  x = ((x & 0x5555555555555555ull) << 1) | ((x >> 1) & 0x5555555555555555ull);
  x = ((x & 0x3333333333333333ull) << 2) | ((x >> 2) & 0x3333333333333333ull);
  x = ((x & 0x0F0F0F0F0F0F0F0Full) << 4) | ((x >> 4) & 0x0F0F0F0F0F0F0F0Full);
  x = ((x & 0x00FF00FF00FF00FFull) << 8) | ((x >> 8) & 0x00FF00FF00FF00FFull);
  x = ((x & 0x0000FFFF0000FFFFull) << 16) | ((x >> 16) & 0x0000FFFF0000FFFFull);
  return (x << 32) | (x >> 32);
}

}  // namespace

std::array<uint32_t, 4> philox4x32_10(std::array<uint32_t, 4> ctr, uint32_t k0, uint32_t k1) {
  for (int r = 0; r < 10; ++r) {
    philox_round(ctr, k0, k1);
    k0 += kPhiloxW0;
    k1 += kPhiloxW1;
  }
  return ctr;
}

double u01_open(uint64_t bits) { return (static_cast<double>(bits >> 11) + 0.5) * 0x1p-53; }

const char* scheme_name(Scheme s) {
  return s == Scheme::low_discrepancy ? "low-discrepancy" : "pseudo-random";
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "low-discrepancy" || name == "ld" || name == "halton") return Scheme::low_discrepancy;
  if (name == "pseudo-random" || name == "pr" || name == "philox") return Scheme::pseudo_random;
  raise(Errc::config_error, "unknown quadrature scheme: " + name);
}

SampleStream::SampleStream(Scheme scheme, uint64_t seed, uint64_t stream, int dims)
    : scheme_(scheme), dims_(dims) {
  uint64_t k = splitmix64(seed) ^ splitmix64(stream * 0x9E3779B97F4A7C15ull + 0x6A09E667F3BCC909ull);
  if (scheme_ == Scheme::pseudo_random) {
    key0_ = static_cast<uint32_t>(k);
    key1_ = static_cast<uint32_t>(k >> 32);
    return;
  }
  if (dims_ > static_cast<int>(sizeof(kHaltonPrimes) / sizeof(int)))
    raise(Errc::config_error, "low-discrepancy stream supports at most 10 dimensions");
  mask2_ = splitmix64(k ^ 0xD1B54A32D192ED03ull);
  bases_.assign(static_cast<size_t>(dims_), 0);
  perms_.resize(static_cast<size_t>(dims_));
  for (int d = 1; d < dims_; ++d) {
    int b = kHaltonPrimes[d];
    bases_[static_cast<size_t>(d)] = b;
    auto& perm = perms_[static_cast<size_t>(d)];
    perm.resize(static_cast<size_t>(b));
    for (int j = 0; j < b; ++j) perm[static_cast<size_t>(j)] = static_cast<uint16_t>(j);
    // Fisher-Yates over {1..b-1}; pi(0) stays 0 so trailing zero digits vanish.
    uint64_t st = splitmix64(k + 0x2545F4914F6CDD1Dull * static_cast<uint64_t>(d));
    for (int j = b - 1; j > 1; --j) {
      st = splitmix64(st);
      int m = 1 + static_cast<int>(st % static_cast<uint64_t>(j));
      std::swap(perm[static_cast<size_t>(j)], perm[static_cast<size_t>(m)]);
    }
  }
}

double SampleStream::u(uint64_t i, int dim) const {
  if (scheme_ == Scheme::pseudo_random) {
    std::array<uint32_t, 4> ctr = {static_cast<uint32_t>(i), static_cast<uint32_t>(i >> 32),
                                   static_cast<uint32_t>(dim), 0x41505751u};
    auto r = philox4x32_10(ctr, key0_, key1_);
    uint64_t bits = (static_cast<uint64_t>(r[0]) << 32) | r[1];
    return u01_open(bits);
  }
  uint64_t j = i + 1;
  if (dim == 0) {
    uint64_t bits = reverse_bits64(j) ^ mask2_;
    return static_cast<double>(bits) * 0x1p-64;
  }
  int b = bases_[static_cast<size_t>(dim)];
  const auto& perm = perms_[static_cast<size_t>(dim)];
  double invb = 1.0 / b;
  double place = invb;
  double v = 0.0;
  while (j != 0) {
    v += static_cast<double>(perm[static_cast<size_t>(j % static_cast<uint64_t>(b))]) * place;
    j /= static_cast<uint64_t>(b);
    place *= invb;
  }
  return v;
}

// AS241 (Wichura 1988), PPND16: max relative error about 1e-16 on (0,1).
double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) raise(Errc::domain_error, "inverse_normal_cdf: p outside (0,1)");
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
               1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
             1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
               5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
             4.2313330701600911252e1) * r + 1.0);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
              3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
            4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
              6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
            2.05319162663775882187e0) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
              2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
            5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
              1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
            5.99832206555887937690e-1) * r + 1.0);
  }
  return q < 0.0 ? -val : val;
}

}  // namespace apblow
