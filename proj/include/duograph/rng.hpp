#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace duograph {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Derives an independent substream seed from (seed, tag). Used for layer
/// substreams, per-trial seeds and worker-independent seed fan-out.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept {
  return mix64(seed + kGoldenGamma * (tag + 1));
}

/// SplitMix64 generator. Output stream: state += 0x9E3779B97F4A7C15, then the
/// standard finalizer (xor-shift 30, mul BF58476D1CE4E5B9, xor-shift 27,
/// mul 94D049BB133111EB, xor-shift 31). Doubles use the top 53 bits.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next_u64() noexcept {
    state_ += kGoldenGamma;
    return mix64(state_);
  }

  /// Uniform double in [0, 1).
  double next_double() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

/// Number of failures before the next success in Bernoulli(p) trials.
/// Returns a huge count for p == 0 so callers fall off the end of any range.
inline std::uint64_t geometric_gap(SplitMix64& rng, double p) {
  if (p >= 1.0) return 0;
  if (p <= 0.0) return std::numeric_limits<std::uint64_t>::max();
  const double u = rng.next_double();
  const double gap = std::floor(std::log1p(-u) / std::log1p(-p));
  if (gap >= 1.8e19) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(gap);
}

/// Poisson sampler. Inversion for mu <= 10 (sequential search with a cached
/// multiplier table), Hormann's PTRS transformed rejection for larger means.
/// Both consume the generator stream deterministically.
class PoissonSampler {
 public:
  explicit PoissonSampler(double mu) : mu_(mu) {
    if (mu_ <= 0.0) return;
    if (mu_ <= kInversionCutoff) {
      p0_ = std::exp(-mu_);
      for (int k = 1; k <= kTableSize; ++k) mult_[k] = mu_ / k;
    } else {
      b_ = 0.931 + 2.53 * std::sqrt(mu_);
      a_ = -0.059 + 0.02483 * b_;
      inv_alpha_ = 1.1239 + 1.1328 / (b_ - 3.4);
      v_r_ = 0.9277 - 3.6224 / (b_ - 2.0);
      log_mu_ = std::log(mu_);
    }
  }

  double mean() const noexcept { return mu_; }

  std::uint64_t operator()(SplitMix64& rng) const {
    if (mu_ <= 0.0) return 0;
    if (mu_ <= kInversionCutoff) return inversion(rng);
    return ptrs(rng);
  }

 private:
  static constexpr double kInversionCutoff = 10.0;
  static constexpr int kTableSize = 80;  // P[Po(10) > 80] < 1e-45

  std::uint64_t inversion(SplitMix64& rng) const {
    const double u = rng.next_double();
    double p = p0_;
    double s = p;
    int k = 0;
    while (u > s && k < kTableSize) {
      ++k;
      p *= mult_[k];
      s += p;
    }
    return static_cast<std::uint64_t>(k);
  }

  std::uint64_t ptrs(SplitMix64& rng) const {
    for (;;) {
      const double u = rng.next_double() - 0.5;
      const double v = rng.next_double();
      const double us = 0.5 - std::fabs(u);
      const double kf = std::floor((2.0 * a_ / us + b_) * u + mu_ + 0.43);
      if (us >= 0.07 && v <= v_r_ && kf >= 0.0)
        return static_cast<std::uint64_t>(kf);
      if (kf < 0.0 || (us < 0.013 && v > us)) continue;
      const double k = kf;
      const double lhs = std::log(v * inv_alpha_ / (a_ / (us * us) + b_));
      const double rhs = k * log_mu_ - mu_ - std::lgamma(k + 1.0);
      if (lhs <= rhs) return static_cast<std::uint64_t>(kf);
    }
  }

  double mu_ = 0.0;
  // inversion state
  double p0_ = 0.0;
  double mult_[kTableSize + 1] = {};
  // PTRS state
  double b_ = 0.0, a_ = 0.0, inv_alpha_ = 0.0, v_r_ = 0.0, log_mu_ = 0.0;
};

}  // namespace duograph
