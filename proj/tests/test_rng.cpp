#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

#include "duograph/rng.hpp"

using namespace duograph;

TEST_CASE("splitmix64 emits the reference stream") {
  SplitMix64 a(0);
  CHECK(a.next_u64() == 0xe220a8397b1dcdafULL);
  CHECK(a.next_u64() == 0x6e789e6aa1b965f4ULL);
  CHECK(a.next_u64() == 0x06c45d188009454fULL);
  SplitMix64 b(0x123456789ABCDEFULL);
  CHECK(b.next_u64() == 0x157a3807a48faa9dULL);
  CHECK(b.next_u64() == 0xd573529b34a1d093ULL);
}

TEST_CASE("derive_seed matches the documented mixer") {
  CHECK(derive_seed(42, 7) == 0xccf635ee9e9e2fa4ULL);
  CHECK(derive_seed(42, 7) != derive_seed(42, 8));
  CHECK(derive_seed(42, 7) != derive_seed(43, 7));
}

TEST_CASE("next_double lies in [0,1) and has the right mean") {
  SplitMix64 rng(99);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.next_double();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  const double mean = sum / n;
  // se of the mean of U(0,1) is 1/sqrt(12 n)
  CHECK(std::fabs(mean - 0.5) < 4.0 / std::sqrt(12.0 * n));
}

TEST_CASE("geometric_gap edge cases") {
  SplitMix64 rng(1);
  CHECK(geometric_gap(rng, 1.0) == 0);
  CHECK(geometric_gap(rng, 0.0) == std::numeric_limits<std::uint64_t>::max());
}

TEST_CASE("geometric_gap has mean (1-p)/p") {
  SplitMix64 rng(7);
  const double p = 0.25;
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += static_cast<double>(geometric_gap(rng, p));
  const double mean = sum / n;
  const double expect = (1.0 - p) / p;
  const double sd = std::sqrt(1.0 - p) / p;
  CHECK(std::fabs(mean - expect) < 4.0 * sd / std::sqrt(static_cast<double>(n)));
}

namespace {

void check_poisson_moments(double mu, std::uint64_t seed) {
  SplitMix64 rng(seed);
  const PoissonSampler po(mu);
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double k = static_cast<double>(po(rng));
    sum += k;
    sumsq += k * k;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  const double se_mean = std::sqrt(mu / n);
  CHECK(std::fabs(mean - mu) < 4.0 * se_mean);
  // Var of the sample variance of Poisson ~ (mu + 2 mu^2)/n
  const double se_var = std::sqrt((mu + 2.0 * mu * mu) / n);
  CHECK(std::fabs(var - mu) < 5.0 * se_var);
}

}  // namespace

TEST_CASE("poisson inversion regime (mu <= 10)") {
  SplitMix64 rng(5);
  const PoissonSampler zero(0.0);
  CHECK(zero(rng) == 0);
  check_poisson_moments(2.5, 11);
  check_poisson_moments(9.5, 12);
  // P[Po(2.5) = 0] = e^{-2.5}
  const PoissonSampler po(2.5);
  SplitMix64 r2(13);
  int zeros = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) zeros += po(r2) == 0 ? 1 : 0;
  const double p0 = std::exp(-2.5);
  CHECK(std::fabs(zeros / static_cast<double>(n) - p0) <
        4.0 * std::sqrt(p0 * (1 - p0) / n));
}

TEST_CASE("poisson rejection regime (mu > 10)") {
  check_poisson_moments(15.0, 21);
  check_poisson_moments(120.0, 22);
  check_poisson_moments(60000.0, 23);
}

TEST_CASE("poisson sampling is deterministic per seed") {
  const PoissonSampler po(4.0);
  std::vector<std::uint64_t> a, b;
  SplitMix64 r1(77), r2(77);
  for (int i = 0; i < 100; ++i) a.push_back(po(r1));
  for (int i = 0; i < 100; ++i) b.push_back(po(r2));
  CHECK(a == b);
}
