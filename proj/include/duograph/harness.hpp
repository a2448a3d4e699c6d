#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "duograph/analytic.hpp"
#include "duograph/double_graph.hpp"
#include "duograph/errors.hpp"
#include "duograph/joint.hpp"
#include "duograph/parallel.hpp"
#include "duograph/rng.hpp"

namespace duograph {

/// Largest integer r with r*r <= n.
inline std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

/// Prints a double with 10 significant digits (CSV/JSON float convention).
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

struct TrialConfig {
  VertexId n = 1;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  std::uint64_t seed = 0;
  /// Size-core threshold; 0 stands for the default ceil(n^{3/5}).
  std::uint32_t theta = 0;
  /// Ball radius for the local upper-bound statistic; -1 stands for the
  /// default max(3, ceil(log log n)), 0 disables the statistic.
  std::int32_t s = -1;
  bool compute_cores = false;

  std::uint32_t effective_theta() const {
    if (theta > 0) return theta;
    const double t = std::ceil(std::pow(static_cast<double>(n), 0.6));
    return t < 1.0 ? 1u : static_cast<std::uint32_t>(t);
  }

  std::uint32_t effective_br_depth() const {
    if (s > 0) return static_cast<std::uint32_t>(s);
    if (s == 0) return 0;
    double d = 3.0;
    if (n > 15) d = std::max(3.0, std::ceil(std::log(std::log(static_cast<double>(n)))));
    return static_cast<std::uint32_t>(d);
  }
};

struct TrialRecord {
  TrialConfig config;
  SizeHistogram histogram;
  std::uint64_t largest = 0;
  std::uint64_t second_largest = 0;
  std::uint64_t count_size1 = 0;
  std::uint64_t count_size2 = 0;
  std::uint64_t count_mid = 0;  // parts with 3 <= size <= floor(sqrt(n))
  std::optional<std::uint64_t> tadpole_core_size;
  std::optional<std::uint64_t> size_core_size;
  std::optional<double> br_fraction;
  double beta_predicted = 0.0;
  double gen_ms = 0.0;
  double decomp_ms = 0.0;
};

/// Generates, decomposes and measures one configuration. Deterministic in
/// the configuration; `threads` only affects the internal fan-out of the
/// ball statistic.
inline TrialRecord run_trial(const TrialConfig& cfg, unsigned threads = 1) {
  using clock = std::chrono::steady_clock;
  TrialRecord rec;
  rec.config = cfg;

  const auto t0 = clock::now();
  const DoubleGraph g = DoubleGraph::generate(cfg.n, cfg.lambda1, cfg.lambda2, cfg.seed);
  const auto t1 = clock::now();
  const Partition joint = joint_components(g);
  const auto t2 = clock::now();
  rec.gen_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  rec.decomp_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();

  rec.histogram = census(joint);
  rec.largest = rec.histogram.largest;
  rec.second_largest = rec.histogram.second_largest;
  rec.count_size1 = rec.histogram.count_of(1);
  rec.count_size2 = rec.histogram.count_of(2);
  const std::uint64_t root_n = isqrt(cfg.n);
  for (const auto& [size, cnt] : rec.histogram.counts)
    if (size >= 3 && size <= root_n) rec.count_mid += cnt;

  if (cfg.compute_cores) {
    rec.tadpole_core_size = tadpole_core(g).vertices.size();
    rec.size_core_size = size_core(g, cfg.effective_theta()).vertices.size();
  }
  if (const std::uint32_t depth = cfg.effective_br_depth(); depth > 0)
    rec.br_fraction = br_fraction(g, depth, threads);
  rec.beta_predicted = beta(cfg.lambda1, cfg.lambda2).beta;
  return rec;
}

inline constexpr const char* kSweepCsvHeader =
    "n,lambda1,lambda2,seed,largest,second_largest,count_size1,count_size2,"
    "count_mid,tadpole_core,size_core,br_fraction,beta_predicted,gen_ms,decomp_ms";

/// One CSV row for a trial record. The two timing columns are left empty:
/// output files are a pure function of the inputs, which wall-clock values
/// would break.
inline std::string sweep_csv_row(const TrialRecord& r) {
  std::ostringstream os;
  os << r.config.n << ',' << format_double(r.config.lambda1) << ','
     << format_double(r.config.lambda2) << ',' << r.config.seed << ',' << r.largest
     << ',' << r.second_largest << ',' << r.count_size1 << ',' << r.count_size2 << ','
     << r.count_mid << ',';
  if (r.tadpole_core_size) os << *r.tadpole_core_size;
  os << ',';
  if (r.size_core_size) os << *r.size_core_size;
  os << ',';
  if (r.br_fraction) os << format_double(*r.br_fraction);
  os << ',' << format_double(r.beta_predicted) << ",,";
  return os.str();
}

/// Runs every configuration on a bounded worker pool and writes one CSV row
/// per trial, in grid order regardless of scheduling. A failing trial writes
/// a marker row after the rows that precede it in the grid and rethrows.
inline std::vector<TrialRecord> sweep(const std::vector<TrialConfig>& grid,
                                      unsigned threads, std::ostream& out) {
  if (grid.empty()) throw parameter_error("sweep: empty grid");
  std::vector<TrialRecord> records(grid.size());
  std::vector<std::exception_ptr> failures(grid.size());
  parallel_for(grid.size(), threads, [&](unsigned, std::uint64_t i) {
    try {
      records[i] = run_trial(grid[i], 1);
    } catch (...) {
      failures[i] = std::current_exception();
    }
  });
  out << kSweepCsvHeader << '\n';
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (failures[i]) {
      try {
        std::rethrow_exception(failures[i]);
      } catch (const std::exception& e) {
        out << "#error," << e.what() << '\n';
        out.flush();
        throw;
      }
    }
    out << sweep_csv_row(records[i]) << '\n';
  }
  out.flush();
  return records;
}

inline std::vector<TrialRecord> sweep(const std::vector<TrialConfig>& grid,
                                      unsigned threads, const std::string& out_path) {
  std::ofstream out(out_path);
  if (!out) throw io_error("sweep: cannot open output file " + out_path);
  auto records = sweep(grid, threads, out);
  if (!out) throw io_error("sweep: write failed for " + out_path);
  return records;
}

/// First-moment upper bound on the expected number of joint components of
/// size 3..floor(sqrt(n)): sum over k of C(n,k) k^{2k-4} (l1 l2 / n^2)^{k-1},
/// evaluated in log space.
inline double first_moment_bound(std::uint64_t n, double lambda1, double lambda2) {
  if (lambda1 <= 0.0 || lambda2 <= 0.0) return 0.0;
  const double logn = std::log(static_cast<double>(n));
  const double log_l1l2 = std::log(lambda1) + std::log(lambda2);
  const double lgn1 = std::lgamma(static_cast<double>(n) + 1.0);
  double total = 0.0;
  const std::uint64_t kmax = isqrt(n);
  for (std::uint64_t k = 3; k <= kmax; ++k) {
    const double kd = static_cast<double>(k);
    const double log_term = lgn1 - std::lgamma(kd + 1.0) -
                            std::lgamma(static_cast<double>(n - k) + 1.0) +
                            (2.0 * kd - 4.0) * std::log(kd) +
                            (kd - 1.0) * (log_l1l2 - 2.0 * logn);
    total += std::exp(log_term);
  }
  return total;
}

struct CensusSummary {
  std::vector<TrialRecord> trials;
  std::uint64_t total_mid = 0;
  double analytic_bound = 0.0;
};

inline constexpr const char* kCensusCsvHeader =
    "kind,seed,count_size1,count_size2,count_mid,largest,second_largest,"
    "large_components,analytic_bound";

/// Repeated-census experiment: one decomposition per derived seed, one CSV
/// row per seed plus a summary row carrying the total mid-size count and the
/// analytic first-moment bound. Component sizes above sqrt(n) are listed
/// explicitly, separated by ';'.
inline CensusSummary census_experiment(VertexId n, double lambda1, double lambda2,
                                       std::uint32_t num_seeds, std::uint64_t master_seed,
                                       std::ostream& out, unsigned threads = 0) {
  if (num_seeds == 0) throw parameter_error("census_experiment: num_seeds must be >= 1");
  CensusSummary summary;
  summary.trials.resize(num_seeds);
  parallel_for(num_seeds, threads, [&](unsigned, std::uint64_t i) {
    TrialConfig cfg;
    cfg.n = n;
    cfg.lambda1 = lambda1;
    cfg.lambda2 = lambda2;
    cfg.seed = derive_seed(master_seed, i);
    cfg.s = 0;
    summary.trials[i] = run_trial(cfg);
  });
  const std::uint64_t root_n = isqrt(n);
  out << kCensusCsvHeader << '\n';
  for (const auto& rec : summary.trials) {
    summary.total_mid += rec.count_mid;
    out << "trial," << rec.config.seed << ',' << rec.count_size1 << ','
        << rec.count_size2 << ',' << rec.count_mid << ',' << rec.largest << ','
        << rec.second_largest << ',';
    bool first = true;
    for (auto it = rec.histogram.counts.rbegin(); it != rec.histogram.counts.rend();
         ++it) {
      if (it->first <= root_n) break;
      for (std::uint64_t c = 0; c < it->second; ++c) {
        if (!first) out << ';';
        out << it->first;
        first = false;
      }
    }
    out << ",\n";
  }
  summary.analytic_bound = first_moment_bound(n, lambda1, lambda2);
  out << "summary,,,," << summary.total_mid << ",,,,"
      << format_double(summary.analytic_bound) << '\n';
  out.flush();
  return summary;
}

inline CensusSummary census_experiment(VertexId n, double lambda1, double lambda2,
                                       std::uint32_t num_seeds, std::uint64_t master_seed,
                                       const std::string& out_path, unsigned threads = 0) {
  std::ofstream out(out_path);
  if (!out) throw io_error("census_experiment: cannot open " + out_path);
  auto summary =
      census_experiment(n, lambda1, lambda2, num_seeds, master_seed, out, threads);
  if (!out) throw io_error("census_experiment: write failed for " + out_path);
  return summary;
}

}  // namespace duograph
