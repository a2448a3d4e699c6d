#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "duograph/colored_tree.hpp"
#include "duograph/errors.hpp"
#include "duograph/parallel.hpp"
#include "duograph/rng.hpp"

namespace duograph {

inline constexpr std::uint64_t kDefaultNodeCap = 1'000'000;

/// Samples the bicoloured Galton-Watson tree: every node above the depth
/// limit independently receives Poisson(lambda1) red and Poisson(lambda2)
/// blue children. Nodes are expanded in BFS order, drawing the red count
/// then the blue count, and appending red children before blue ones.
/// Generation stops at `depth` or once `node_cap` nodes exist (truncated).
inline ColoredTree sample_tree(double lambda1, double lambda2, std::uint32_t depth,
                               std::uint64_t node_cap, std::uint64_t seed) {
  for (double l : {lambda1, lambda2})
    if (!std::isfinite(l) || l < 0.0)
      throw parameter_error("sample_tree: lambda must be finite and non-negative");
  if (node_cap == 0) throw parameter_error("sample_tree: node_cap must be positive");
  SplitMix64 rng(seed);
  const PoissonSampler red(lambda1);
  const PoissonSampler blue(lambda2);
  ColoredTree tree;
  tree.parent.push_back(ColoredTree::npos);
  tree.color.push_back(EdgeColor::red);
  tree.generation_begin = {0, 1};
  tree.reliable_depth = depth;
  std::uint32_t gen = 0;             // generation of the node being expanded
  std::uint32_t gen_end = 1;         // first index beyond generation `gen`
  for (std::uint32_t idx = 0; idx < tree.parent.size(); ++idx) {
    if (idx == gen_end) {
      ++gen;
      gen_end = static_cast<std::uint32_t>(tree.parent.size());
      tree.generation_begin.push_back(gen_end);
    }
    if (gen == depth) break;
    const std::uint64_t kr = red(rng);
    const std::uint64_t kb = blue(rng);
    for (std::uint64_t i = 0; i < kr + kb; ++i) {
      if (tree.parent.size() >= node_cap) {
        tree.truncated = true;
        tree.reliable_depth = std::min(tree.reliable_depth, gen);
        break;
      }
      tree.parent.push_back(idx);
      tree.color.push_back(i < kr ? EdgeColor::red : EdgeColor::blue);
    }
    if (tree.truncated) break;
  }
  // Close the generation index: everything appended after the last boundary
  // forms the final (possibly partial) generation.
  if (tree.generation_begin.back() != tree.parent.size())
    tree.generation_begin.push_back(static_cast<std::uint32_t>(tree.parent.size()));
  return tree;
}

namespace detail {

/// Largest d such that the node roots a perfect red-blue binary witness of
/// height d (level 0 always holds; level j+1 needs a red and a blue child at
/// level j). Children carry larger indices, so one descending pass with
/// per-node best-child levels suffices.
inline void rb_levels(const ColoredTree& tree, std::vector<std::int32_t>& level,
                      std::uint32_t skip_node = ColoredTree::npos) {
  const auto n = static_cast<std::uint32_t>(tree.size());
  level.assign(n, 0);
  std::vector<std::int32_t> best_red(n, -1), best_blue(n, -1);
  for (std::uint32_t i = n; i-- > 0;) {
    if (i == skip_node) {
      level[i] = -1;
      continue;
    }
    if (best_red[i] >= 0 && best_blue[i] >= 0)
      level[i] = 1 + std::min(best_red[i], best_blue[i]);
    if (i == 0) break;
    const std::uint32_t p = tree.parent[i];
    auto& slot = tree.color[i] == EdgeColor::red ? best_red[p] : best_blue[p];
    slot = std::max(slot, level[i]);
  }
}

}  // namespace detail

/// Whether the tree rooted at node 0 has the height-`d` red-blue binary
/// witness property. Requires a tree whose generations up to `d` are fully
/// expanded (reliable_depth >= d).
inline bool has_binary_rb(const ColoredTree& tree, std::uint32_t d) {
  if (d > tree.reliable_depth)
    throw parameter_error("has_binary_rb: tree not reliable to depth d");
  if (d == 0) return true;
  std::vector<std::int32_t> level;
  detail::rb_levels(tree, level);
  return level[0] >= static_cast<std::int32_t>(d);
}

/// Robust variant: the witness property of height k must survive the
/// deletion of any single generation-k node. Decided by capped witness
/// counting: a node is fragile exactly when, on the red or the blue side,
/// only one child supplies the needed level and that child is fragile.
inline bool robust_rb(const ColoredTree& tree, std::uint32_t k) {
  if (k == 0) throw parameter_error("robust_rb: k must be positive");
  if (k > tree.reliable_depth)
    throw parameter_error("robust_rb: tree not reliable to depth k");
  std::vector<std::int32_t> level;
  detail::rb_levels(tree, level);
  if (level[0] < static_cast<std::int32_t>(k)) return false;
  const auto n = static_cast<std::uint32_t>(tree.size());
  // cnt[c][i]: number of color-c children of i meeting the required level,
  // capped at 2; frag[c][i]: fragility of the unique such child when cnt==1.
  std::vector<std::uint8_t> cnt_red(n, 0), cnt_blue(n, 0);
  std::vector<std::uint8_t> frag_red(n, 0), frag_blue(n, 0), fragile(n, 0);
  std::uint32_t gen = tree.depth();
  std::uint32_t gen_begin = tree.generation_begin[gen];
  for (std::uint32_t i = n; i-- > 0;) {
    while (i < gen_begin) gen_begin = tree.generation_begin[--gen];
    if (gen > k) continue;
    const std::int32_t need = static_cast<std::int32_t>(k - gen);
    if (need == 0) {
      fragile[i] = 1;  // deleting the node itself removes its contribution
    } else if (level[i] >= need) {
      fragile[i] = (cnt_red[i] == 1 && frag_red[i]) || (cnt_blue[i] == 1 && frag_blue[i]);
    } else {
      continue;  // node cannot supply the level; parents never count it
    }
    if (i == 0) break;
    const std::uint32_t p = tree.parent[i];
    auto& cnt = tree.color[i] == EdgeColor::red ? cnt_red[p] : cnt_blue[p];
    auto& frg = tree.color[i] == EdgeColor::red ? frag_red[p] : frag_blue[p];
    if (cnt == 0) frg = fragile[i];
    if (cnt < 2) ++cnt;
  }
  return !fragile[0];
}

/// Reference implementation of robust_rb: re-evaluates the witness property
/// with each generation-k node deleted in turn. Quadratic; kept as an oracle
/// for tests.
inline bool robust_rb_naive(const ColoredTree& tree, std::uint32_t k) {
  if (k == 0) throw parameter_error("robust_rb_naive: k must be positive");
  if (k > tree.reliable_depth)
    throw parameter_error("robust_rb_naive: tree not reliable to depth k");
  std::vector<std::int32_t> level;
  detail::rb_levels(tree, level);
  if (level[0] < static_cast<std::int32_t>(k)) return false;
  if (k > tree.depth()) return false;
  for (std::uint32_t w = tree.generation_begin[k]; w < tree.generation_begin[k + 1];
       ++w) {
    detail::rb_levels(tree, level, w);
    if (level[0] < static_cast<std::int32_t>(k)) return false;
  }
  return true;
}

enum class TreeEvent { binary_rb, robust_rb };

struct EstimateReport {
  std::string event;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t resamples = 0;  // truncated draws that had to be replaced
};

/// Monte Carlo estimate of Pr[B_level] or Pr[RB_level]. Trial i samples a
/// tree with seed derive_seed(seed, i); draws truncated below the decision
/// depth are resampled with further derived seeds. Worker fan-out does not
/// affect the result.
inline EstimateReport estimate_event(double lambda1, double lambda2, TreeEvent event,
                                     std::uint32_t level, std::uint64_t trials,
                                     std::uint64_t seed, unsigned threads = 0,
                                     std::uint64_t node_cap = kDefaultNodeCap) {
  if (trials == 0) throw parameter_error("estimate_event: trials must be positive");
  if (event == TreeEvent::robust_rb && level == 0)
    throw parameter_error("estimate_event: RB level must be positive");
  constexpr int kMaxResample = 64;
  threads = resolve_threads(threads);
  std::vector<std::uint64_t> success_by_worker(threads, 0);
  std::vector<std::uint64_t> resample_by_worker(threads, 0);
  parallel_for(trials, threads, [&](unsigned w, std::uint64_t i) {
    std::uint64_t trial_seed = derive_seed(seed, i);
    for (int attempt = 0;; ++attempt) {
      if (attempt == kMaxResample)
        throw numeric_error("estimate_event: node cap too small to decide event");
      const ColoredTree tree = sample_tree(lambda1, lambda2, level, node_cap, trial_seed);
      if (tree.reliable_depth < level) {
        ++resample_by_worker[w];
        trial_seed = derive_seed(trial_seed, 1 + static_cast<std::uint64_t>(attempt));
        continue;
      }
      const bool hit = event == TreeEvent::binary_rb ? has_binary_rb(tree, level)
                                                     : robust_rb(tree, level);
      if (hit) ++success_by_worker[w];
      return;
    }
  });
  EstimateReport rep;
  rep.event = (event == TreeEvent::binary_rb ? "B_" : "RB_") + std::to_string(level);
  rep.trials = trials;
  for (auto s : success_by_worker) rep.successes += s;
  for (auto r : resample_by_worker) rep.resamples += r;
  rep.estimate = static_cast<double>(rep.successes) / static_cast<double>(trials);
  rep.std_error =
      std::sqrt(rep.estimate * (1.0 - rep.estimate) / static_cast<double>(trials));
  return rep;
}

struct GrowthReport {
  std::vector<double> mean;       // per generation 0..depth
  std::vector<double> std_error;  // of the mean
  std::vector<std::uint64_t> samples;
  std::uint64_t threshold = 0;
  std::uint64_t exceed_count = 0;  // trials whose total size exceeded threshold
  double exceed_fraction = 0.0;
  std::uint64_t truncated_trials = 0;
};

/// Per-generation empirical means of the population size. Generation sizes
/// are drawn directly as N_{t+1} = Po(N_t*lambda1) + Po(N_t*lambda2) (red
/// count first), which matches the branching process distribution without
/// materializing trees. Trials whose running total would exceed `node_cap`
/// stop early and contribute only their completed generations.
inline GrowthReport growth_check(double lambda1, double lambda2, std::uint32_t depth,
                                 std::uint64_t trials, std::uint64_t seed,
                                 std::uint64_t size_threshold = 0,
                                 std::uint64_t node_cap = kDefaultNodeCap) {
  for (double l : {lambda1, lambda2})
    if (!std::isfinite(l) || l < 0.0)
      throw parameter_error("growth_check: lambda must be finite and non-negative");
  if (trials == 0) throw parameter_error("growth_check: trials must be positive");
  GrowthReport rep;
  rep.threshold = size_threshold;
  std::vector<double> sum(depth + 1, 0.0), sumsq(depth + 1, 0.0);
  rep.samples.assign(depth + 1, 0);
  for (std::uint64_t i = 0; i < trials; ++i) {
    SplitMix64 rng(derive_seed(seed, i));
    std::uint64_t n_t = 1;
    std::uint64_t total = 1;
    bool exceeded = size_threshold > 0 && total > size_threshold;
    for (std::uint32_t t = 0;; ++t) {
      sum[t] += static_cast<double>(n_t);
      sumsq[t] += static_cast<double>(n_t) * static_cast<double>(n_t);
      ++rep.samples[t];
      if (t == depth) break;
      const double base = static_cast<double>(n_t);
      const std::uint64_t next =
          PoissonSampler(base * lambda1)(rng) + PoissonSampler(base * lambda2)(rng);
      total += next;
      if (size_threshold > 0 && total > size_threshold) exceeded = true;
      if (total > node_cap) {
        ++rep.truncated_trials;
        break;
      }
      n_t = next;
      if (n_t == 0) {
        // Extinct: remaining generations are exactly zero.
        for (std::uint32_t r = t + 1; r <= depth; ++r) ++rep.samples[r];
        break;
      }
    }
    if (exceeded) ++rep.exceed_count;
  }
  rep.mean.resize(depth + 1);
  rep.std_error.resize(depth + 1);
  for (std::uint32_t t = 0; t <= depth; ++t) {
    const double m = rep.samples[t] ? sum[t] / static_cast<double>(rep.samples[t]) : 0.0;
    rep.mean[t] = m;
    if (rep.samples[t] > 1) {
      const double var =
          (sumsq[t] - static_cast<double>(rep.samples[t]) * m * m) /
          static_cast<double>(rep.samples[t] - 1);
      rep.std_error[t] = std::sqrt(std::max(var, 0.0) / static_cast<double>(rep.samples[t]));
    }
  }
  rep.exceed_fraction = static_cast<double>(rep.exceed_count) / static_cast<double>(trials);
  return rep;
}

}  // namespace duograph
