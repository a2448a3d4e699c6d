#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "duograph/branching.hpp"
#include "duograph/double_graph.hpp"
#include "duograph/errors.hpp"
#include "duograph/parallel.hpp"
#include "duograph/partition.hpp"

namespace duograph {

namespace detail {

/// Connected components of one color inside the vertices with
/// part_of[v] == pid, collected into `comps`. Uses an epoch-stamped visited
/// array so repeated sweeps need no clearing.
inline void part_components(const DoubleGraph& g, EdgeColor color,
                            const std::vector<VertexId>& members, std::uint32_t pid,
                            const std::vector<std::uint32_t>& part_of,
                            std::vector<std::uint32_t>& stamp, std::uint32_t& epoch,
                            std::vector<VertexId>& queue,
                            std::vector<std::vector<VertexId>>& comps) {
  comps.clear();
  ++epoch;
  for (VertexId seed : members) {
    if (stamp[seed] == epoch) continue;
    comps.emplace_back();
    auto& comp = comps.back();
    queue.clear();
    queue.push_back(seed);
    stamp[seed] = epoch;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const VertexId x = queue[head];
      comp.push_back(x);
      for (VertexId y : g.neighbors(color, x)) {
        if (part_of[y] != pid || stamp[y] == epoch) continue;
        stamp[y] = epoch;
        queue.push_back(y);
      }
    }
  }
}

}  // namespace detail

/// Coarsest partition whose parts all induce a red-connected and a
/// blue-connected subgraph (equivalently, the maximal jointly connected
/// sets). Worklist refinement: a part is replaced by the connected
/// components of its induced red subgraph, then blue, until no part splits.
/// Component sweeps run over a part-membership array, so no induced
/// subgraphs are materialized.
inline Partition joint_components(const DoubleGraph& g) {
  const VertexId n = g.vertex_count();
  std::vector<std::vector<VertexId>> parts;
  std::vector<std::uint32_t> part_of(n, 0);
  parts.emplace_back(n);
  std::iota(parts[0].begin(), parts[0].end(), 0u);
  std::vector<std::uint32_t> worklist{0};
  std::vector<std::uint32_t> stamp(n, 0);
  std::uint32_t epoch = 0;
  std::vector<VertexId> queue;
  std::vector<std::vector<VertexId>> comps;

  while (!worklist.empty()) {
    const std::uint32_t pid = worklist.back();
    worklist.pop_back();
    for (EdgeColor color : {EdgeColor::red, EdgeColor::blue}) {
      detail::part_components(g, color, parts[pid], pid, part_of, stamp, epoch, queue,
                              comps);
      if (comps.size() <= 1) continue;
      for (auto& comp : comps) {
        const auto id = static_cast<std::uint32_t>(parts.size());
        for (VertexId v : comp) part_of[v] = id;
        parts.push_back(std::move(comp));
        worklist.push_back(id);
      }
      parts[pid].clear();
      break;  // the part is gone; its pieces are queued
    }
  }

  Partition out;
  out.part_of.assign(n, Partition::npos);
  for (auto& p : parts)
    if (!p.empty()) out.parts.push_back(std::move(p));
  out.canonicalize();
  return out;
}

/// Exponential-time oracle for joint_components (n <= 16): enumerates all
/// vertex subsets, keeps the jointly connected ones (both induced layers
/// connected) and merges overlapping ones with union-find.
inline Partition brute_force_joint_components(const DoubleGraph& g) {
  const VertexId n = g.vertex_count();
  if (n > 16) throw parameter_error("brute_force_joint_components: n must be <= 16");
  std::vector<std::uint32_t> mask[2];
  for (int c = 0; c < 2; ++c) {
    mask[c].assign(n, 0);
    for (VertexId v = 0; v < n; ++v)
      for (VertexId y : g.neighbors(static_cast<EdgeColor>(c), v))
        mask[c][v] |= 1u << y;
  }
  auto layer_connected = [&](std::uint32_t sub, const std::vector<std::uint32_t>& adj) {
    const std::uint32_t seed = sub & (~sub + 1);
    std::uint32_t reach = seed;
    for (;;) {
      std::uint32_t grow = reach;
      std::uint32_t rest = reach;
      while (rest) {
        const int v = std::countr_zero(rest);
        rest &= rest - 1;
        grow |= adj[v] & sub;
      }
      if (grow == reach) break;
      reach = grow;
    }
    return reach == sub;
  };
  std::vector<std::uint32_t> root(n);
  std::iota(root.begin(), root.end(), 0u);
  auto find = [&](std::uint32_t v) {
    while (root[v] != v) v = root[v] = root[root[v]];
    return v;
  };
  const std::uint32_t full = n >= 32 ? ~0u : (1u << n) - 1;
  for (std::uint32_t sub = 1; sub <= full; ++sub) {
    if ((sub & (sub - 1)) == 0) continue;  // singletons are trivially joint
    if (!layer_connected(sub, mask[0]) || !layer_connected(sub, mask[1])) continue;
    const int first = std::countr_zero(sub);
    std::uint32_t rest = sub & (sub - 1);
    while (rest) {
      const int v = std::countr_zero(rest);
      rest &= rest - 1;
      root[find(v)] = find(first);
    }
  }
  Partition out;
  out.part_of.assign(n, Partition::npos);
  std::map<std::uint32_t, std::vector<VertexId>> groups;
  for (VertexId v = 0; v < n; ++v) groups[find(v)].push_back(v);
  for (auto& [r, members] : groups) out.parts.push_back(std::move(members));
  out.canonicalize();
  return out;
}

/// A peeled core and how many peeling passes it took to stabilize.
struct CoreResult {
  enum class Kind { tadpole, size };
  Kind kind = Kind::tadpole;
  std::uint32_t threshold = 0;  // size cores only
  std::vector<VertexId> vertices;
  std::uint32_t rounds = 0;  // passes that removed at least one vertex
};

namespace detail {

/// Iterated whole-component peeling. `keep(size, edges)` decides whether a
/// monochromatic component survives; both colors are evaluated against the
/// same surviving set within a pass, so the result is order-independent.
template <typename Keep>
std::pair<std::vector<VertexId>, std::uint32_t> peel_core(const DoubleGraph& g,
                                                          Keep&& keep) {
  const VertexId n = g.vertex_count();
  std::vector<char> alive(n, 1);
  std::vector<char> doomed(n, 0);
  std::vector<std::uint32_t> stamp(n, 0);
  std::uint32_t epoch = 0;
  std::vector<VertexId> queue, comp;
  std::uint32_t rounds = 0;
  for (;;) {
    bool removed = false;
    std::fill(doomed.begin(), doomed.end(), 0);
    for (EdgeColor color : {EdgeColor::red, EdgeColor::blue}) {
      ++epoch;
      for (VertexId seed = 0; seed < n; ++seed) {
        if (!alive[seed] || stamp[seed] == epoch) continue;
        comp.clear();
        queue.clear();
        queue.push_back(seed);
        stamp[seed] = epoch;
        std::uint64_t degree_sum = 0;
        for (std::size_t head = 0; head < queue.size(); ++head) {
          const VertexId x = queue[head];
          comp.push_back(x);
          for (VertexId y : g.neighbors(color, x)) {
            if (!alive[y]) continue;
            ++degree_sum;
            if (stamp[y] != epoch) {
              stamp[y] = epoch;
              queue.push_back(y);
            }
          }
        }
        if (!keep(comp.size(), degree_sum / 2)) {
          for (VertexId v : comp) doomed[v] = 1;
        }
      }
    }
    for (VertexId v = 0; v < n; ++v) {
      if (alive[v] && doomed[v]) {
        alive[v] = 0;
        removed = true;
      }
    }
    if (!removed) break;
    ++rounds;
  }
  std::vector<VertexId> vertices;
  for (VertexId v = 0; v < n; ++v)
    if (alive[v]) vertices.push_back(v);
  return {std::move(vertices), rounds};
}

}  // namespace detail

/// Maximal vertex set whose induced subgraph keeps every vertex in a cyclic
/// red component and a cyclic blue component (a vertex lies in a
/// monochromatic tadpole exactly when its component carries a cycle).
/// A component with e edges on c vertices is acyclic iff e == c - 1; the
/// red-blue doubled pair is not a monochromatic cycle.
inline CoreResult tadpole_core(const DoubleGraph& g) {
  CoreResult res;
  res.kind = CoreResult::Kind::tadpole;
  auto [vertices, rounds] = detail::peel_core(
      g, [](std::size_t size, std::uint64_t edges) { return edges >= size; });
  res.vertices = std::move(vertices);
  res.rounds = rounds;
  return res;
}

/// Maximal vertex set whose induced subgraph keeps every vertex in a red
/// component and a blue component of at least `theta` vertices each.
inline CoreResult size_core(const DoubleGraph& g, std::uint32_t theta) {
  if (theta == 0) throw parameter_error("size_core: theta must be positive");
  CoreResult res;
  res.kind = CoreResult::Kind::size;
  res.threshold = theta;
  auto [vertices, rounds] = detail::peel_core(
      g, [theta](std::size_t size, std::uint64_t) { return size >= theta; });
  res.vertices = std::move(vertices);
  res.rounds = rounds;
  return res;
}

/// Component-size census of a partition.
struct SizeHistogram {
  std::map<std::uint64_t, std::uint64_t> counts;  // size -> number of parts
  std::uint64_t largest = 0;
  std::uint64_t second_largest = 0;

  std::uint64_t count_of(std::uint64_t size) const {
    auto it = counts.find(size);
    return it == counts.end() ? 0 : it->second;
  }
};

inline SizeHistogram census(const Partition& p) {
  SizeHistogram hist;
  for (const auto& part : p.parts) ++hist.counts[part.size()];
  for (const auto& part : p.parts) {
    const std::uint64_t s = part.size();
    if (s >= hist.largest) {
      hist.second_largest = hist.largest;
      hist.largest = s;
    } else if (s > hist.second_largest) {
      hist.second_largest = s;
    }
  }
  return hist;
}

/// Fraction of vertices whose radius-s merged ball contains a cycle or whose
/// (cycle-free) BFS tree has the height-s red-blue binary witness property.
/// This is the local upper-bound statistic for the giant fraction.
inline double br_fraction(const DoubleGraph& g, std::uint32_t s, unsigned threads = 0) {
  if (s == 0) throw parameter_error("br_fraction: s must be positive");
  const VertexId n = g.vertex_count();
  threads = resolve_threads(threads);
  std::vector<std::uint64_t> hits_by_worker(threads, 0);

  struct Workspace {
    detail::BallScratch ball;
    std::vector<std::int32_t> level, best_red, best_blue;
  };
  std::vector<Workspace> ws(threads);

  constexpr std::uint64_t kStripe = 256;
  const std::uint64_t stripes = (n + kStripe - 1) / kStripe;
  parallel_for(stripes, threads, [&](unsigned w, std::uint64_t stripe) {
    auto& work = ws[w];
    const VertexId lo = static_cast<VertexId>(stripe * kStripe);
    const VertexId hi = static_cast<VertexId>(
        std::min<std::uint64_t>(n, (stripe + 1) * kStripe));
    for (VertexId v = lo; v < hi; ++v) {
      const auto ball = detail::merged_ball(g, v, s, n, work.ball);
      if (ball.contains_cycle) {
        ++hits_by_worker[w];
        continue;
      }
      // rb-level DP over the BFS tree held in the scratch arrays.
      const auto& sc = work.ball;
      const auto count = static_cast<std::uint32_t>(sc.order.size());
      work.level.assign(count, 0);
      work.best_red.assign(count, -1);
      work.best_blue.assign(count, -1);
      for (std::uint32_t i = count; i-- > 0;) {
        if (work.best_red[i] >= 0 && work.best_blue[i] >= 0)
          work.level[i] = 1 + std::min(work.best_red[i], work.best_blue[i]);
        if (i == 0) break;
        const VertexId u = sc.order[i];
        const std::uint32_t p = sc.node_index[sc.parent_vertex[u]];
        auto& slot =
            sc.via[u] == EdgeColor::red ? work.best_red[p] : work.best_blue[p];
        slot = std::max(slot, work.level[i]);
      }
      if (work.level[0] >= static_cast<std::int32_t>(s)) ++hits_by_worker[w];
    }
  });
  std::uint64_t hits = 0;
  for (auto h : hits_by_worker) hits += h;
  return static_cast<double>(hits) / static_cast<double>(n);
}

}  // namespace duograph
