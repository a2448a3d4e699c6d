#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "duograph/colored_tree.hpp"
#include "duograph/errors.hpp"
#include "duograph/partition.hpp"
#include "duograph/rng.hpp"

namespace duograph {

using VertexId = std::uint32_t;
using EdgeList = std::vector<std::pair<VertexId, VertexId>>;

/// Two independent edge layers (red, blue) over one vertex set, stored as
/// per-layer CSR adjacency with ascending neighbor lists. Immutable after
/// construction; all queries are const and thread-safe.
class DoubleGraph {
 public:
  /// Samples G(n, lambda1/n, lambda2/n): every vertex pair independently
  /// carries a red edge with probability lambda1/n and a blue edge with
  /// probability lambda2/n. Pairs are walked in lexicographic order with
  /// geometric gap skipping, so the cost is O(n + edges).
  ///
  /// Layer substreams are derived as derive_seed(seed, bits(lambda_i)), which
  /// makes generate(n, a, b, s) and generate(n, b, a, s) layer-swapped
  /// identical; equal intensities fall back to slot tags 1 and 2 so the
  /// layers stay independent.
  static DoubleGraph generate(VertexId n, double lambda1, double lambda2,
                              std::uint64_t seed) {
    if (n == 0) throw parameter_error("generate: n must be positive");
    for (double l : {lambda1, lambda2}) {
      if (!std::isfinite(l) || l < 0.0)
        throw parameter_error("generate: lambda must be finite and non-negative");
      if (l > static_cast<double>(n))
        throw parameter_error("generate: lambda exceeds n (edge probability > 1)");
    }
    std::uint64_t tag_red = std::bit_cast<std::uint64_t>(lambda1);
    std::uint64_t tag_blue = std::bit_cast<std::uint64_t>(lambda2);
    if (tag_red == tag_blue) {
      tag_red = 1;
      tag_blue = 2;
    }
    DoubleGraph g;
    g.n_ = n;
    const double nd = static_cast<double>(n);
    g.build_layer(0, sample_pairs(n, lambda1 / nd, derive_seed(seed, tag_red)));
    g.build_layer(1, sample_pairs(n, lambda2 / nd, derive_seed(seed, tag_blue)));
    return g;
  }

  /// Builds a graph from explicit edge lists (u != v, any order, no
  /// duplicates within a layer).
  static DoubleGraph from_edge_lists(VertexId n, EdgeList red, EdgeList blue) {
    if (n == 0) throw parameter_error("from_edge_lists: n must be positive");
    DoubleGraph g;
    g.n_ = n;
    g.build_layer(0, normalize_edges(n, std::move(red)));
    g.build_layer(1, normalize_edges(n, std::move(blue)));
    return g;
  }

  VertexId vertex_count() const noexcept { return n_; }

  std::uint64_t edge_count(EdgeColor c) const noexcept {
    return edge_count_[static_cast<int>(c)];
  }

  std::span<const VertexId> neighbors(EdgeColor c, VertexId v) const {
    const auto& off = offsets_[static_cast<int>(c)];
    const auto& tgt = targets_[static_cast<int>(c)];
    return {tgt.data() + off[v], tgt.data() + off[v + 1]};
  }

  std::uint32_t degree(EdgeColor c, VertexId v) const {
    const auto& off = offsets_[static_cast<int>(c)];
    return static_cast<std::uint32_t>(off[v + 1] - off[v]);
  }

  bool has_edge(EdgeColor c, VertexId u, VertexId v) const {
    auto nb = neighbors(c, u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  /// Edges of one layer as (u, v) pairs with u < v, lexicographically sorted.
  EdgeList edges(EdgeColor c) const {
    EdgeList out;
    out.reserve(edge_count(c));
    for (VertexId u = 0; u < n_; ++u)
      for (VertexId v : neighbors(c, u))
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  /// Plain-text dump: header "n red_m blue_m", then one line per edge,
  /// "r u v" or "b u v", red before blue, each layer sorted by (u, v).
  void dump(std::ostream& os) const {
    os << n_ << ' ' << edge_count(EdgeColor::red) << ' '
       << edge_count(EdgeColor::blue) << '\n';
    for (EdgeColor c : {EdgeColor::red, EdgeColor::blue}) {
      const char tag = c == EdgeColor::red ? 'r' : 'b';
      for (auto [u, v] : edges(c)) os << tag << ' ' << u << ' ' << v << '\n';
    }
  }

  static DoubleGraph load(std::istream& is) {
    std::uint64_t n = 0, mr = 0, mb = 0;
    if (!(is >> n >> mr >> mb)) throw io_error("load: malformed header");
    if (n == 0 || n > 0x7FFFFFFFULL) throw io_error("load: vertex count out of range");
    EdgeList red, blue;
    red.reserve(mr);
    blue.reserve(mb);
    for (std::uint64_t i = 0; i < mr + mb; ++i) {
      char tag;
      std::uint64_t u, v;
      if (!(is >> tag >> u >> v)) throw io_error("load: truncated edge list");
      if ((tag != 'r' && tag != 'b') || u >= n || v >= n)
        throw io_error("load: malformed edge line");
      (tag == 'r' ? red : blue).emplace_back(static_cast<VertexId>(u),
                                             static_cast<VertexId>(v));
    }
    if (red.size() != mr || blue.size() != mb)
      throw io_error("load: edge counts disagree with header");
    return from_edge_lists(static_cast<VertexId>(n), std::move(red), std::move(blue));
  }

 private:
  static EdgeList sample_pairs(VertexId n, double p, std::uint64_t stream_seed) {
    EdgeList out;
    if (p <= 0.0 || n < 2) return out;
    SplitMix64 rng(stream_seed);
    if (p >= 1.0) {
      for (VertexId u = 0; u + 1 < n; ++u)
        for (VertexId v = u + 1; v < n; ++v) out.emplace_back(u, v);
      return out;
    }
    const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    std::uint64_t pos = geometric_gap(rng, p);
    VertexId u = 0;
    std::uint64_t row_base = 0;     // linear index of pair (u, u+1)
    std::uint64_t row_len = n - 1;  // number of pairs in row u
    while (pos < total) {
      while (pos >= row_base + row_len) {
        row_base += row_len;
        --row_len;
        ++u;
      }
      const VertexId v = u + 1 + static_cast<VertexId>(pos - row_base);
      out.emplace_back(u, v);
      const std::uint64_t gap = geometric_gap(rng, p);
      if (gap >= total - pos) break;
      pos += gap + 1;
    }
    return out;
  }

  static EdgeList normalize_edges(VertexId n, EdgeList edges) {
    for (auto& [u, v] : edges) {
      if (u >= n || v >= n) throw parameter_error("edge endpoint out of range");
      if (u == v) throw parameter_error("self-loops are not allowed");
      if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
      throw parameter_error("duplicate edge within a layer");
    return edges;
  }

  /// Fills one CSR layer from a lexicographically sorted (u < v) edge list.
  /// Back edges (row v receives u) are filled first, then forward edges;
  /// both passes emit ascending targets and every back target is smaller
  /// than every forward target of its row, so rows come out sorted.
  void build_layer(int layer, const EdgeList& edges) {
    auto& off = offsets_[layer];
    auto& tgt = targets_[layer];
    edge_count_[layer] = edges.size();
    off.assign(static_cast<std::size_t>(n_) + 1, 0);
    for (auto [u, v] : edges) {
      ++off[u + 1];
      ++off[v + 1];
    }
    for (std::size_t i = 1; i < off.size(); ++i) off[i] += off[i - 1];
    tgt.resize(edges.size() * 2);
    std::vector<std::uint64_t> cursor(off.begin(), off.end() - 1);
    for (auto [u, v] : edges) tgt[cursor[v]++] = u;
    for (auto [u, v] : edges) tgt[cursor[u]++] = v;
  }

  VertexId n_ = 0;
  std::vector<std::uint64_t> offsets_[2];
  std::vector<VertexId> targets_[2];
  std::uint64_t edge_count_[2] = {0, 0};
};

namespace detail {

/// Reusable scratch for merged-layer BFS balls. All arrays are indexed by
/// graph vertex; `stamp[v] == epoch` means v is in the current ball.
struct BallScratch {
  std::vector<std::uint32_t> stamp;
  std::vector<std::uint32_t> dist;
  std::vector<std::uint32_t> node_index;  // vertex -> BFS position
  std::vector<VertexId> parent_vertex;
  std::vector<EdgeColor> via;
  std::vector<VertexId> order;
  std::uint32_t epoch = 0;

  void ensure(VertexId n) {
    if (stamp.size() < n) {
      stamp.assign(n, 0);
      dist.resize(n);
      node_index.resize(n);
      parent_vertex.resize(n);
      via.resize(n);
      epoch = 0;
    }
  }

  void begin(VertexId root) {
    if (++epoch == 0) {
      std::fill(stamp.begin(), stamp.end(), 0u);
      epoch = 1;
    }
    order.clear();
    order.push_back(root);
    stamp[root] = epoch;
    dist[root] = 0;
    node_index[root] = 0;
    parent_vertex[root] = root;
  }

  bool in_ball(VertexId v) const { return stamp[v] == epoch; }
};

struct BallResult {
  bool contains_cycle = false;
  bool truncated = false;
  std::uint32_t reliable_depth = 0;  // generations below this were fully expanded
  std::uint32_t max_depth = 0;
};

/// Breadth-first ball of radius `t` around `root` over the merged layers,
/// capped at `node_cap` vertices. Discovery walks red then blue neighbor
/// lists per vertex (each ascending). After discovery the induced edge set
/// on the ball is scanned; any non-tree edge (including the second color of
/// a doubled pair) means the induced multigraph has a cycle.
inline BallResult merged_ball(const DoubleGraph& g, VertexId root, std::uint32_t t,
                              std::uint64_t node_cap, BallScratch& s) {
  s.ensure(g.vertex_count());
  s.begin(root);
  BallResult res;
  std::uint32_t first_incomplete = std::numeric_limits<std::uint32_t>::max();
  for (std::size_t head = 0; head < s.order.size(); ++head) {
    const VertexId x = s.order[head];
    if (s.dist[x] == t) break;  // everything beyond is at distance t as well
    for (EdgeColor c : {EdgeColor::red, EdgeColor::blue}) {
      for (VertexId y : g.neighbors(c, x)) {
        if (s.stamp[y] == s.epoch) continue;
        if (s.order.size() >= node_cap) {
          res.truncated = true;
          first_incomplete = std::min(first_incomplete, s.dist[x]);
          continue;
        }
        s.stamp[y] = s.epoch;
        s.dist[y] = s.dist[x] + 1;
        s.node_index[y] = static_cast<std::uint32_t>(s.order.size());
        s.parent_vertex[y] = x;
        s.via[y] = c;
        s.order.push_back(y);
      }
    }
  }
  for (VertexId v : s.order) res.max_depth = std::max(res.max_depth, s.dist[v]);
  res.reliable_depth = res.truncated ? first_incomplete : t;
  for (const VertexId x : s.order) {
    for (EdgeColor c : {EdgeColor::red, EdgeColor::blue}) {
      for (VertexId y : g.neighbors(c, x)) {
        if (s.stamp[y] != s.epoch) continue;
        const bool discovery = (x != root && s.parent_vertex[x] == y && s.via[x] == c) ||
                               (y != root && s.parent_vertex[y] == x && s.via[y] == c);
        if (!discovery) {
          res.contains_cycle = true;
          return res;
        }
      }
    }
  }
  return res;
}

/// Copies the BFS tree out of the scratch into a ColoredTree.
inline ColoredTree extract_tree(const BallScratch& s, const BallResult& ball) {
  ColoredTree tree;
  const auto count = static_cast<std::uint32_t>(s.order.size());
  tree.parent.resize(count);
  tree.color.resize(count);
  tree.generation_begin.assign(ball.max_depth + 2, 0);
  for (std::uint32_t i = 0; i < count; ++i) {
    const VertexId u = s.order[i];
    if (i == 0) {
      tree.parent[0] = ColoredTree::npos;
      tree.color[0] = EdgeColor::red;
    } else {
      tree.parent[i] = s.node_index[s.parent_vertex[u]];
      tree.color[i] = s.via[u];
    }
    ++tree.generation_begin[s.dist[u] + 1];
  }
  for (std::size_t i = 1; i < tree.generation_begin.size(); ++i)
    tree.generation_begin[i] += tree.generation_begin[i - 1];
  tree.truncated = ball.truncated;
  tree.reliable_depth = ball.reliable_depth;
  return tree;
}

}  // namespace detail

/// Connected components of one layer, optionally restricted to the induced
/// subgraph on `subset`. Parts are ordered by smallest contained vertex,
/// members ascending.
inline Partition components(const DoubleGraph& g, EdgeColor color,
                            const std::vector<VertexId>* subset = nullptr) {
  const VertexId n = g.vertex_count();
  Partition out;
  out.part_of.assign(n, Partition::npos);
  std::vector<char> in_scope;
  if (subset) {
    in_scope.assign(n, 0);
    for (VertexId v : *subset) {
      if (v >= n) throw parameter_error("components: subset vertex out of range");
      in_scope[v] = 1;
    }
  }
  std::vector<VertexId> queue;
  std::vector<char> seen(n, 0);
  for (VertexId seed = 0; seed < n; ++seed) {
    if (seen[seed] || (subset && !in_scope[seed])) continue;
    const auto id = static_cast<std::uint32_t>(out.parts.size());
    out.parts.emplace_back();
    auto& members = out.parts.back();
    queue.clear();
    queue.push_back(seed);
    seen[seed] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const VertexId x = queue[head];
      members.push_back(x);
      out.part_of[x] = id;
      for (VertexId y : g.neighbors(color, x)) {
        if (seen[y] || (subset && !in_scope[y])) continue;
        seen[y] = 1;
        queue.push_back(y);
      }
    }
    std::sort(members.begin(), members.end());
  }
  return out;
}

/// Bounded breadth-first exploration of the merged (red union blue) layers.
/// `contains_cycle` refers to the induced multigraph on the reached set,
/// where a red and a blue edge on the same pair count as two edges.
struct NeighborhoodReport {
  VertexId root = 0;
  std::uint32_t depth = 0;
  std::vector<VertexId> reached;  // BFS order, root first
  bool contains_cycle = false;
  ColoredTree tree;  // valid only when contains_cycle is false
};

inline NeighborhoodReport neighborhood(const DoubleGraph& g, VertexId v, std::uint32_t t,
                                       std::uint64_t node_cap) {
  if (v >= g.vertex_count()) throw parameter_error("neighborhood: vertex out of range");
  if (node_cap == 0) throw parameter_error("neighborhood: node_cap must be positive");
  detail::BallScratch scratch;
  const auto ball = detail::merged_ball(g, v, t, node_cap, scratch);
  NeighborhoodReport rep;
  rep.root = v;
  rep.depth = t;
  rep.reached = scratch.order;
  rep.contains_cycle = ball.contains_cycle;
  if (!ball.contains_cycle) rep.tree = detail::extract_tree(scratch, ball);
  return rep;
}

}  // namespace duograph
