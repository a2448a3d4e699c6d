#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

namespace duograph {

enum class EdgeColor : std::uint8_t { red = 0, blue = 1 };

inline EdgeColor other(EdgeColor c) noexcept {
  return c == EdgeColor::red ? EdgeColor::blue : EdgeColor::red;
}

/// Rooted tree with colored edges, nodes in breadth-first order (so every
/// parent index is smaller than its children's). Node 0 is the root.
/// Generations are contiguous index ranges delimited by generation_begin.
struct ColoredTree {
  static constexpr std::uint32_t npos = std::numeric_limits<std::uint32_t>::max();

  std::vector<std::uint32_t> parent;   // parent[0] == npos
  std::vector<EdgeColor> color;        // color[0] is unused (root has no edge)
  std::vector<std::uint32_t> generation_begin;  // size = depth+2, last = node count
  bool truncated = false;
  /// Deepest generation d such that every node in generations < d has its
  /// full child set present; B_d / RB_d are decidable for levels <= this.
  std::uint32_t reliable_depth = 0;

  std::size_t size() const noexcept { return parent.size(); }

  std::uint32_t depth() const noexcept {
    return static_cast<std::uint32_t>(generation_begin.size()) - 2;
  }

  std::uint32_t generation_of(std::uint32_t node) const {
    auto it = std::upper_bound(generation_begin.begin(), generation_begin.end(), node);
    return static_cast<std::uint32_t>(it - generation_begin.begin()) - 1;
  }

  std::uint64_t generation_size(std::uint32_t g) const {
    return generation_begin[g + 1] - generation_begin[g];
  }

  std::vector<std::uint64_t> generation_sizes() const {
    std::vector<std::uint64_t> out;
    for (std::uint32_t g = 0; g + 1 < generation_begin.size(); ++g)
      out.push_back(generation_size(g));
    return out;
  }
};

}  // namespace duograph
