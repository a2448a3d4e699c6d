#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

namespace duograph {

/// A decomposition of (a subset of) the vertex set into disjoint parts.
/// Vertices outside the ground set map to npos. Canonical form: members of
/// each part ascending, parts ordered by their smallest member.
struct Partition {
  static constexpr std::uint32_t npos = std::numeric_limits<std::uint32_t>::max();

  std::vector<std::uint32_t> part_of;             // vertex -> part id (or npos)
  std::vector<std::vector<std::uint32_t>> parts;  // part id -> sorted members

  std::size_t num_parts() const noexcept { return parts.size(); }

  /// Sorts members, orders parts by smallest member, renumbers part_of.
  void canonicalize() {
    for (auto& p : parts) std::sort(p.begin(), p.end());
    std::sort(parts.begin(), parts.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    for (std::uint32_t id = 0; id < parts.size(); ++id)
      for (std::uint32_t v : parts[id]) part_of[v] = id;
  }
};

}  // namespace duograph
