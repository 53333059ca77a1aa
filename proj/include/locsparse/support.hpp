#ifndef LOCSPARSE_SUPPORT_HPP_
#define LOCSPARSE_SUPPORT_HPP_

#include <vector>

#include "locsparse/types.hpp"

namespace locsparse {

// Per-pixel active atom sets plus the per-pixel argmax; argmax is -1 for
// inactive rows and always lies in the active set otherwise.
struct SupportMap {
  std::vector<std::vector<Index>> active;
  std::vector<Index> argmax;
  double zero_tol = 0.0;

  Index row_count() const { return static_cast<Index>(active.size()); }

  bool empty() const {
    for (const auto& row : active)
      if (!row.empty()) return false;
    return true;
  }

  void validate(Index atom_count) const {
    require(active.size() == argmax.size(), "SupportMap: ragged fields");
    for (size_t i = 0; i < active.size(); ++i) {
      for (Index j : active[i])
        require(j >= 0 && j < atom_count, "SupportMap: index out of range");
      if (!active[i].empty()) {
        bool found = false;
        for (Index j : active[i]) found = found || j == argmax[i];
        require(found, "SupportMap: argmax not in active set");
      }
    }
  }
};

}  // namespace locsparse

#endif  // LOCSPARSE_SUPPORT_HPP_
