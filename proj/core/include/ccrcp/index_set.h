#ifndef CCRCP_INDEX_SET_H_
#define CCRCP_INDEX_SET_H_

#include <algorithm>
#include <iterator>
#include <vector>

namespace ccrcp {

// Position of a constraint inside its pool. Pools are stored sorted by
// content id, so ordering by Index is ordering by id.
using Index = int;

// Sorted, duplicate-free list of pool positions.
using IndexSet = std::vector<Index>;

inline IndexSet Normalize(IndexSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

inline IndexSet Union(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}

inline IndexSet Difference(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return out;
}

inline IndexSet Intersection(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

inline bool Contains(const IndexSet& s, Index i) {
  return std::binary_search(s.begin(), s.end(), i);
}

inline bool IsSubset(const IndexSet& sub, const IndexSet& super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

}  // namespace ccrcp

#endif  // CCRCP_INDEX_SET_H_
