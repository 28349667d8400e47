#pragma once

#include <cstdint>
#include <vector>

#include "ihp/common.hpp"

namespace ihp {

// Union-find over [n] with per-vertex parity relative to the component
// root, component sizes, and the potential ||F|| = sum over components of
// size >= 2 of |C|^2, maintained incrementally.
class Forest {
 public:
  explicit Forest(int n) { reset(n); }

  void reset(int n) {
    parent_.resize(n);
    size_.assign(n, 1);
    parity_.assign(n, 0);
    for (int v = 0; v < n; ++v) parent_[v] = v;
    potential_ = 0;
    edge_count_ = 0;
  }

  int n() const { return static_cast<int>(parent_.size()); }

  // Root of v's component; compresses the path and folds parities.
  int find(int v) const {
    int root = v;
    std::uint8_t par = 0;
    while (parent_[root] != root) {
      par ^= parity_[root];
      root = parent_[root];
    }
    // second pass: point everything at the root with its total parity
    int cur = v;
    std::uint8_t cur_par = par;
    while (parent_[cur] != root) {
      const int next = parent_[cur];
      const std::uint8_t next_par = cur_par ^ parity_[cur];
      parent_[cur] = root;
      parity_[cur] = cur_par;
      cur = next;
      cur_par = next_par;
    }
    return root;
  }

  // Parity of the path v -> root(v) under the inserted edge labels.
  std::uint8_t parity_to_root(int v) const {
    find(v);
    return parent_[v] == v ? 0 : parity_[v];
  }

  bool same_component(int a, int b) const { return find(a) == find(b); }

  int component_size(int v) const { return size_[find(v)]; }

  // Adds labeled edge (a, b, w).  Returns false when a and b were already
  // connected (the edge would close a cycle; the forest is left unchanged).
  bool add_edge(int a, int b, std::uint8_t w) {
    int ra = find(a), rb = find(b);
    if (ra == rb) return false;
    if (size_[ra] < size_[rb]) {
      std::swap(ra, rb);
      std::swap(a, b);
    }
    const std::uint8_t link_par =
        static_cast<std::uint8_t>(parity_to_root(a) ^ parity_to_root(b) ^ w);
    const long long sa = size_[ra], sb = size_[rb];
    potential_ += (sa + sb) * (sa + sb) - (sa >= 2 ? sa * sa : 0) -
                  (sb >= 2 ? sb * sb : 0);
    parent_[rb] = ra;
    parity_[rb] = link_par;
    size_[ra] = static_cast<int>(sa + sb);
    ++edge_count_;
    return true;
  }

  // Label sum around the cycle that edge (a, b, w) would close.
  // Only meaningful when a and b are already in one component.
  std::uint8_t cycle_sum(int a, int b, std::uint8_t w) const {
    return static_cast<std::uint8_t>(parity_to_root(a) ^ parity_to_root(b) ^ w);
  }

  long long potential() const { return potential_; }
  long long edge_count() const { return edge_count_; }

  // From-scratch recomputation, used to cross-check the incremental value.
  long long recompute_potential() const {
    std::vector<long long> sz(parent_.size(), 0);
    for (int v = 0; v < n(); ++v) ++sz[find(v)];
    long long acc = 0;
    for (long long s : sz)
      if (s >= 2) acc += s * s;
    return acc;
  }

  std::vector<int> component_sizes() const {
    std::vector<long long> sz(parent_.size(), 0);
    for (int v = 0; v < n(); ++v) ++sz[find(v)];
    std::vector<int> out;
    for (std::size_t v = 0; v < sz.size(); ++v)
      if (sz[v] >= 2) out.push_back(static_cast<int>(sz[v]));
    return out;
  }

  bool touches_nontrivial(int v) const { return size_[find(v)] >= 2; }

 private:
  mutable std::vector<int> parent_;
  mutable std::vector<std::uint8_t> parity_;  // parity of v -> parent_[v]
  std::vector<int> size_;
  long long potential_ = 0;
  long long edge_count_ = 0;
};

inline long long forest_potential(const Forest& f) { return f.potential(); }

}  // namespace ihp
