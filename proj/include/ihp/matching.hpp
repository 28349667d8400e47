#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "ihp/common.hpp"
#include "ihp/logcomb.hpp"
#include "ihp/rng.hpp"

namespace ihp {

using Edge = std::pair<int, int>;
using BitString = std::vector<std::uint8_t>;

// A matching on [n].  Edges are kept in canonical order (each pair sorted,
// pairs sorted by smaller endpoint) so label vectors and edge subsets are
// reproducible bit-for-bit across runs.
struct Matching {
  int n = 0;
  std::vector<Edge> edges;

  int size() const { return static_cast<int>(edges.size()); }

  void canonicalize() {
    for (auto& [a, b] : edges)
      if (a > b) std::swap(a, b);
    std::sort(edges.begin(), edges.end());
  }
};

// Draws a uniform injective sequence of 2*size vertices and pairs
// consecutive entries.  Every matching of a given size arises from exactly
// size! * 2^size sequences, so the result is exactly uniform.  The sampler
// owns the scratch permutation so hot loops do not reallocate.
class MatchingSampler {
 public:
  explicit MatchingSampler(int n) : n_(n), perm_(n) {}

  // Edges in generation order: edge i is (v_{2i}, v_{2i+1}) of the drawn
  // sequence.  This order makes edge i uniform conditioned on edges < i,
  // which the forest-evolution statistics rely on.
  std::vector<Edge> next_pairs(int size, Rng& rng) {
    if (2 * size > n_)
      throw std::invalid_argument("sample_matching: 2*size exceeds n");
    std::iota(perm_.begin(), perm_.end(), 0);
    std::vector<Edge> out;
    out.reserve(size);
    for (int i = 0; i < 2 * size; ++i) {
      const int j = i + static_cast<int>(rng.below(n_ - i));
      std::swap(perm_[i], perm_[j]);
      if (i & 1) out.emplace_back(perm_[i - 1], perm_[i]);
    }
    return out;
  }

  Matching next(int size, Rng& rng) {
    Matching m;
    m.n = n_;
    m.edges = next_pairs(size, rng);
    m.canonicalize();
    return m;
  }

 private:
  int n_;
  std::vector<int> perm_;
};

inline Matching sample_matching(int n, int size, Rng& rng) {
  MatchingSampler s(n);
  return s.next(size, rng);
}

// Per-edge parities w_e = x_a ^ x_b in canonical edge order.
inline BitString apply_matching(const Matching& m, const BitString& x) {
  BitString w(m.edges.size());
  for (std::size_t e = 0; e < m.edges.size(); ++e)
    w[e] = static_cast<std::uint8_t>(x[m.edges[e].first] ^ x[m.edges[e].second]);
  return w;
}

// Small-n variant: x is a point index, the result packs label bit e into
// bit e of the returned word.
inline std::uint32_t apply_matching_bits(const Matching& m, std::uint32_t x) {
  std::uint32_t w = 0;
  for (std::size_t e = 0; e < m.edges.size(); ++e) {
    const std::uint32_t pa = (x >> m.edges[e].first) & 1u;
    const std::uint32_t pb = (x >> m.edges[e].second) & 1u;
    w |= (pa ^ pb) << e;
  }
  return w;
}

// v = M^T w: the union of the chosen edges' endpoints.  |v| = 2|w|.
inline std::uint32_t lift_coefficient(const Matching& m, std::uint32_t w) {
  std::uint32_t v = 0;
  for (std::size_t e = 0; e < m.edges.size(); ++e)
    if ((w >> e) & 1u)
      v |= (1u << m.edges[e].first) | (1u << m.edges[e].second);
  return v;
}

// Inverse of lift_coefficient where it exists: the unique edge subset
// perfectly matching the vertex set v, or nothing if v cannot be matched
// within M.  Uniqueness is automatic since the edges are disjoint.
inline std::optional<std::uint32_t> match_restriction(const Matching& m,
                                                      std::uint32_t v) {
  std::uint32_t w = 0;
  std::uint32_t covered = 0;
  for (std::size_t e = 0; e < m.edges.size(); ++e) {
    const std::uint32_t mask =
        (1u << m.edges[e].first) | (1u << m.edges[e].second);
    if ((v & mask) == mask) {
      w |= 1u << e;
      covered |= mask;
    }
  }
  if (covered != v) return std::nullopt;
  return w;
}

// Matching edges split relative to a coefficient (vertex set) v:
// internal edges have both endpoints in v, boundary exactly one,
// external none.
struct EdgeClassification {
  std::vector<int> internal;
  std::vector<int> boundary;
  std::vector<int> external;
};

inline EdgeClassification classify_edges(const Matching& m, std::uint32_t v) {
  EdgeClassification c;
  for (int e = 0; e < m.size(); ++e) {
    const bool a_in = (v >> m.edges[e].first) & 1u;
    const bool b_in = (v >> m.edges[e].second) & 1u;
    if (a_in && b_in)
      c.internal.push_back(e);
    else if (a_in || b_in)
      c.boundary.push_back(e);
    else
      c.external.push_back(e);
  }
  return c;
}

// ---------------------------------------------------------------------------
// Closed-form matching probabilities.  All return natural-log values; n and
// m_size are real-valued so the audit can evaluate them at astronomical n.

// log Pr[a fixed set of 2*ell points is perfectly matched]
//   = log [ C(m_size, ell) / C(n, 2 ell) ]
inline double log_p_match(double ell, double n, double m_size) {
  if (ell < 0 || 2 * ell > n) throw std::invalid_argument("p_match: bad ell");
  return log_binomial(m_size, ell) - log_binomial(n, 2 * ell);
}

// log Pr[exactly 2i of 2k points matched internally, b boundary edges]
//   = log [ C(m,i) C(m-i,b) 2^b C(n-2m, 2(k-i)-b) / C(n,2k) ]
inline double log_q_match_b(double k, double i, double b, double n,
                            double m_size) {
  if (i < 0 || k < 0 || b < 0 || i > k || 2 * i + b > 2 * k || 2 * k > n)
    throw std::invalid_argument("q_match_b: bad (k,i,b)");
  const double outside = n - 2 * m_size;
  return log_binomial(m_size, i) + log_binomial(m_size - i, b) +
         b * std::log(2.0) + log_binomial(outside, 2 * (k - i) - b) -
         log_binomial(n, 2 * k);
}

// log Pr[exactly 2i of 2k points matched internally, no boundary edges]
inline double log_q_match(double k, double i, double n, double m_size) {
  if (i < 0 || k < 0 || i > k || 2 * k > n)
    throw std::invalid_argument("q_match: bad (k,i)");
  const double outside = n - 2 * m_size;
  return log_binomial(m_size, i) + log_binomial(outside, 2 * (k - i)) -
         log_binomial(n, 2 * k);
}

// Linear-domain convenience; saturates to 0 below exp(-700).
inline double prob_from_log(double logp) {
  return logp < -700.0 ? 0.0 : std::exp(logp);
}

}  // namespace ihp
