#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include "ihp/matching.hpp"
#include "ihp/rng.hpp"

using namespace ihp;

namespace {

// Enumerates every matching of exactly `size` edges on [n].
std::vector<std::vector<Edge>> all_matchings(int n, int size) {
  std::vector<std::vector<Edge>> out;
  std::vector<Edge> cur;
  std::vector<bool> used(n, false);
  std::function<void(int)> rec = [&](int v) {
    if (static_cast<int>(cur.size()) == size) {
      out.push_back(cur);
      return;
    }
    if (v >= n) return;
    if (used[v]) {
      rec(v + 1);
      return;
    }
    rec(v + 1);  // leave v unmatched
    used[v] = true;
    for (int u = v + 1; u < n; ++u) {
      if (used[u]) continue;
      used[u] = true;
      cur.emplace_back(v, u);
      rec(v + 1);
      cur.pop_back();
      used[u] = false;
    }
    used[v] = false;
  };
  rec(0);
  return out;
}

// (internal, boundary) class of the prefix set {0, ..., 2k-1}
std::pair<int, int> classify_prefix(const std::vector<Edge>& edges, int k) {
  int internal = 0, boundary = 0;
  for (const auto& [a, b] : edges) {
    const bool ain = a < 2 * k, bin = b < 2 * k;
    if (ain && bin)
      ++internal;
    else if (ain || bin)
      ++boundary;
  }
  return {internal, boundary};
}

}  // namespace

TEST_CASE("sampler basics") {
  Rng rng(11);
  SECTION("size zero gives the empty matching") {
    Matching m = sample_matching(6, 0, rng);
    REQUIRE(m.edges.empty());
  }
  SECTION("oversized request is rejected") {
    REQUIRE_THROWS_AS(sample_matching(5, 3, rng), std::invalid_argument);
  }
  SECTION("edges are disjoint and canonical") {
    for (int rep = 0; rep < 200; ++rep) {
      Matching m = sample_matching(11, 5, rng);
      std::vector<bool> seen(11, false);
      int prev = -1;
      for (const auto& [a, b] : m.edges) {
        REQUIRE(a < b);
        REQUIRE(a > prev);
        prev = a;
        REQUIRE_FALSE(seen[a]);
        REQUIRE_FALSE(seen[b]);
        seen[a] = seen[b] = true;
      }
    }
  }
}

TEST_CASE("sampler is uniform") {
  Rng rng(123);
  SECTION("three perfect matchings of K4") {
    std::map<std::vector<Edge>, long long> counts;
    const long long draws = 100000;
    for (long long i = 0; i < draws; ++i)
      ++counts[sample_matching(4, 2, rng).edges];
    REQUIRE(counts.size() == 3);
    double chi2 = 0;
    const double expect = draws / 3.0;
    for (const auto& [key, c] : counts) {
      REQUIRE(std::fabs(c / static_cast<double>(draws) - 1.0 / 3.0) < 0.01);
      chi2 += (c - expect) * (c - expect) / expect;
    }
    REQUIRE(chi2 < 13.8155);  // chi^2 critical value, df=2, p=0.001
  }
  SECTION("single edge frequency 1/6") {
    long long hits = 0;
    const long long draws = 100000;
    for (long long i = 0; i < draws; ++i) {
      Matching m = sample_matching(4, 1, rng);
      hits += m.edges[0] == Edge{0, 1};
    }
    REQUIRE(std::fabs(hits / static_cast<double>(draws) - 1.0 / 6.0) < 0.005);
  }
}

TEST_CASE("incidence action") {
  Matching m;
  m.n = 4;
  m.edges = {{0, 1}, {2, 3}};
  SECTION("all-zero input gives all-zero labels") {
    REQUIRE(apply_matching(m, BitString(4, 0)) == BitString{0, 0});
  }
  SECTION("single set vertex flips its edge") {
    BitString x{1, 0, 0, 0};
    REQUIRE(apply_matching(m, x) == BitString{1, 0});
    REQUIRE(apply_matching_bits(m, 0b0001) == 0b01u);
  }
  SECTION("complementing the input leaves labels unchanged") {
    Rng rng(9);
    for (int rep = 0; rep < 50; ++rep) {
      Matching mm = sample_matching(10, 4, rng);
      const auto x = static_cast<std::uint32_t>(rng.below(1u << 10));
      REQUIRE(apply_matching_bits(mm, x) ==
              apply_matching_bits(mm, ~x & 0x3FFu));
    }
  }
}

TEST_CASE("lift and restriction") {
  Matching m;
  m.n = 4;
  m.edges = {{0, 1}, {2, 3}};
  SECTION("examples") {
    REQUIRE(lift_coefficient(m, 0) == 0u);
    REQUIRE(lift_coefficient(m, 0b01) == 0b0011u);
    REQUIRE(match_restriction(m, 0) == 0u);
    REQUIRE(match_restriction(m, 0b1111) == 0b11u);
    REQUIRE_FALSE(match_restriction(m, 0b0101).has_value());
  }
  SECTION("roundtrip over every edge subset") {
    Rng rng(404);
    for (int rep = 0; rep < 20; ++rep) {
      Matching mm = sample_matching(12, 6, rng);
      for (std::uint32_t w = 0; w < (1u << 6); ++w) {
        const std::uint32_t v = lift_coefficient(mm, w);
        REQUIRE(std::popcount(v) == 2 * std::popcount(w));
        auto back = match_restriction(mm, v);
        REQUIRE(back.has_value());
        REQUIRE(*back == w);
      }
    }
  }
}

TEST_CASE("edge classification") {
  Matching m;
  m.n = 6;
  m.edges = {{0, 1}, {2, 3}, {4, 5}};
  SECTION("empty coefficient: everything external") {
    EdgeClassification c = classify_edges(m, 0);
    REQUIRE(c.internal.empty());
    REQUIRE(c.boundary.empty());
    REQUIRE(c.external.size() == 3);
  }
  SECTION("mixed example") {
    EdgeClassification c = classify_edges(m, 0b000111);  // {0,1,2}
    REQUIRE(c.internal == std::vector<int>{0});
    REQUIRE(c.boundary == std::vector<int>{1});
    REQUIRE(c.external == std::vector<int>{2});
  }
  SECTION("full coefficient: everything internal") {
    EdgeClassification c = classify_edges(m, 0b111111);
    REQUIRE(c.internal.size() == 3);
  }
  SECTION("partition sizes obey the weight limits") {
    Rng rng(5);
    for (int rep = 0; rep < 100; ++rep) {
      Matching mm = sample_matching(14, 5, rng);
      const auto v = static_cast<std::uint32_t>(rng.below(1u << 14));
      EdgeClassification c = classify_edges(mm, v);
      REQUIRE(c.internal.size() + c.boundary.size() + c.external.size() == 5);
      REQUIRE(2 * c.internal.size() <= static_cast<std::size_t>(std::popcount(v)));
      REQUIRE(c.boundary.size() <= static_cast<std::size_t>(std::popcount(v)));
    }
  }
}

TEST_CASE("closed forms match exhaustive enumeration") {
  for (const auto& [n, msize] : std::vector<std::pair<int, int>>{
           {4, 1}, {6, 2}, {8, 3}, {8, 4}}) {
    const auto ms = all_matchings(n, msize);
    const double total = static_cast<double>(ms.size());

    SECTION("p(ell,n) at n=" + std::to_string(n) +
            " m=" + std::to_string(msize)) {
      for (int ell = 0; ell <= msize; ++ell) {
        long long hits = 0;
        for (const auto& edges : ms) {
          const auto [i, b] = classify_prefix(edges, ell);
          hits += (i == ell && b == 0);
        }
        const double expect = std::exp(log_p_match(ell, n, msize));
        REQUIRE(hits / total == Catch::Approx(expect).margin(1e-12));
      }
    }

    SECTION("q classes at n=" + std::to_string(n) +
            " m=" + std::to_string(msize)) {
      for (int k = 0; 2 * k <= n; ++k) {
        std::map<std::pair<int, int>, long long> classes;
        for (const auto& edges : ms) ++classes[classify_prefix(edges, k)];
        double mass = 0;
        for (int i = 0; i <= k; ++i) {
          for (int b = 0; 2 * i + b <= 2 * k; ++b) {
            const double expect =
                prob_from_log(log_q_match_b(k, i, b, n, msize));
            const auto it = classes.find({i, b});
            const double freq =
                it == classes.end() ? 0.0 : it->second / total;
            REQUIRE(freq == Catch::Approx(expect).margin(1e-12));
            mass += expect;
          }
          // the no-boundary class is q(k,i,n)
          const double expect0 = prob_from_log(log_q_match(k, i, n, msize));
          const auto it = classes.find({i, 0});
          const double freq0 = it == classes.end() ? 0.0 : it->second / total;
          REQUIRE(freq0 == Catch::Approx(expect0).margin(1e-12));
        }
        REQUIRE(mass == Catch::Approx(1.0).margin(1e-12));
      }
    }
  }
}

TEST_CASE("specific small values") {
  // n=4, one edge: p(1,4) = C(1,1)/C(4,2) = 1/6
  REQUIRE(std::exp(log_p_match(1, 4, 1)) == Catch::Approx(1.0 / 6).margin(1e-12));
  REQUIRE(std::exp(log_p_match(0, 10, 3)) == Catch::Approx(1.0).margin(1e-12));
  // n=4, k=1 classes over the 6 matchings of one edge:
  REQUIRE(std::exp(log_q_match_b(1, 0, 1, 4, 1)) ==
          Catch::Approx(4.0 / 6).margin(1e-12));
  REQUIRE(std::exp(log_q_match_b(1, 1, 0, 4, 1)) ==
          Catch::Approx(1.0 / 6).margin(1e-12));
  REQUIRE(std::exp(log_q_match_b(1, 0, 0, 4, 1)) ==
          Catch::Approx(1.0 / 6).margin(1e-12));
}

TEST_CASE("q_match equals the b=0 class exactly") {
  for (int n : {20, 101, 1000}) {
    const int msize = n / 25;
    for (int k = 0; k <= n / 10; k += 3)
      for (int i = 0; i <= std::min(k, msize); ++i)
        REQUIRE(log_q_match(k, i, n, msize) ==
                log_q_match_b(k, i, 0, n, msize));
  }
}

TEST_CASE("class probabilities sum to one") {
  for (const auto& [n, msize, k] :
       std::vector<std::tuple<int, int, int>>{{12, 3, 2}, {30, 6, 5},
                                              {100, 12, 11}}) {
    LogSum acc;
    for (int i = 0; i <= k; ++i)
      for (int b = 0; 2 * i + b <= 2 * k; ++b)
        acc.add(log_q_match_b(k, i, b, n, msize));
    REQUIRE(std::exp(acc.value()) == Catch::Approx(1.0).margin(1e-9));
  }
}

TEST_CASE("boundary-discount inequality holds across its range") {
  // q(k,i,b,n) <= q(k,i,n) 20^{-b} 4^{k-i} whenever k < n/10, alpha < 1/100
  const double l20 = std::log(20.0), l4 = std::log(4.0);
  for (const auto& [n, msize] :
       std::vector<std::pair<int, int>>{{1000, 5}, {1000, 9}}) {
    for (int i = 0; i <= msize; ++i) {
      for (int k = i; k < n / 10; ++k) {
        const double lq = log_q_match(k, i, n, msize);
        for (int b = 0; b <= std::min(2 * (k - i), msize - i); ++b) {
          const double lqb = log_q_match_b(k, i, b, n, msize);
          if (lqb == kNegInf) continue;
          REQUIRE(lqb <= lq - b * l20 + (k - i) * l4 + 1e-9);
        }
      }
    }
  }
}

TEST_CASE("classification, restriction and the q-classes agree") {
  // classify_edges counts reproduce the (i, b) pair of the q-formulas and
  // every internal edge lifts back through match_restriction
  Rng rng(1212);
  for (int rep = 0; rep < 300; ++rep) {
    const int n = 12;
    Matching m = sample_matching(n, 4, rng);
    const auto v = static_cast<std::uint32_t>(rng.below(1u << n));
    EdgeClassification cls = classify_edges(m, v);
    const int k2 = std::popcount(v);
    if (k2 % 2 == 0) {
      const int k = k2 / 2;
      const int i = static_cast<int>(cls.internal.size());
      const int b = static_cast<int>(cls.boundary.size());
      REQUIRE(2 * i + b <= 2 * k);
      REQUIRE(log_q_match_b(k, i, b, n, 4) > kNegInf);
    }
    std::uint32_t w = 0, covered = 0;
    for (int e : cls.internal) {
      w |= 1u << e;
      covered |= (1u << m.edges[e].first) | (1u << m.edges[e].second);
    }
    REQUIRE(lift_coefficient(m, w) == covered);
    const auto back = match_restriction(m, covered);
    REQUIRE(back.has_value());
    REQUIRE(*back == w);
  }
}

TEST_CASE("Monte Carlo class frequencies match the formulas") {
  Rng rng(8080);
  for (const auto& [n, msize, k] :
       std::vector<std::tuple<int, int, int>>{{10, 3, 2}, {20, 5, 3},
                                              {50, 10, 4}}) {
    const long long draws = 200000;
    std::map<std::pair<int, int>, long long> counts;
    MatchingSampler sampler(n);
    for (long long t = 0; t < draws; ++t) {
      Matching m = sampler.next(msize, rng);
      ++counts[classify_prefix(m.edges, k)];
    }
    for (int i = 0; i <= k; ++i) {
      for (int b = 0; 2 * i + b <= 2 * k; ++b) {
        const double p = prob_from_log(log_q_match_b(k, i, b, n, msize));
        const auto it = counts.find({i, b});
        const double freq =
            it == counts.end() ? 0.0 : it->second / static_cast<double>(draws);
        const double se = std::sqrt(std::max(p * (1 - p), 1e-12) / draws);
        REQUIRE(std::fabs(freq - p) <= 4 * se + 1e-9);
      }
    }
  }
}
