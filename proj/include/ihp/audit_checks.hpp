#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "ihp/cube.hpp"
#include "ihp/forest.hpp"
#include "ihp/logcomb.hpp"
#include "ihp/matching.hpp"
#include "ihp/rng.hpp"

namespace ihp {

// ---------------------------------------------------------------------------
// Closed-form tilde spectrum of a labeled forest's constraint set
//   B = { x : x_a + x_b = w_e for every forest edge e = (a,b) }.
// A coefficient v is admissible iff it meets every connected component in an
// even number of vertices; its value is then the sign of the label sum over
// the paths pairing v's vertices inside each component.

inline Spectrum component_spectrum(int n, const std::vector<std::tuple<int, int, std::uint8_t>>& edges) {
  if (n > 20) throw CapacityError("component_spectrum: n > 20");
  Forest forest(n);
  for (const auto& [a, b, w] : edges) {
    if (!forest.add_edge(a, b, w)) {
      if (forest.cycle_sum(a, b, w) != 0)
        throw ContradictionError("component_spectrum: odd cycle in labels");
      // consistent duplicate constraint; nothing new
    }
  }
  // bitmask per component and the parity mask for the sign rule
  std::vector<std::uint32_t> comp_mask;
  {
    std::vector<int> comp_id(n, -1);
    for (int v = 0; v < n; ++v) {
      const int r = forest.find(v);
      if (comp_id[r] < 0) {
        comp_id[r] = static_cast<int>(comp_mask.size());
        comp_mask.push_back(0);
      }
      comp_mask[comp_id[r]] |= 1u << v;
    }
  }
  std::uint32_t parity_mask = 0;
  for (int v = 0; v < n; ++v)
    if (forest.parity_to_root(v)) parity_mask |= 1u << v;

  Spectrum s;
  s.n = n;
  s.norm = Norm::Tilde;
  s.set_size = std::ldexp(1.0, n - static_cast<int>(forest.edge_count()));
  s.coeffs.assign(std::size_t{1} << n, 0.0);
  for (std::uint32_t v = 0; v < s.coeffs.size(); ++v) {
    bool admissible = true;
    for (std::uint32_t cm : comp_mask) {
      if (std::popcount(v & cm) & 1) {
        admissible = false;
        break;
      }
    }
    if (admissible)
      s.coeffs[v] = (std::popcount(v & parity_mask) & 1) ? -1.0 : 1.0;
  }
  return s;
}

// Brute-force route to the same spectrum, for cross-checking: build the
// indicator of B over the whole cube and transform it.
inline Spectrum component_spectrum_bruteforce(
    int n, const std::vector<std::tuple<int, int, std::uint8_t>>& edges) {
  if (n > 20) throw CapacityError("component_spectrum_bruteforce: n > 20");
  CubeFunction f(n);
  double count = 0;
  for (std::uint32_t x = 0; x < f.size(); ++x) {
    bool ok = true;
    for (const auto& [a, b, w] : edges) {
      if ((((x >> a) ^ (x >> b)) & 1u) != w) {
        ok = false;
        break;
      }
    }
    if (ok) {
      f[x] = 1.0;
      ++count;
    }
  }
  if (count == 0)
    throw ContradictionError("component_spectrum_bruteforce: empty set");
  return tilde_normalize(wht_forward(f), count);
}

// ---------------------------------------------------------------------------
// Single-message structure: B = {x : Mx in A_red} for a matching M and a
// dense reduced set.  Nonzero coefficients of B's tilde spectrum must sit
// exactly at {M^T w : q_hat(w) != 0} with matching values, and B must be
// (3, s*)-bounded whenever |A_red| / 2^{alpha n} >= 2^{-s*}.

struct SingleMessageSet {
  Matching matching;
  std::vector<std::uint8_t> a_red;  // indicator over {0,1}^{alpha n}
  double a_red_size = 0;
  CubeFunction b;  // indicator over {0,1}^n
  double b_size = 0;
};

inline SingleMessageSet sample_single_message_set(int n, int m_size,
                                                  int s_star, Rng& rng) {
  SingleMessageSet sm;
  sm.matching = sample_matching(n, m_size, rng);
  const std::uint32_t space = 1u << m_size;
  const double min_size = std::max(1.0, std::ceil(std::ldexp(1.0, m_size - s_star)));
  const std::uint32_t target =
      static_cast<std::uint32_t>(min_size) +
      static_cast<std::uint32_t>(
          rng.below(space - static_cast<std::uint32_t>(min_size) + 1));
  std::vector<std::uint32_t> idx(space);
  std::iota(idx.begin(), idx.end(), 0);
  sm.a_red.assign(space, 0);
  for (std::uint32_t i = 0; i < target; ++i) {
    const std::uint32_t j =
        i + static_cast<std::uint32_t>(rng.below(space - i));
    std::swap(idx[i], idx[j]);
    sm.a_red[idx[i]] = 1;
  }
  sm.a_red_size = target;
  sm.b = CubeFunction(n);
  for (std::uint32_t x = 0; x < sm.b.size(); ++x) {
    if (sm.a_red[apply_matching_bits(sm.matching, x)]) {
      sm.b[x] = 1.0;
      sm.b_size += 1.0;
    }
  }
  return sm;
}

struct SingleMessageReport {
  long long trials = 0;
  long long bounded_ok = 0;
  long long structure_ok = 0;
  long long odd_mass_ok = 0;
  bool all_pass() const {
    return bounded_ok == trials && structure_ok == trials &&
           odd_mass_ok == trials;
  }
};

inline bool single_message_structure_ok(const SingleMessageSet& sm,
                                        double tol = 1e-12) {
  Spectrum bh = wht_forward(sm.b);
  CubeFunction q(sm.matching.size());
  for (std::uint32_t z = 0; z < q.size(); ++z) q[z] = sm.a_red[z];
  Spectrum qh = wht_forward(q);

  long long nonzero = 0;
  for (std::uint32_t v = 0; v < bh.size(); ++v) {
    const auto w = match_restriction(sm.matching, v);
    const double expect = w ? qh.coeffs[*w] : 0.0;
    if (std::fabs(bh.coeffs[v] - expect) > tol) return false;
    if (std::fabs(bh.coeffs[v]) > tol) ++nonzero;
  }
  return nonzero <= (1LL << sm.matching.size());
}

inline SingleMessageReport check_single_message(int n, int m_size, int s_star,
                                                long long trials,
                                                std::uint64_t seed) {
  if (n > 20) throw CapacityError("check_single_message: n > 20");
  SingleMessageReport rep;
  rep.trials = trials;
  for (long long i = 0; i < trials; ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    SingleMessageSet sm = sample_single_message_set(n, m_size, s_star, rng);
    Spectrum tld = tilde_normalize(wht_forward(sm.b), sm.b_size);
    rep.bounded_ok += check_bounded(tld, 3.0, s_star).overall;
    rep.structure_ok += single_message_structure_ok(sm);
    rep.odd_mass_ok += odd_level_mass(tld) <= 1e-12;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Pointwise closeness of Mx to uniform for x drawn uniformly from B:
//   deviation(B, M) = max_z | 2^{|M|} Pr[Mx = z] - 1 |, computed exactly.
// The asymptotic preconditions (s* >= 10 ln(n+1), s* <= delta^4 n / C^2) are
// unreachable at exact-spectrum scale, so the report is diagnostic only.

inline double pdf_closeness_deviation(const CubeFunction& b, double b_size,
                                      const Matching& m) {
  std::vector<double> counts(std::size_t{1} << m.size(), 0.0);
  for (std::uint32_t x = 0; x < b.size(); ++x)
    if (b[x] != 0.0) counts[apply_matching_bits(m, x)] += 1.0;
  const double scale = static_cast<double>(counts.size()) / b_size;
  double dev = 0.0;
  for (double c : counts) dev = std::max(dev, std::fabs(c * scale - 1.0));
  return dev;
}

struct PdfClosenessReport {
  long long trials = 0;
  long long close = 0;       // matchings with deviation <= delta
  double max_deviation = 0;
  double mean_deviation = 0;
  bool preconds_met = false;  // the asymptotic regime preconditions
  double fraction_close() const {
    return trials ? static_cast<double>(close) / trials : 0.0;
  }
};

inline PdfClosenessReport check_pdf_closeness(int n, int m_size, int s_star,
                                              double c, double delta,
                                              long long trials,
                                              std::uint64_t seed) {
  if (n > 20) throw CapacityError("check_pdf_closeness: n > 20");
  PdfClosenessReport rep;
  rep.trials = trials;
  rep.preconds_met = s_star >= 10 * std::log(n + 1.0) &&
                     s_star <= std::pow(delta, 4) * n / (c * c);
  Rng set_rng(seed, 0x5e7);
  SingleMessageSet sm = sample_single_message_set(n, m_size, s_star, set_rng);
  for (long long i = 0; i < trials; ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i) + 1);
    Matching m = sample_matching(n, m_size, rng);
    const double dev = pdf_closeness_deviation(sm.b, sm.b_size, m);
    rep.close += dev <= delta;
    rep.max_deviation = std::max(rep.max_deviation, dev);
    rep.mean_deviation += dev / trials;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Miscellaneous inequalities, verified exhaustively or on seeded samples.

struct MiscReport {
  long long binom_entropy_checked = 0, binom_entropy_violations = 0;
  long long factorial_checked = 0, factorial_violations = 0;
  long long partition_checked = 0, partition_violations = 0;
  long long cauchy_checked = 0, cauchy_violations = 0;
  bool all_pass() const {
    return binom_entropy_violations == 0 && factorial_violations == 0 &&
           partition_violations == 0 && cauchy_violations == 0;
  }
};

inline double entropy_nats(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log(x) - (1 - x) * std::log(1 - x);
}

inline MiscReport misc_inequalities(std::uint64_t seed = 1,
                                    int binom_max_n = 200,
                                    long long random_trials = 2000) {
  MiscReport rep;
  // entropy sandwich: e^{nH(k/n)}/(n+1) <= C(n,k) <= e^{nH(k/n)}
  for (int n = 1; n <= binom_max_n; ++n) {
    for (int k = 0; k <= n; ++k) {
      const double lb = log_binomial(n, k);
      const double h = n * entropy_nats(static_cast<double>(k) / n);
      ++rep.binom_entropy_checked;
      if (lb > h + 1e-9 || lb < h - std::log(n + 1.0) - 1e-9)
        ++rep.binom_entropy_violations;
    }
  }
  // quotient-of-factorials sandwich: (S/3m)^S <= prod f_i(a_i) <= S^S
  Rng rng(seed, 0x314c);
  for (long long t = 0; t < random_trials; ++t) {
    const int m = 1 + static_cast<int>(rng.below(4));
    double s = 0, log_prod = 0;
    for (int i = 0; i < m; ++i) {
      const double a = 1 + static_cast<double>(rng.below(50));
      s += a;
      if (rng.bit())
        log_prod += a * std::log(a);  // x^x
      else
        log_prod += log_factorial(a);  // x!
    }
    ++rep.factorial_checked;
    const double upper = s * std::log(s);
    const double lower = s * (std::log(s) - std::log(3.0 * m));
    if (log_prod > upper + 1e-9 || log_prod < lower - 1e-9)
      ++rep.factorial_violations;
  }
  // partition identity: E_x[1/|P_x|] = m / 2^n, exactly
  for (long long t = 0; t < 200; ++t) {
    const int n = 1 + static_cast<int>(rng.below(10));
    const std::uint32_t size = 1u << n;
    const int parts = 1 + static_cast<int>(rng.below(size));
    std::vector<int> label(size);
    std::vector<long long> count(parts, 0);
    for (std::uint32_t x = 0; x < size; ++x) {
      label[x] = static_cast<int>(rng.below(parts));
      ++count[label[x]];
    }
    long long nonempty = 0;
    for (long long c : count) nonempty += c > 0;
    double expect = 0;
    for (std::uint32_t x = 0; x < size; ++x)
      expect += 1.0 / static_cast<double>(count[label[x]]);
    expect /= size;
    ++rep.partition_checked;
    if (std::fabs(expect - static_cast<double>(nonempty) / size) > 1e-12)
      ++rep.partition_violations;
  }
  // Cauchy-Schwarz: sum |a_i| <= sqrt(m sum a_i^2)
  for (long long t = 0; t < random_trials; ++t) {
    const int m = 1 + static_cast<int>(rng.below(64));
    double l1 = 0, l2 = 0;
    for (int i = 0; i < m; ++i) {
      const double a = 2 * rng.uniform() - 1;
      l1 += std::fabs(a);
      l2 += a * a;
    }
    ++rep.cauchy_checked;
    if (l1 > std::sqrt(m * l2) + 1e-12) ++rep.cauchy_violations;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Drift-condition process:  E[X_k | X_{k-1}] <= X_{k-1} (1 + 1/m + X_{k-1}/m^2)
// with X_0 < m/100^T should keep max X below m/2^T except with probability
// 2^{-T}.  The simulated chain multiplies by a fair two-point factor whose
// mean sits exactly on the drift bound.

struct MartingaleReport {
  double m = 0;
  int players = 0;  // T
  long long trials = 0;
  long long exceedances = 0;
  double threshold = 0;    // m / 2^T
  double target = 0;       // 2^{-T}
  bool drift_ok = true;    // binned conditional-mean self-check
  double exceed_rate() const {
    return trials ? static_cast<double>(exceedances) / trials : 0.0;
  }
  bool pass() const {
    const double se = std::sqrt(target * (1 - target) / trials);
    return exceed_rate() <= target + 3 * se + 1e-12;
  }
};

inline MartingaleReport martingale_check(double m, int players,
                                         long long trials, std::uint64_t seed,
                                         double sigma = 0.1) {
  if (m * players > 1e6)
    throw std::invalid_argument("martingale_check: m*T too large per trial");
  MartingaleReport rep;
  rep.m = m;
  rep.players = players;
  rep.trials = trials;
  rep.threshold = m / std::pow(2.0, players);
  rep.target = std::pow(2.0, -players);
  const double x0 = 0.9 * m / std::pow(100.0, players);
  const long long steps = static_cast<long long>(m) * players;

  // binned drift self-check accumulators (log-spaced bins over x)
  constexpr int kBins = 16;
  std::vector<double> bin_sum(kBins, 0), bin_cnt(kBins, 0), bin_hix(kBins, 0);

  for (long long t = 0; t < trials; ++t) {
    Rng rng(seed, static_cast<std::uint64_t>(t));
    double x = x0;
    double mx = x;
    for (long long k = 0; k < steps; ++k) {
      const double drift = 1.0 / m + x / (m * m);
      const double z = rng.bit() ? 1.0 + drift + sigma : 1.0 + drift - sigma;
      const double nx = x * z;
      if ((k % 97) == 0) {
        int b = static_cast<int>(std::floor(std::log2(x / x0)));
        b = std::clamp(b, 0, kBins - 1);
        bin_sum[b] += nx / x;
        bin_cnt[b] += 1;
        bin_hix[b] = std::max(bin_hix[b], x);
      }
      x = nx;
      mx = std::max(mx, x);
    }
    rep.exceedances += mx > rep.threshold;
  }
  for (int b = 0; b < kBins; ++b) {
    if (bin_cnt[b] < 16) continue;
    const double mean = bin_sum[b] / bin_cnt[b];
    const double bound = 1.0 + 1.0 / m + bin_hix[b] / (m * m);
    const double se = sigma / std::sqrt(bin_cnt[b]);
    if (mean > bound + 3 * se) rep.drift_ok = false;
  }
  return rep;
}

}  // namespace ihp
