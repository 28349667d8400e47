#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "ihp/game.hpp"
#include "ihp/logcomb.hpp"
#include "ihp/multigraph.hpp"
#include "ihp/parallel.hpp"
#include "ihp/rng.hpp"

namespace ihp {

// ---------------------------------------------------------------------------
// Gap experiment: with m0 = alpha*n*T/2 * (1 - delta), delta = eps/100 by
// default, YES-case reductions should reach maxcut >= m0 while NO-case
// reductions stay below m0/(2-eps).  At desk scale the report carries raw
// frequencies; the asymptotic T = 512/(alpha eps^2) regime is far out of
// reach, so runs demonstrate the mechanism, not the asymptotic constants.

struct GapReport {
  int n = 0, match_size = 0, players = 0;
  double epsilon = 0.0, delta = 0.0;
  double m0 = 0.0;
  long long trials = 0;
  bool exact = true;      // exact maxcut (n <= 26) vs heuristic bracket
  bool rigorous = true;   // false when the NO side is only heuristic
  long long yes_ok = 0;   // YES trials with maxcut >= m0
  long long no_ok = 0;    // NO trials with maxcut <= m0/(2-eps)
  long long yes_bipartite = 0;
  long long ratio_ok = 0;  // paired trials with yes/no >= ratio_threshold
  double ratio_threshold = 1.7;
  double mean_yes_cut = 0.0, mean_no_cut = 0.0;
  double mean_yes_m = 0.0, mean_no_m = 0.0;

  double yes_rate() const { return trials ? double(yes_ok) / trials : 0.0; }
  double no_rate() const { return trials ? double(no_ok) / trials : 0.0; }
  double ratio_rate() const { return trials ? double(ratio_ok) / trials : 0.0; }
};

inline GapReport gap_experiment(int n, int match_size, int players,
                                double epsilon, long long trials,
                                std::uint64_t seed, bool exact_mode = true,
                                double delta_override = -1.0,
                                int heuristic_restarts = 20) {
  if (exact_mode && n > 26)
    throw CapacityError("gap_experiment: exact mode needs n <= 26");
  GapReport rep;
  rep.n = n;
  rep.match_size = match_size;
  rep.players = players;
  rep.epsilon = epsilon;
  rep.delta = delta_override >= 0 ? delta_override : epsilon / 100.0;
  rep.m0 = 0.5 * static_cast<double>(match_size) * players * (1.0 - rep.delta);
  rep.trials = trials;
  rep.exact = exact_mode;
  rep.rigorous = exact_mode;

  struct TrialOut {
    long long cut_y = 0, cut_n = 0, m_y = 0, m_n = 0;
    std::uint8_t bip = 0;
  };
  std::vector<TrialOut> out(trials);
  for_each_trial(trials, [&](long long i) {
    Rng rng_y(seed, 2 * static_cast<std::uint64_t>(i));
    Rng rng_n(seed, 2 * static_cast<std::uint64_t>(i) + 1);
    DihpInstance yes =
        gen_instance(n, match_size, players, CaseMode::Yes, rng_y);
    DihpInstance no = gen_instance(n, match_size, players, CaseMode::No, rng_n);
    MultiGraph gy = reduce_to_graph(yes);
    MultiGraph gn = reduce_to_graph(no);

    std::vector<std::uint8_t> color;
    TrialOut& t = out[i];
    t.bip = two_color(gy, color);
    if (exact_mode) {
      t.cut_y = maxcut_exact(gy).value;
      t.cut_n = maxcut_exact(gn).value;
    } else {
      // heuristic lower bounds; the YES side is exact anyway when bipartite
      t.cut_y =
          t.bip ? gy.m : maxcut_local(gy, heuristic_restarts, rng_y).value;
      t.cut_n = maxcut_local(gn, heuristic_restarts, rng_n).value;
    }
    t.m_y = gy.m;
    t.m_n = gn.m;
  });
  for (const TrialOut& t : out) {
    rep.yes_bipartite += t.bip;
    rep.yes_ok += (static_cast<double>(t.cut_y) >= rep.m0);
    rep.no_ok += (static_cast<double>(t.cut_n) <= rep.m0 / (2.0 - epsilon));
    rep.ratio_ok += (t.cut_n > 0 && static_cast<double>(t.cut_y) >=
                                        rep.ratio_threshold * t.cut_n);
    rep.mean_yes_cut += static_cast<double>(t.cut_y) / trials;
    rep.mean_no_cut += static_cast<double>(t.cut_n) / trials;
    rep.mean_yes_m += static_cast<double>(t.m_y) / trials;
    rep.mean_no_m += static_cast<double>(t.m_n) / trials;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Chernoff bound for adaptively dominated Bernoulli sums:
//   Pr[X >= mu + Delta] <= exp(-Delta^2 / (2 mu + 2 Delta)).

inline double chernoff_bound(double mu, double delta) {
  if (delta <= 0.0 || mu < 0.0)
    throw std::invalid_argument("chernoff_bound: need Delta > 0, mu >= 0");
  return std::exp(-delta * delta / (2.0 * mu + 2.0 * delta));
}

struct TailCheck {
  double bound = 0.0;
  double empirical = 0.0;
  double se = 0.0;
  bool vacuous = false;  // bound >= 1 proves nothing
  bool pass = true;      // empirical <= bound + 3 se (or vacuous)
};

// Simulates sums of Bernoulli variables whose conditional means never exceed
// p (the simulated chain modulates the success probability below p based on
// the running sum) and checks the empirical tail against the bound.
inline TailCheck chernoff_check(double p, int n, double delta_frac,
                                long long trials, Rng& rng) {
  const double mu = n * p;
  const double delta = delta_frac * n;
  TailCheck chk;
  chk.bound = chernoff_bound(mu, delta);
  long long hits = 0;
  for (long long t = 0; t < trials; ++t) {
    long long x = 0;
    for (int k = 0; k < n; ++k) {
      // adaptively dampened coin: stays <= p as the sum runs ahead
      const double pk = (x > (k + 1) * p) ? 0.5 * p : p;
      x += rng.uniform() < pk;
    }
    hits += (static_cast<double>(x) >= mu + delta);
  }
  chk.empirical = static_cast<double>(hits) / trials;
  chk.se = std::sqrt(chk.empirical * (1.0 - chk.empirical) /
                     static_cast<double>(trials));
  chk.vacuous = chk.bound >= 1.0;
  chk.pass = chk.vacuous || chk.empirical <= chk.bound + 3.0 * chk.se + 1e-12;
  return chk;
}

// Lower-tail bound on the random cut of a multigraph:
//   Pr[X < m/2 (1 - delta)] <= k / (delta^2 m), k = max multiplicity.
inline TailCheck random_cut_tail_check(const MultiGraph& g, double delta,
                                       long long trials, Rng& rng) {
  TailCheck chk;
  const double m = static_cast<double>(g.m);
  const int k = g.max_multiplicity();
  chk.bound = k / (delta * delta * m);
  long long hits = 0;
  std::vector<std::uint8_t> side(g.n);
  for (long long t = 0; t < trials; ++t) {
    for (int v = 0; v < g.n; ++v) side[v] = rng.bit() ? 1 : 0;
    hits += (static_cast<double>(cut_value(g, side)) < 0.5 * m * (1.0 - delta));
  }
  chk.empirical = static_cast<double>(hits) / trials;
  chk.se = std::sqrt(chk.empirical * (1.0 - chk.empirical) /
                     static_cast<double>(trials));
  chk.vacuous = chk.bound >= 1.0;
  chk.pass = chk.vacuous || chk.empirical <= chk.bound + 3.0 * chk.se + 1e-12;
  return chk;
}

}  // namespace ihp
