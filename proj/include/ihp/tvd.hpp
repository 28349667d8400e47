#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ihp/game.hpp"
#include "ihp/protocols.hpp"
#include "ihp/rng.hpp"

namespace ihp {

struct DiscreteDistribution {
  std::vector<double> p;
};

// 1/2 sum_w |mu(w) - nu(w)|.  Inputs must share a support universe and be
// normalized to 1e-9.
inline double exact_tvd(const DiscreteDistribution& mu,
                        const DiscreteDistribution& nu) {
  if (mu.p.size() != nu.p.size())
    throw std::invalid_argument("exact_tvd: support universes differ");
  double sum_mu = 0, sum_nu = 0, acc = 0;
  for (std::size_t i = 0; i < mu.p.size(); ++i) {
    sum_mu += mu.p[i];
    sum_nu += nu.p[i];
    acc += std::fabs(mu.p[i] - nu.p[i]);
  }
  if (std::fabs(sum_mu - 1.0) > 1e-9 || std::fabs(sum_nu - 1.0) > 1e-9)
    throw std::invalid_argument("exact_tvd: inputs not normalized");
  return 0.5 * acc;
}

// ---------------------------------------------------------------------------
// Empirical TVD between YES-case and NO-case transcript distributions.
//
// Exact-histogram mode keys the histogram on the concatenated message bits
// and requires the transcript space to stay small (<= 20 bits).  Larger
// spaces fall back to the same plug-in estimator with a reported bias bound
// (plug-in TVD overestimates; the bound below is the usual sqrt(K/N) one).

struct TvdEstimate {
  double tvd = 0.0;
  double bootstrap_se = 0.0;
  double bias_bound = 0.0;
  long long support_seen = 0;
  long long trials = 0;
};

namespace detail {

inline std::string transcript_key(const Transcript& tr) {
  std::string key;
  for (const auto& m : tr.messages) {
    for (std::uint8_t b : m.bits) key.push_back(b ? '1' : '0');
    key.push_back('|');
  }
  return key;
}

inline double histogram_tvd(const std::map<std::string, long long>& ha,
                            const std::map<std::string, long long>& hb,
                            double na, double nb) {
  double acc = 0.0;
  auto ita = ha.begin();
  auto itb = hb.begin();
  while (ita != ha.end() || itb != hb.end()) {
    if (itb == hb.end() || (ita != ha.end() && ita->first < itb->first)) {
      acc += ita->second / na;
      ++ita;
    } else if (ita == ha.end() || itb->first < ita->first) {
      acc += itb->second / nb;
      ++itb;
    } else {
      acc += std::fabs(ita->second / na - itb->second / nb);
      ++ita;
      ++itb;
    }
  }
  return 0.5 * acc;
}

}  // namespace detail

inline TvdEstimate transcript_tvd_experiment(const std::string& kind, int s,
                                             int n, int match_size,
                                             int players, long long trials,
                                             std::uint64_t seed,
                                             bool exact_mode = true) {
  auto proto = make_protocol(kind, s);
  std::map<std::string, long long> hist_yes, hist_no;
  std::size_t max_bits = 0;
  for (long long i = 0; i < trials; ++i) {
    for (int side = 0; side < 2; ++side) {
      Rng rng(seed, static_cast<std::uint64_t>(2 * i + side));
      DihpInstance inst = gen_instance(
          n, match_size, players, side == 0 ? CaseMode::Yes : CaseMode::No,
          rng);
      Transcript tr = run_protocol(*proto, inst, seed ^ (0x9e37 + i));
      max_bits = std::max(max_bits, tr.total_bits());
      if (exact_mode && max_bits > 20)
        throw CapacityError(
            "transcript_tvd_experiment: transcript space too large for exact "
            "mode");
      auto& h = side == 0 ? hist_yes : hist_no;
      ++h[detail::transcript_key(tr)];
    }
  }

  TvdEstimate est;
  est.trials = trials;
  const double nt = static_cast<double>(trials);
  est.tvd = detail::histogram_tvd(hist_yes, hist_no, nt, nt);

  std::map<std::string, long long> merged = hist_yes;
  for (const auto& [k, v] : hist_no) merged[k] += v;
  est.support_seen = static_cast<long long>(merged.size());
  est.bias_bound = 0.5 * std::sqrt(static_cast<double>(est.support_seen) / nt);

  // bootstrap: multinomial resamples drawn by binary search on cumulative
  // counts, histograms aligned on the merged support
  std::vector<long long> cy, cn;
  std::vector<std::size_t> iy, in;  // merged-support index per cell
  {
    std::map<std::string, std::size_t> pos;
    for (const auto& [k, v] : merged) pos.emplace(k, pos.size());
    long long acc = 0;
    for (const auto& [k, v] : hist_yes) {
      acc += v;
      cy.push_back(acc);
      iy.push_back(pos[k]);
    }
    acc = 0;
    for (const auto& [k, v] : hist_no) {
      acc += v;
      cn.push_back(acc);
      in.push_back(pos[k]);
    }
  }
  const int kBoot = 100;
  Rng boot(seed, 0xb007);
  std::vector<double> ry(merged.size()), rn(merged.size());
  double bsum = 0, bsum2 = 0;
  for (int rep = 0; rep < kBoot; ++rep) {
    std::fill(ry.begin(), ry.end(), 0.0);
    std::fill(rn.begin(), rn.end(), 0.0);
    for (long long i = 0; i < trials; ++i) {
      auto u = static_cast<long long>(boot.below(trials));
      auto it = std::upper_bound(cy.begin(), cy.end(), u);
      ry[iy[static_cast<std::size_t>(it - cy.begin())]] += 1.0;
      u = static_cast<long long>(boot.below(trials));
      it = std::upper_bound(cn.begin(), cn.end(), u);
      rn[in[static_cast<std::size_t>(it - cn.begin())]] += 1.0;
    }
    double t = 0.0;
    for (std::size_t c = 0; c < ry.size(); ++c)
      t += std::fabs(ry[c] - rn[c]);
    t *= 0.5 / nt;
    bsum += t;
    bsum2 += t * t;
  }
  const double mean = bsum / kBoot;
  est.bootstrap_se = std::sqrt(std::max(0.0, bsum2 / kBoot - mean * mean));
  return est;
}

}  // namespace ihp
