#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "ihp/forest.hpp"
#include "ihp/game.hpp"
#include "ihp/logcomb.hpp"
#include "ihp/parallel.hpp"

namespace ihp {

// Always says YES; posts nothing until the output bit.
class TrivialYesProtocol final : public Protocol {
 public:
  explicit TrivialYesProtocol(int s) : s_(s) {}
  std::string name() const override { return "trivial"; }
  int budget() const override { return s_; }
  void reset(const DihpInstance&, std::uint64_t) override {}
  Message step(int t, const DihpInstance& inst,
               std::span<const Message>) override {
    Message m;
    if (t == inst.players - 1) {
      m.bits.push_back(1);
      m.charged = 1;
    }
    return m;
  }

 private:
  int s_;
};

// Flips a seeded coin for the output.
class RandomGuessProtocol final : public Protocol {
 public:
  explicit RandomGuessProtocol(int s) : s_(s), rng_(0) {}
  std::string name() const override { return "random"; }
  int budget() const override { return s_; }
  void reset(const DihpInstance&, std::uint64_t seed) override {
    rng_ = Rng(seed, 0x72616e64);
  }
  Message step(int t, const DihpInstance& inst,
               std::span<const Message>) override {
    Message m;
    if (t == inst.players - 1) {
      m.bits.push_back(rng_.bit() ? 1 : 0);
      m.charged = 1;
    }
    return m;
  }

 private:
  int s_;
  Rng rng_;
};

// The component-growing distinguisher: player 1 posts its first s edges;
// player t posts every edge of M_t touching a nontrivial component of the
// forest so far (free bits) plus up to s fresh non-touching edges.  The
// first cycle decides: YES iff its label sum is zero.  After a cycle the
// remaining rounds post constant (empty) messages so transcript shapes per
// round do not leak anything further.
class ComponentGrowingDistinguisher final : public Protocol {
 public:
  explicit ComponentGrowingDistinguisher(int s) : s_(s), forest_(1) {
    if (s < 2) throw std::invalid_argument("distinguisher: need s >= 2");
  }
  std::string name() const override { return "distinguisher"; }
  int budget() const override { return s_; }

  void reset(const DihpInstance& inst, std::uint64_t) override {
    forest_.reset(inst.n);
    touch_snapshot_.assign(inst.n, 0);
    decided_ = false;
    verdict_yes_ = true;
    cycle_found_ = false;
  }

  Message step(int t, const DihpInstance& inst,
               std::span<const Message>) override {
    Message m;
    const bool last = (t == inst.players - 1);
    const int fresh_cap = last ? s_ - 1 : s_;
    if (!decided_) {
      const Matching& mt = inst.matchings[t];
      const BitString& w = inst.labels[t];
      for (int v = 0; v < inst.n; ++v)
        touch_snapshot_[v] = forest_.touches_nontrivial(v) ? 1 : 0;
      int fresh = 0;
      for (int e = 0; e < mt.size() && !decided_; ++e) {
        const auto [a, b] = mt.edges[e];
        const bool touching = t > 0 && (touch_snapshot_[a] || touch_snapshot_[b]);
        if (!touching && fresh >= fresh_cap) continue;
        m.bits.push_back(w[e]);
        if (touching) {
          ++m.free_bits;
        } else {
          ++fresh;
          ++m.charged;
        }
        if (!forest_.add_edge(a, b, w[e])) {
          // closed a cycle: consistent labels force a zero sum
          decided_ = true;
          cycle_found_ = true;
          verdict_yes_ = forest_.cycle_sum(a, b, w[e]) == 0;
        }
      }
    }
    if (last) {
      m.bits.push_back(verdict_yes_ ? 1 : 0);
      ++m.charged;
    }
    return m;
  }

  bool cycle_found() const { return cycle_found_; }
  const Forest& forest() const { return forest_; }

 private:
  int s_;
  Forest forest_;
  std::vector<std::uint8_t> touch_snapshot_;
  bool decided_ = false;
  bool verdict_yes_ = true;
  bool cycle_found_ = false;
};

// Adaptive component grower: keeps a list of tracked components whose total
// size stays at most s/2 by evicting the smallest, reveals edges incident
// to tracked components, and treats a within-component edge as the deciding
// cycle.
class AdaptiveSolver final : public Protocol {
 public:
  explicit AdaptiveSolver(int s) : s_(s) {
    if (s < 4) throw std::invalid_argument("adaptive: need s >= 4");
  }
  std::string name() const override { return "adaptive"; }
  int budget() const override { return s_; }

  void reset(const DihpInstance& inst, std::uint64_t) override {
    comp_of_.assign(inst.n, -1);
    par_.assign(inst.n, 0);
    members_.clear();
    alive_.clear();
    total_tracked_ = 0;
    decided_ = false;
    verdict_yes_ = true;
    cycle_found_ = false;
  }

  Message step(int t, const DihpInstance& inst,
               std::span<const Message>) override {
    Message m;
    const bool last = (t == inst.players - 1);
    const int reveal_cap = last ? s_ - 1 : s_;
    if (!decided_) {
      const Matching& mt = inst.matchings[t];
      const BitString& w = inst.labels[t];
      if (t == 0) {
        const int seed_edges =
            std::min({mt.size(), s_ / 4, std::max(1, reveal_cap)});
        for (int e = 0; e < seed_edges; ++e) {
          const auto [a, b] = mt.edges[e];
          start_component(a, b, w[e]);
          m.bits.push_back(w[e]);
          ++m.charged;
        }
      } else {
        for (int e = 0; e < mt.size() && !decided_; ++e) {
          if (static_cast<int>(m.charged) >= reveal_cap) break;
          const auto [a, b] = mt.edges[e];
          const int ca = live_comp(a), cb = live_comp(b);
          if (ca < 0 && cb < 0) continue;
          m.bits.push_back(w[e]);
          ++m.charged;
          if (ca >= 0 && cb >= 0) {
            if (ca == cb) {
              decided_ = true;
              cycle_found_ = true;
              verdict_yes_ = static_cast<std::uint8_t>(par_[a] ^ par_[b] ^ w[e]) == 0;
            } else {
              merge(ca, cb, a, b, w[e]);
            }
          } else if (ca >= 0) {
            attach(ca, a, b, w[e]);
          } else {
            attach(cb, b, a, w[e]);
          }
        }
      }
      evict_to_cap();
    }
    if (last) {
      m.bits.push_back(verdict_yes_ ? 1 : 0);
      ++m.charged;
    }
    return m;
  }

  bool cycle_found() const { return cycle_found_; }

  double average_component_size() const {
    long long alive = 0;
    for (std::size_t c = 0; c < members_.size(); ++c)
      alive += alive_[c] ? 1 : 0;
    return alive ? static_cast<double>(total_tracked_) / alive : 0.0;
  }

 private:
  int live_comp(int v) const {
    const int c = comp_of_[v];
    return (c >= 0 && alive_[c]) ? c : -1;
  }

  void start_component(int a, int b, std::uint8_t w) {
    const int c = static_cast<int>(members_.size());
    members_.push_back({a, b});
    alive_.push_back(1);
    comp_of_[a] = comp_of_[b] = c;
    par_[a] = 0;
    par_[b] = w;
    total_tracked_ += 2;
  }

  void attach(int c, int anchor, int fresh, std::uint8_t w) {
    comp_of_[fresh] = c;
    par_[fresh] = static_cast<std::uint8_t>(par_[anchor] ^ w);
    members_[c].push_back(fresh);
    ++total_tracked_;
  }

  void merge(int ca, int cb, int a, int b, std::uint8_t w) {
    if (members_[ca].size() < members_[cb].size()) {
      std::swap(ca, cb);
    }
    const std::uint8_t delta = static_cast<std::uint8_t>(par_[a] ^ par_[b] ^ w);
    for (int u : members_[cb]) {
      comp_of_[u] = ca;
      par_[u] = static_cast<std::uint8_t>(par_[u] ^ delta);
    }
    members_[ca].insert(members_[ca].end(), members_[cb].begin(),
                        members_[cb].end());
    members_[cb].clear();
    alive_[cb] = 0;
  }

  void evict_to_cap() {
    const long long cap = s_ / 2;
    if (total_tracked_ <= cap) return;
    std::vector<int> order;
    for (int c = 0; c < static_cast<int>(members_.size()); ++c)
      if (alive_[c]) order.push_back(c);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
      if (members_[x].size() != members_[y].size())
        return members_[x].size() < members_[y].size();
      return x < y;
    });
    for (int c : order) {
      if (total_tracked_ <= cap) break;
      alive_[c] = 0;
      total_tracked_ -= static_cast<long long>(members_[c].size());
      for (int u : members_[c]) comp_of_[u] = -1;
      members_[c].clear();
    }
  }

  int s_;
  std::vector<int> comp_of_;
  std::vector<std::uint8_t> par_;
  std::vector<std::vector<int>> members_;
  std::vector<std::uint8_t> alive_;
  long long total_tracked_ = 0;
  bool decided_ = false;
  bool verdict_yes_ = true;
  bool cycle_found_ = false;
};

inline std::unique_ptr<Protocol> make_protocol(const std::string& kind, int s) {
  if (kind == "trivial") return std::make_unique<TrivialYesProtocol>(s);
  if (kind == "random") return std::make_unique<RandomGuessProtocol>(s);
  if (kind == "distinguisher")
    return std::make_unique<ComponentGrowingDistinguisher>(s);
  if (kind == "adaptive") return std::make_unique<AdaptiveSolver>(s);
  throw std::invalid_argument("unknown protocol: " + kind);
}

// ---------------------------------------------------------------------------

struct AdvantageResult {
  std::string protocol;
  long long trials = 0;
  long long successes = 0;
  long long yes_trials = 0, yes_correct = 0;
  long long no_trials = 0, no_correct = 0;
  long long no_cycles = 0;  // cycles found among NO trials (when applicable)
  double success_rate = 0.0;
  WilsonInterval ci{0, 1};

  double no_cycle_rate() const {
    return no_trials ? static_cast<double>(no_cycles) / no_trials : 0.0;
  }
};

// Success probability under the mixed distribution D = (D^Y + D^N)/2.
// Trial i uses RNG stream (seed, i); per-trial flags land in trial-indexed
// storage, so the reduction is identical for any worker count.
inline AdvantageResult advantage_experiment(const std::string& kind, int s,
                                            int n, int match_size, int players,
                                            long long trials,
                                            std::uint64_t seed) {
  AdvantageResult res;
  res.protocol = kind;
  res.trials = trials;
  struct TrialFlags {
    std::uint8_t yes = 0, correct = 0, cycle = 0;
  };
  std::vector<TrialFlags> flags(trials);
  for_each_trial(trials, [&](long long i) {
    auto proto = make_protocol(kind, s);
    Rng rng(seed, static_cast<std::uint64_t>(i));
    DihpInstance inst =
        gen_instance(n, match_size, players, CaseMode::Mixed, rng);
    Transcript tr = run_protocol(*proto, inst, seed ^ (0x517cc1b7 + i));
    TrialFlags& f = flags[i];
    f.yes = inst.tag == Case::Yes;
    f.correct = tr.output_yes == f.yes;
    if (auto* d = dynamic_cast<ComponentGrowingDistinguisher*>(proto.get()))
      f.cycle = d->cycle_found();
    else if (auto* a = dynamic_cast<AdaptiveSolver*>(proto.get()))
      f.cycle = a->cycle_found();
  });
  for (const TrialFlags& f : flags) {
    res.successes += f.correct;
    if (f.yes) {
      ++res.yes_trials;
      res.yes_correct += f.correct;
    } else {
      ++res.no_trials;
      res.no_correct += f.correct;
      res.no_cycles += f.cycle;
    }
  }
  res.success_rate =
      trials ? static_cast<double>(res.successes) / trials : 0.0;
  res.ci = wilson95(static_cast<double>(res.successes),
                    static_cast<double>(res.trials));
  return res;
}

// ---------------------------------------------------------------------------

// Forest-potential evolution of the component-growing protocol, tracked
// per edge: e_i is added when it touches a nontrivial component, a cycle
// is recorded when both endpoints already share one, and after the matching
// is consumed up to s fresh edges join as new size-2 components.
struct TraceReport {
  int n = 0, match_size = 0, players = 0, s = 0;
  long long trials = 0;
  long long steps = 0;          // edges scanned with ||F|| > 0
  double mean_ratio = 0.0;      // mean of ||F^i|| / ||F^{i-1}||
  double se_ratio = 0.0;
  double growth_bound = 0.0;    // 1 + 12/n + 8 max||F|| / n^2
  long long cycle_edges = 0;    // scanned edges closing a cycle
  long long scanned_edges = 0;  // all scanned edges (for cycle frequency)
  double mean_cycle_pred = 0.0; // mean of sum |C_j|^2 / n^2 before each edge
  long long max_potential = 0;
  std::vector<double> mean_round_potential;  // index t-1 -> mean ||F_t||

  double cycle_rate() const {
    return scanned_edges ? static_cast<double>(cycle_edges) / scanned_edges
                         : 0.0;
  }
};

inline TraceReport potential_trace(int n, int match_size, int players, int s,
                                   long long trials, std::uint64_t seed) {
  TraceReport rep;
  rep.n = n;
  rep.match_size = match_size;
  rep.players = players;
  rep.s = s;
  rep.trials = trials;
  rep.mean_round_potential.assign(players, 0.0);

  double sum_r = 0.0, sum_r2 = 0.0, sum_pred = 0.0;
  Forest forest(n);
  MatchingSampler sampler(n);
  const double n2 = static_cast<double>(n) * n;

  for (long long trial = 0; trial < trials; ++trial) {
    Rng rng(seed, static_cast<std::uint64_t>(trial));
    forest.reset(n);
    for (int t = 0; t < players; ++t) {
      auto pairs = sampler.next_pairs(match_size, rng);
      for (const auto& [a, b] : pairs) {
        const long long before = forest.potential();
        ++rep.scanned_edges;
        sum_pred += static_cast<double>(before) / n2;
        if (forest.same_component(a, b)) {
          ++rep.cycle_edges;  // ||F|| unchanged; still a ratio-1 step below
        } else if (forest.touches_nontrivial(a) ||
                   forest.touches_nontrivial(b)) {
          forest.add_edge(a, b, 0);
        }
        if (before > 0) {
          const double r = static_cast<double>(forest.potential()) / before;
          sum_r += r;
          sum_r2 += r * r;
          ++rep.steps;
        }
        rep.max_potential = std::max(rep.max_potential, forest.potential());
      }
      int fresh = 0;
      for (const auto& [a, b] : pairs) {
        if (fresh >= s) break;
        if (!forest.touches_nontrivial(a) && !forest.touches_nontrivial(b)) {
          forest.add_edge(a, b, 0);
          ++fresh;
        }
      }
      rep.max_potential = std::max(rep.max_potential, forest.potential());
      rep.mean_round_potential[t] +=
          static_cast<double>(forest.potential()) / trials;
    }
  }
  if (rep.steps > 0) {
    rep.mean_ratio = sum_r / rep.steps;
    const double var =
        std::max(0.0, sum_r2 / rep.steps - rep.mean_ratio * rep.mean_ratio);
    rep.se_ratio = std::sqrt(var / rep.steps);
  }
  rep.mean_cycle_pred = rep.scanned_edges ? sum_pred / rep.scanned_edges : 0.0;
  rep.growth_bound =
      1.0 + 12.0 / n + 8.0 * static_cast<double>(rep.max_potential) / n2;
  return rep;
}

}  // namespace ihp
