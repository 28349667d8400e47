#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ihp/common.hpp"
#include "ihp/matching.hpp"
#include "ihp/rng.hpp"

namespace ihp {

enum class Case : std::uint8_t { Yes, No };
enum class CaseMode : std::uint8_t { Yes, No, Mixed };

// One sampled game: public matchings, private per-player labels, the case
// tag, and (in the YES case) the hidden partition the labels came from.
struct DihpInstance {
  int n = 0;
  int match_size = 0;  // alpha*n as an integer
  int players = 0;     // T
  std::vector<Matching> matchings;
  std::vector<BitString> labels;
  Case tag = Case::No;
  BitString hidden;  // present iff tag == Yes
};

// YES: labels are parities of a uniform hidden partition.
// NO: labels are independent uniform bits.
// Mixed mode tosses a fair coin for the case first.
inline DihpInstance gen_instance(int n, int match_size, int players,
                                 CaseMode mode, Rng& rng) {
  if (n < 2 || match_size < 0 || 2 * match_size > n || players < 1)
    throw std::invalid_argument("gen_instance: bad parameters");
  DihpInstance inst;
  inst.n = n;
  inst.match_size = match_size;
  inst.players = players;
  inst.tag = mode == CaseMode::Yes    ? Case::Yes
             : mode == CaseMode::No   ? Case::No
             : (rng.bit() ? Case::Yes : Case::No);
  if (inst.tag == Case::Yes) {
    inst.hidden.resize(n);
    for (int v = 0; v < n; ++v) inst.hidden[v] = rng.bit() ? 1 : 0;
  }
  MatchingSampler sampler(n);
  inst.matchings.reserve(players);
  inst.labels.reserve(players);
  for (int t = 0; t < players; ++t) {
    inst.matchings.push_back(sampler.next(match_size, rng));
    if (inst.tag == Case::Yes) {
      inst.labels.push_back(apply_matching(inst.matchings.back(), inst.hidden));
    } else {
      BitString w(match_size);
      for (auto& b : w) b = rng.bit() ? 1 : 0;
      inst.labels.push_back(std::move(w));
    }
  }
  return inst;
}

// One posted message.  `bits` holds everything readable on the blackboard;
// only `charged` of them count against the budget s (the component-growing
// protocol's touching-edge labels ride for free, mirroring the accounting
// where free bits are tracked but not charged).
struct Message {
  std::vector<std::uint8_t> bits;
  std::size_t charged = 0;
  std::size_t free_bits = 0;
};

struct Transcript {
  std::vector<Message> messages;
  int budget = 0;
  bool output_yes = false;

  std::size_t total_bits() const {
    std::size_t acc = 0;
    for (const auto& m : messages) acc += m.bits.size();
    return acc;
  }
};

// Sequential blackboard protocol: player t sees (M_{1:t}, S_{1:t-1}, w_t)
// and posts S_t.  The final message carries the output as its last bit.
class Protocol {
 public:
  virtual ~Protocol() = default;
  virtual std::string name() const = 0;
  virtual int budget() const = 0;

  // Called once before a run.
  virtual void reset(const DihpInstance& shape, std::uint64_t seed) = 0;

  // Produce S_t given the public prefix and the player's private labels.
  // t is 0-based; t == players-1 must append the decision bit.
  virtual Message step(int t, const DihpInstance& inst,
                       std::span<const Message> prior) = 0;
};

// Runs the protocol over the instance, enforcing the charged-bit budget.
// A protocol posting more charged bits than s is a contract violation and
// surfaces as an error rather than silent truncation.
inline Transcript run_protocol(Protocol& p, const DihpInstance& inst,
                               std::uint64_t seed = 0) {
  Transcript tr;
  tr.budget = p.budget();
  p.reset(inst, seed);
  for (int t = 0; t < inst.players; ++t) {
    Message m = p.step(t, inst, std::span<const Message>(tr.messages));
    if (m.charged > static_cast<std::size_t>(tr.budget))
      throw BudgetError("run_protocol: message exceeds budget at player " +
                        std::to_string(t + 1));
    tr.messages.push_back(std::move(m));
  }
  if (tr.messages.back().bits.empty())
    throw std::logic_error("run_protocol: final message carries no output bit");
  tr.output_yes = tr.messages.back().bits.back() != 0;
  return tr;
}

}  // namespace ihp
