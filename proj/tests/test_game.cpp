#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "ihp/forest.hpp"
#include "ihp/game.hpp"
#include "ihp/io.hpp"
#include "ihp/protocols.hpp"

using namespace ihp;

TEST_CASE("instance generation") {
  SECTION("YES labels are consistent with the hidden partition") {
    Rng rng(1);
    for (int rep = 0; rep < 50; ++rep) {
      DihpInstance inst = gen_instance(30, 5, 4, CaseMode::Yes, rng);
      REQUIRE(inst.hidden.size() == 30);
      for (int t = 0; t < inst.players; ++t)
        REQUIRE(inst.labels[t] ==
                apply_matching(inst.matchings[t], inst.hidden));
    }
  }
  SECTION("NO labels pass a frequency test") {
    Rng rng(2);
    long long ones = 0, bits = 0;
    while (bits < 100000) {
      DihpInstance inst = gen_instance(20, 2, 3, CaseMode::No, rng);
      for (const auto& w : inst.labels)
        for (auto b : w) {
          ones += b;
          ++bits;
        }
    }
    REQUIRE(std::fabs(ones / static_cast<double>(bits) - 0.5) < 0.01);
  }
  SECTION("YES labels telescope to zero around every cycle") {
    Rng rng(3);
    for (int rep = 0; rep < 100; ++rep) {
      DihpInstance inst = gen_instance(16, 4, 6, CaseMode::Yes, rng);
      Forest forest(inst.n);
      for (int t = 0; t < inst.players; ++t) {
        const Matching& m = inst.matchings[t];
        for (int e = 0; e < m.size(); ++e) {
          const auto [a, b] = m.edges[e];
          if (forest.same_component(a, b))
            REQUIRE(forest.cycle_sum(a, b, inst.labels[t][e]) == 0);
          else
            forest.add_edge(a, b, inst.labels[t][e]);
        }
      }
    }
  }
  SECTION("mixed mode draws both cases") {
    Rng rng(4);
    int yes = 0;
    for (int rep = 0; rep < 1000; ++rep)
      yes += gen_instance(8, 2, 1, CaseMode::Mixed, rng).tag == Case::Yes;
    REQUIRE(yes > 400);
    REQUIRE(yes < 600);
  }
  SECTION("parameter validation") {
    Rng rng(5);
    REQUIRE_THROWS_AS(gen_instance(4, 3, 1, CaseMode::Yes, rng),
                      std::invalid_argument);
  }
}

TEST_CASE("forest potential") {
  SECTION("examples") {
    Forest f(6);
    REQUIRE(f.potential() == 0);
    f.add_edge(0, 1, 0);
    REQUIRE(f.potential() == 4);  // one size-2 component
    f.add_edge(1, 2, 1);
    REQUIRE(f.potential() == 9);  // path on 3 vertices, isolated rest
  }
  SECTION("incremental equals recomputed over random unions") {
    Rng rng(6);
    Forest f(400);
    for (int step = 0; step < 100000; ++step) {
      const int a = static_cast<int>(rng.below(400));
      const int b = static_cast<int>(rng.below(400));
      if (a != b && !f.same_component(a, b)) f.add_edge(a, b, rng.bit());
      if (step % 1000 == 0)
        REQUIRE(f.potential() == f.recompute_potential());
      if (f.edge_count() == 399) f.reset(400);
    }
  }
  SECTION("parity bookkeeping matches labels") {
    Forest f(5);
    f.add_edge(0, 1, 1);
    f.add_edge(1, 2, 0);
    f.add_edge(2, 3, 1);
    // cycle 0-3 with label w: sum = par(0) ^ par(3) ^ w
    REQUIRE(f.cycle_sum(0, 3, 0) == 0);  // 1^0^1 = 0 path parity
    REQUIRE(f.cycle_sum(0, 3, 1) == 1);
  }
}

TEST_CASE("protocol harness") {
  Rng rng(7);
  DihpInstance inst = gen_instance(20, 3, 4, CaseMode::Mixed, rng);
  SECTION("trivial protocol always says YES") {
    TrivialYesProtocol p(4);
    for (int rep = 0; rep < 20; ++rep) {
      Rng r2(rep);
      DihpInstance i2 = gen_instance(20, 3, 4, CaseMode::Mixed, r2);
      REQUIRE(run_protocol(p, i2).output_yes);
    }
  }
  SECTION("random guess wins about half the time") {
    AdvantageResult res =
        advantage_experiment("random", 4, 16, 3, 3, 100000, 99);
    REQUIRE(std::fabs(res.success_rate - 0.5) < 0.01);
  }
  SECTION("budget violations surface as errors") {
    struct Greedy final : Protocol {
      std::string name() const override { return "greedy"; }
      int budget() const override { return 2; }
      void reset(const DihpInstance&, std::uint64_t) override {}
      Message step(int, const DihpInstance&,
                   std::span<const Message>) override {
        Message m;
        m.bits = {1, 1, 1, 1};
        m.charged = 4;
        return m;
      }
    } greedy;
    REQUIRE_THROWS_AS(run_protocol(greedy, inst), BudgetError);
  }
  SECTION("messages respect the budget") {
    ComponentGrowingDistinguisher p(5);
    for (int rep = 0; rep < 50; ++rep) {
      Rng r2(rep);
      DihpInstance i2 = gen_instance(24, 6, 5, CaseMode::Mixed, r2);
      Transcript tr = run_protocol(p, i2);
      for (const auto& m : tr.messages)
        REQUIRE(m.charged <= static_cast<std::size_t>(tr.budget));
    }
  }
}

TEST_CASE("component-growing distinguisher") {
  SECTION("always YES on YES instances") {
    ComponentGrowingDistinguisher p(6);
    for (int rep = 0; rep < 2000; ++rep) {
      Rng rng(rep);
      DihpInstance inst = gen_instance(24, 4, 6, CaseMode::Yes, rng);
      REQUIRE(run_protocol(p, inst).output_yes);
    }
  }
  SECTION("NO-case success rate is half the cycle rate") {
    const int n = 24, msize = 4, players = 8, s = 6;
    ComponentGrowingDistinguisher p(s);
    long long cycles = 0, correct = 0;
    const int trials = 20000;
    for (int rep = 0; rep < trials; ++rep) {
      Rng rng(rep);
      DihpInstance inst = gen_instance(n, msize, players, CaseMode::No, rng);
      Transcript tr = run_protocol(p, inst);
      cycles += p.cycle_found();
      correct += !tr.output_yes;
    }
    const double cycle_rate = cycles / static_cast<double>(trials);
    const double success = correct / static_cast<double>(trials);
    REQUIRE(cycle_rate > 0.05);  // parameters chosen so cycles do occur
    const double se =
        std::sqrt(success * (1 - success) / trials) +
        std::sqrt(cycle_rate * (1 - cycle_rate) / trials);
    REQUIRE(std::fabs(success - cycle_rate / 2) <= 4 * se + 1e-9);
  }
  SECTION("guaranteed cycle detection once the union has one") {
    // s >= n/2 and enough players: every edge is revealed, so the first
    // cycle in the union of matchings is found
    const int n = 12, msize = 4, players = 8, s = n;
    ComponentGrowingDistinguisher p(s);
    for (int rep = 0; rep < 200; ++rep) {
      Rng rng(rep);
      DihpInstance inst = gen_instance(n, msize, players, CaseMode::No, rng);
      // brute-force: does the union graph contain a cycle?
      Forest uf(n);
      bool has_cycle = false;
      for (const auto& m : inst.matchings)
        for (const auto& [a, b] : m.edges)
          if (!uf.add_edge(a, b, 0)) has_cycle = true;
      run_protocol(p, inst);
      if (has_cycle) REQUIRE(p.cycle_found());
    }
  }
}

TEST_CASE("adaptive solver grows components geometrically") {
  // while the size cap is slack, the average tracked component grows by at
  // least (1 + alpha/2) per round
  const int n = 2000, msize = 200, players = 6, s = 4000;
  const double alpha = static_cast<double>(msize) / n;
  double mean_ratio = 0;
  long long ratios = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng(4040 + trial);
    DihpInstance inst = gen_instance(n, msize, players, CaseMode::No, rng);
    AdaptiveSolver p(s);
    p.reset(inst, 0);
    std::vector<Message> prior;
    double prev = 0;
    for (int t = 0; t < players; ++t) {
      prior.push_back(p.step(t, inst, std::span<const Message>(prior)));
      const double avg = p.average_component_size();
      if (t >= 1 && prev > 0 && avg > 0) {
        mean_ratio += avg / prev;
        ++ratios;
      }
      prev = avg;
    }
  }
  mean_ratio /= static_cast<double>(ratios);
  REQUIRE(mean_ratio >= 1.0 + alpha / 2);
}

TEST_CASE("adaptive solver detection rates") {
  SECTION("large budget regime finds cycles") {
    long long found = 0;
    AdaptiveSolver p(500);
    for (int rep = 0; rep < 60; ++rep) {
      Rng rng(rep);
      DihpInstance inst = gen_instance(2000, 200, 12, CaseMode::No, rng);
      run_protocol(p, inst);
      found += p.cycle_found();
    }
    REQUIRE(found > 54);  // > 0.9
  }
  SECTION("starved budget regime does not") {
    long long found = 0;
    AdaptiveSolver p(10);
    for (int rep = 0; rep < 60; ++rep) {
      Rng rng(rep);
      DihpInstance inst = gen_instance(100000, 1000, 6, CaseMode::No, rng);
      run_protocol(p, inst);
      found += p.cycle_found();
    }
    REQUIRE(found <= 3);  // < 0.05
  }
}

TEST_CASE("potential trace obeys the evolution bounds") {
  TraceReport rep = potential_trace(2000, 50, 5, 25, 100, 77);
  REQUIRE(rep.steps > 0);
  REQUIRE(rep.mean_ratio <= rep.growth_bound + 3 * rep.se_ratio);
  const double freq = rep.cycle_rate();
  const double se = std::sqrt(std::max(freq * (1 - freq), 1e-12) /
                              static_cast<double>(rep.scanned_edges));
  REQUIRE(freq <= 2 * rep.mean_cycle_pred + 3 * se);
  // end-of-game potential against the frozen geometric envelope 4s * 8^T
  REQUIRE(rep.mean_round_potential.back() <=
          4.0 * rep.s * std::pow(8.0, rep.players));
}

TEST_CASE("malformed files are rejected") {
  std::stringstream bad("not-an-instance\n");
  REQUIRE_THROWS_AS(read_instance(bad), std::runtime_error);
  std::stringstream badg("wrong-header 3 1\n0 1 1\n");
  REQUIRE_THROWS_AS(read_multigraph(badg), std::runtime_error);
}

TEST_CASE("instance serialization round-trips") {
  Rng rng(314);
  for (CaseMode mode : {CaseMode::Yes, CaseMode::No}) {
    DihpInstance inst = gen_instance(18, 4, 3, mode, rng);
    std::stringstream ss;
    write_instance(ss, inst);
    DihpInstance back = read_instance(ss);
    REQUIRE(back.n == inst.n);
    REQUIRE(back.match_size == inst.match_size);
    REQUIRE(back.players == inst.players);
    REQUIRE(back.tag == inst.tag);
    REQUIRE(back.hidden == inst.hidden);
    for (int t = 0; t < inst.players; ++t) {
      REQUIRE(back.matchings[t].edges == inst.matchings[t].edges);
      REQUIRE(back.labels[t] == inst.labels[t]);
    }
    // byte-identical re-serialization
    std::stringstream ss2;
    write_instance(ss2, back);
    std::stringstream ss3;
    write_instance(ss3, inst);
    REQUIRE(ss2.str() == ss3.str());
  }
}
