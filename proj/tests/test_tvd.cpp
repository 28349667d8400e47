#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "ihp/rng.hpp"
#include "ihp/tvd.hpp"

using namespace ihp;

namespace {

DiscreteDistribution random_dist(std::size_t support, Rng& rng,
                                 bool full_support = false) {
  DiscreteDistribution d;
  d.p.resize(support);
  double total = 0;
  for (auto& x : d.p) {
    x = full_support ? 0.05 + rng.uniform() : rng.uniform();
    total += x;
  }
  for (auto& x : d.p) x /= total;
  return d;
}

}  // namespace

TEST_CASE("exact tvd basics") {
  SECTION("identical distributions") {
    DiscreteDistribution d{{0.25, 0.25, 0.5}};
    REQUIRE(exact_tvd(d, d) == Catch::Approx(0.0));
  }
  SECTION("disjoint point masses") {
    DiscreteDistribution a{{1.0, 0.0}}, b{{0.0, 1.0}};
    REQUIRE(exact_tvd(a, b) == Catch::Approx(1.0));
  }
  SECTION("two Bernoullis") {
    DiscreteDistribution a{{0.5, 0.5}}, b{{0.25, 0.75}};
    REQUIRE(exact_tvd(a, b) == Catch::Approx(0.25));
  }
  SECTION("symmetry and range") {
    Rng rng(1);
    for (int rep = 0; rep < 100; ++rep) {
      auto a = random_dist(12, rng);
      auto b = random_dist(12, rng);
      const double t = exact_tvd(a, b);
      REQUIRE(t == Catch::Approx(exact_tvd(b, a)));
      REQUIRE(t >= 0.0);
      REQUIRE(t <= 1.0);
    }
  }
  SECTION("unnormalized input is rejected") {
    DiscreteDistribution a{{0.5, 0.6}}, b{{0.5, 0.5}};
    REQUIRE_THROWS_AS(exact_tvd(a, b), std::invalid_argument);
    DiscreteDistribution c{{0.5}};
    REQUIRE_THROWS_AS(exact_tvd(c, b), std::invalid_argument);
  }
}

TEST_CASE("data processing cannot increase tvd") {
  // X, Y on a support of size <= 16, W independent, f a fixed map;
  // distributions of f(X,W) and f(Y,W) computed exactly.
  Rng rng(7);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t sx = 2 + rng.below(15);
    const std::size_t sw = 2 + rng.below(7);
    const std::size_t sz = 2 + rng.below(7);
    auto px = random_dist(sx, rng);
    auto py = random_dist(sx, rng);
    auto pw = random_dist(sw, rng);
    std::vector<std::vector<std::size_t>> f(sx, std::vector<std::size_t>(sw));
    for (auto& row : f)
      for (auto& v : row) v = rng.below(sz);
    DiscreteDistribution fx{std::vector<double>(sz, 0.0)};
    DiscreteDistribution fy{std::vector<double>(sz, 0.0)};
    for (std::size_t x = 0; x < sx; ++x)
      for (std::size_t w = 0; w < sw; ++w) {
        fx.p[f[x][w]] += px.p[x] * pw.p[w];
        fy.p[f[x][w]] += py.p[x] * pw.p[w];
      }
    REQUIRE(exact_tvd(fx, fy) <= exact_tvd(px, py) + 1e-9);
  }
}

TEST_CASE("expectation identity for full-support distributions") {
  // 2 tvd(mu, nu) = E_{X~mu} |1 - nu(X)/mu(X)|
  Rng rng(11);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t support = 2 + rng.below(31);
    auto mu = random_dist(support, rng, true);
    auto nu = random_dist(support, rng, true);
    double expectation = 0;
    for (std::size_t i = 0; i < support; ++i)
      expectation += mu.p[i] * std::fabs(1.0 - nu.p[i] / mu.p[i]);
    REQUIRE(expectation ==
            Catch::Approx(2 * exact_tvd(mu, nu)).margin(1e-9));
  }
}

TEST_CASE("transcript tvd experiment") {
  SECTION("label-blind protocol estimates zero") {
    TvdEstimate est =
        transcript_tvd_experiment("random", 2, 12, 2, 2, 4000, 5);
    REQUIRE(est.tvd <= 3 * est.bootstrap_se + est.bias_bound + 1e-9);
  }
  SECTION("single-round forwarding is a calibration diagnostic") {
    // At T=1 the YES-case labels are exactly uniform, so the true TVD is 0;
    // whatever the plug-in estimator reports is bias, and it must stay
    // within its own reported bound.
    struct Forwarder final : Protocol {
      std::string name() const override { return "forward"; }
      int budget() const override { return 3; }
      void reset(const DihpInstance&, std::uint64_t) override {}
      Message step(int t, const DihpInstance& inst,
                   std::span<const Message>) override {
        Message m;
        for (auto b : inst.labels[t]) m.bits.push_back(b);
        m.charged = m.bits.size();
        if (t == inst.players - 1) {
          m.bits.push_back(1);
          ++m.charged;
        }
        return m;
      }
    };
    // run the histogram machinery inline on the forwarding protocol
    Forwarder fwd;
    std::map<std::string, long long> hy, hn;
    const long long trials = 20000;
    for (long long i = 0; i < trials; ++i) {
      for (int side = 0; side < 2; ++side) {
        Rng rng(40 + 2 * i + side);
        DihpInstance inst = gen_instance(
            6, 2, 1, side == 0 ? CaseMode::Yes : CaseMode::No, rng);
        Transcript tr = run_protocol(fwd, inst);
        ++(side == 0 ? hy : hn)[detail::transcript_key(tr)];
      }
    }
    const double est = detail::histogram_tvd(hy, hn, trials, trials);
    const double bias =
        0.5 * std::sqrt(static_cast<double>(hy.size() + hn.size()) / trials);
    REQUIRE(est <= 3 * bias);  // consistent with a true value of zero
  }
  SECTION("distinguisher tvd grows with player count") {
    double prev = -1.0;
    for (int players : {1, 2, 3}) {
      TvdEstimate est = transcript_tvd_experiment("distinguisher", 3, 10, 2,
                                                  players, 100000, 17, false);
      REQUIRE(est.tvd >= prev - 0.01);
      prev = est.tvd;
    }
    REQUIRE(prev > 0.05);  // by T=3 cycles separate the cases
  }
}
