#include <doctest.h>

#include <cmath>
#include <map>

#include "zrplab/envelope.hpp"
#include "zrplab/errors.hpp"
#include "zrplab/stats.hpp"

using namespace zrplab;

TEST_SUITE("envelope") {

TEST_CASE("huge tube accepts the first sample") {
  const RateFunction g1 = RateFunction::constant_rate();
  const ProductMeasure nu = solve_fugacity(g1, 1.0);
  EnvelopeSpec spec;
  spec.epsilon = 1e9;
  spec.rho = 1.0;
  spec.lattice_size = 32;
  RngStream rng(1);
  const EnvelopeResult res = envelope_sample(spec, nu, g1, rng);
  CHECK(res.attempts == 1);
  CHECK(res.accept_rate == 1.0);
}

TEST_CASE("accepted configurations satisfy the tube constraint exactly") {
  const RateFunction lin = RateFunction::linear();
  const ProductMeasure nu = solve_fugacity(lin, 0.5);
  EnvelopeSpec spec;
  spec.epsilon = 0.8;
  spec.rho = 0.5;
  spec.lattice_size = 24;
  RngStream rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    const EnvelopeResult res = envelope_sample(spec, nu, lin, rng);
    const HeightField h(res.config, spec.rho, 0);
    CHECK(tube_distance(h, spec.target) <= spec.epsilon);
  }
}

TEST_CASE("acceptance counts are exactly nested over the epsilon grid") {
  const RateFunction lin = RateFunction::linear();
  const ProductMeasure nu = solve_fugacity(lin, 0.5);
  long long prev = -1;
  for (double eps : {1.2, 0.9, 0.7, 0.55}) {
    EnvelopeSpec spec;
    spec.epsilon = eps;
    spec.rho = 0.5;
    spec.lattice_size = 32;
    RngStream rng(42);  // same stream: identical configurations, nested events
    const EntropyEstimate est = relative_entropy_estimate(spec, nu, lin, 4000, rng);
    if (prev >= 0) CHECK(est.accepted <= prev);
    prev = est.accepted;
  }
}

TEST_CASE("tiny-N conditional law matches exhaustive enumeration") {
  const RateFunction lin = RateFunction::linear();
  const ProductMeasure nu = solve_fugacity(lin, 0.7);
  const double eps = 0.45;
  const int n = 2;

  // Enumerate all configurations with occupancies <= K and compute the exact
  // conditional law of the tube event around the flat target.
  std::map<std::pair<int, int>, double> law;
  double mass = 0.0;
  const double s = std::sqrt(2.0);
  for (int a = 0; a <= nu.K; ++a) {
    for (int b = 0; b <= nu.K; ++b) {
      const double h1 = (a - 0.7) / s;
      const double h2 = (a + b - 1.4) / s;
      if (std::abs(h1) <= eps && std::abs(h2) <= eps) {
        const double p = nu.pmf[static_cast<std::size_t>(a)] * nu.pmf[static_cast<std::size_t>(b)];
        law[{a, b}] = p;
        mass += p;
      }
    }
  }
  REQUIRE(law.size() >= 2);

  EnvelopeSpec spec;
  spec.epsilon = eps;
  spec.rho = 0.7;
  spec.lattice_size = n;
  RngStream rng(31);
  std::map<std::pair<int, int>, long long> counts;
  const int draws = 20000;
  for (int d = 0; d < draws; ++d) {
    const EnvelopeResult res = envelope_sample(spec, nu, lin, rng);
    ++counts[{res.config.occupancy(0), res.config.occupancy(1)}];
  }

  std::vector<long long> observed;
  std::vector<double> probs;
  for (const auto& [key, p] : law) {
    probs.push_back(p / mass);
    observed.push_back(counts.count(key) ? counts[key] : 0);
  }
  for (const auto& [key, cnt] : counts) CHECK(law.count(key) == 1);  // no leak outside the tube
  const auto gof = stats::chi_square_gof(observed, probs, 5.0);
  CHECK(gof.p_value > 1e-4);
}

TEST_CASE("attempt budget exhaustion reports MaxAttemptsExceeded") {
  const RateFunction g1 = RateFunction::constant_rate();
  const ProductMeasure nu = solve_fugacity(g1, 1.0);
  EnvelopeSpec spec;
  spec.epsilon = 0.01;
  spec.rho = 1.0;
  spec.lattice_size = 64;
  spec.max_attempts = 50;
  RngStream rng(3);
  CHECK_THROWS_AS(envelope_sample(spec, nu, g1, rng), MaxAttemptsExceeded);
}

TEST_CASE("relative entropy: huge tube gives H near zero; tiny tube is one-sided") {
  const RateFunction lin = RateFunction::linear();
  const ProductMeasure nu = solve_fugacity(lin, 0.5);
  EnvelopeSpec spec;
  spec.rho = 0.5;
  spec.lattice_size = 16;

  spec.epsilon = 1e9;
  RngStream rng(8);
  const EntropyEstimate big = relative_entropy_estimate(spec, nu, lin, 2000, rng);
  CHECK(big.p_hat == 1.0);
  CHECK(big.H_hat == 0.0);

  spec.epsilon = 1e-6;
  const EntropyEstimate none = relative_entropy_estimate(spec, nu, lin, 2000, rng);
  CHECK(none.one_sided);
  CHECK(none.accepted == 0);
  CHECK(none.ci_low > 0.0);
}

TEST_CASE("stationary-target acceptance is positive and N-stable at feasible parameters") {
  // Random continuous target drawn once from the product measure itself.
  const RateFunction lin = RateFunction::linear();
  const ProductMeasure nu = solve_fugacity(lin, 0.5);
  RngStream trng(77);
  Configuration base = sample_configuration(nu, 64, trng, lin);
  const TargetProfile target = TargetProfile::from_height(HeightField(base, 0.5));

  std::vector<double> hs;
  for (int n : {32, 64, 128}) {
    EnvelopeSpec spec;
    spec.target = target;
    spec.epsilon = 0.75;
    spec.rho = 0.5;
    spec.lattice_size = n;
    RngStream rng(100 + n);
    const EntropyEstimate est = relative_entropy_estimate(spec, nu, lin, 30000, rng);
    CHECK(est.accepted > 0);
    hs.push_back(est.H_hat);
  }
  const double lo = std::min({hs[0], hs[1], hs[2]});
  const double hi = std::max({hs[0], hs[1], hs[2]});
  CHECK(hi / lo < 2.0);
}

TEST_CASE("small ball: huge tube saturates to one") {
  RngStream rng(4);
  CHECK(brownian_small_ball(TargetProfile::flat(), 4.0, 1.0, 4000, rng, 64) > 0.99);
}

TEST_CASE("small ball against the reflection series") {
  RngStream rng(12345);
  for (double eps : {0.5, 1.0}) {
    const double series = small_ball_series(eps, 1.0);
    const long long samples = 400000;
    const double est = brownian_small_ball(TargetProfile::flat(), eps, 1.0, samples, rng, 64);
    const double sd = std::sqrt(series / samples);  // upper bound on the estimator sd
    CHECK(std::abs(est - series) < 4.0 * sd);
  }
}

TEST_CASE("small ball around a Lipschitz profile is strictly positive") {
  const TargetProfile tri = TargetProfile::from_table({0.0, 0.5, 1.0}, {0.0, 0.15, 0.0});
  RngStream rng(9);
  const double est = brownian_small_ball(tri, 0.25, 0.05, 100000, rng, 128);
  CHECK(est > 1e-4);
}

TEST_CASE("small ball with diffusion coefficient rescales through the series") {
  RngStream rng(77);
  const double est = brownian_small_ball(TargetProfile::flat(), 0.5, 0.25, 200000, rng, 64);
  const double series = small_ball_series(0.5, 0.25);  // = series(1.0, 1.0)
  CHECK(std::abs(est - series) < 4.0 * std::sqrt(series / 200000.0));
}

}  // TEST_SUITE
