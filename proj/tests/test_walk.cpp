#include <doctest.h>

#include <cmath>

#include "zrplab/errors.hpp"
#include "zrplab/measure.hpp"
#include "zrplab/stats.hpp"
#include "zrplab/walk.hpp"

using namespace zrplab;

TEST_SUITE("walk") {

TEST_CASE("empty configuration maps to the constant path") {
  const RateFunction g1 = RateFunction::constant_rate();
  Configuration c(std::vector<int>(8, 0), g1);
  const WalkPath w = walk_from_config(c);
  REQUIRE(w.s.size() == 9);
  for (double v : w.s) CHECK(v == 0.0);
}

TEST_CASE("roundtrip is exact on product-measure samples") {
  const RateFunction g1 = RateFunction::constant_rate();
  const ProductMeasure nu = solve_fugacity(g1, 1.3);
  RngStream rng(81);
  for (int trial = 0; trial < 100; ++trial) {
    Configuration c = sample_configuration(nu, 32, rng, g1);
    const Configuration back = config_from_walk(walk_from_config(c), g1);
    CHECK(back.occupancies() == c.occupancies());
  }
}

TEST_CASE("walk increments carry the marginal law") {
  const RateFunction g1 = RateFunction::constant_rate();
  const ProductMeasure nu = solve_fugacity(g1, 1.0);
  RngStream rng(82);
  const int n = 100000;
  Configuration c = sample_configuration(nu, n, rng, g1);
  const WalkPath w = walk_from_config(c);
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  std::vector<long long> counts(static_cast<std::size_t>(nu.K) + 1, 0);
  for (int x = 0; x < n; ++x) {
    const double inc = (w.s[static_cast<std::size_t>(x) + 1] - w.s[static_cast<std::size_t>(x)]) *
                       sqrt_n;
    const auto k = static_cast<std::size_t>(std::llround(inc));
    ++counts[std::min(k, counts.size() - 1)];
  }
  const auto gof = stats::chi_square_gof(counts, nu.pmf);
  CHECK(gof.p_value > 1e-4);
}

TEST_CASE("non-lattice increments are rejected with the offending index") {
  WalkPath w;
  w.s = {0.0, 1.0 / std::sqrt(4.0), 1.7 / std::sqrt(4.0), 1.7 / std::sqrt(4.0), 1.7 / std::sqrt(4.0)};
  try {
    config_from_walk(w, RateFunction::constant_rate());
    FAIL("expected NonLatticeIncrement");
  } catch (const NonLatticeIncrement& e) {
    CHECK(e.index == 1);
  }

  WalkPath neg;
  neg.s = {0.0, -0.5, 0.0, 0.0, 0.0};
  CHECK_THROWS_AS(config_from_walk(neg, RateFunction::constant_rate()), NonLatticeIncrement);
}

}  // TEST_SUITE
