#include <doctest.h>

#include <cmath>
#include <numeric>

#include "zrplab/errors.hpp"
#include "zrplab/measure.hpp"
#include "zrplab/stats.hpp"

using namespace zrplab;

TEST_SUITE("measure") {

TEST_CASE("geometric marginal at alpha = 1/2") {
  const RateFunction g1 = RateFunction::constant_rate();
  const ProductMeasure m = build_measure(g1, 0.5);
  CHECK(m.Z == doctest::Approx(2.0).epsilon(1e-12));
  for (int k = 0; k <= 6; ++k)
    CHECK(m.pmf[static_cast<std::size_t>(k)] ==
          doctest::Approx(0.5 * std::pow(0.5, k)).epsilon(1e-12));
  CHECK(m.mean_rho == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(m.chi == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(m.c == doctest::Approx(m.alpha).epsilon(1e-10));
  CHECK(m.tail_mass < 1e-12);
}

TEST_CASE("poisson marginal at alpha = 1") {
  const RateFunction lin = RateFunction::linear();
  const ProductMeasure m = build_measure(lin, 1.0);
  const double e = std::exp(1.0);
  CHECK(m.pmf[0] == doctest::Approx(1.0 / e).epsilon(1e-12));
  CHECK(m.pmf[3] == doctest::Approx(1.0 / (6.0 * e)).epsilon(1e-12));
  CHECK(m.mean_rho == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(m.chi == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("alpha = 0 is the point mass at zero") {
  const ProductMeasure m = build_measure(RateFunction::constant_rate(), 0.0);
  CHECK(m.K == 0);
  CHECK(m.pmf[0] == 1.0);
  CHECK(m.mean_rho == 0.0);
}

TEST_CASE("property: normalization, monotone mean, c = alpha") {
  const RateFunction rates[3] = {RateFunction::constant_rate(), RateFunction::linear(),
                                 RateFunction::capped(3.0)};
  for (const auto& rate : rates) {
    double prev_mean = -1.0;
    for (double alpha : {0.05, 0.2, 0.4, 0.6, 0.8, 0.95}) {
      if (std::isfinite(rate.limit_rate()) && alpha >= rate.limit_rate()) break;
      const ProductMeasure m = build_measure(rate, alpha);
      const double total = std::accumulate(m.pmf.begin(), m.pmf.end(), 0.0);
      CHECK(std::abs(total - 1.0) < 1e-12);
      CHECK(m.mean_rho > prev_mean);
      prev_mean = m.mean_rho;
      CHECK(std::abs(m.c - alpha) < 1e-10);
    }
  }
}

TEST_CASE("fugacity closed forms") {
  const RateFunction g1 = RateFunction::constant_rate();
  for (double rho : {0.5, 1.0, 2.0}) {
    const ProductMeasure m = solve_fugacity(g1, rho);
    CHECK(std::abs(m.alpha - rho / (1.0 + rho)) < 1e-10);
  }
  const RateFunction lin = RateFunction::linear();
  for (double rho : {0.5, 1.0, 2.0}) {
    const ProductMeasure m = solve_fugacity(lin, rho);
    CHECK(std::abs(m.alpha - rho) < 1e-10);
  }
  CHECK(solve_fugacity(g1, 0.0).alpha == 0.0);
}

TEST_CASE("transport constants: geometric rho = 1") {
  const RateFunction g1 = RateFunction::constant_rate();
  const ProductMeasure m = solve_fugacity(g1, 1.0);
  CHECK(m.c == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(m.c_prime == doctest::Approx(0.25).epsilon(1e-9));
  // alpha(rho) = rho/(1+rho): alpha'' = -2/(1+rho)^3 = -1/4 at rho = 1
  CHECK(m.c_second == doctest::Approx(-0.25).epsilon(1e-3));

  for (double h : {1e-3, 1e-4}) {
    const TransportConstants tc = transport_constants(m, g1, h);
    CHECK(std::abs(tc.c_prime - 0.25) < 10.0 * h * h + 1e-12);
  }
}

TEST_CASE("transport constants: poisson family is linear in rho") {
  const RateFunction lin = RateFunction::linear();
  for (double rho : {0.5, 2.0}) {
    const ProductMeasure m = solve_fugacity(lin, rho);
    CHECK(m.c == doctest::Approx(rho).epsilon(1e-9));
    CHECK(m.c_prime == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(m.c_second) < 1e-4);
  }
}

TEST_CASE("degenerate density rho = 0 reports fd-only slope g(1)") {
  const RateFunction g1 = RateFunction::constant_rate();
  const ProductMeasure m = solve_fugacity(g1, 0.0);
  CHECK(m.c_prime_fd_only);
  const TransportConstants tc = transport_constants(m, g1, 1e-4);
  CHECK(tc.fd_only);
  CHECK(tc.c_prime == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("round trip: mean back to fugacity") {
  const RateFunction cap = RateFunction::capped(2.0);
  for (double alpha : {0.3, 0.9, 1.5}) {
    const ProductMeasure m = build_measure(cap, alpha);
    const ProductMeasure back = solve_fugacity(cap, m.mean_rho);
    CHECK(std::abs(back.alpha - alpha) < 1e-9);
  }
}

TEST_CASE("sampling matches the marginal moments") {
  const RateFunction g1 = RateFunction::constant_rate();
  const ProductMeasure m = solve_fugacity(g1, 1.0);
  RngStream rng(99);

  Configuration zeros = sample_configuration(build_measure(g1, 0.0), 50, rng, g1);
  CHECK(zeros.total() == 0);

  const int n = 10000;
  Configuration c = sample_configuration(m, n, rng, g1);
  const double mean = static_cast<double>(c.total()) / n;
  CHECK(std::abs(mean - 1.0) < 3.0 * std::sqrt(2.0 / n));

  double var = 0.0;
  long long big = 0;
  const int reps = 10;
  for (int r = 0; r < reps; ++r) {
    Configuration cc = sample_configuration(m, n, rng, g1);
    for (int x = 0; x < n; ++x) {
      const double d = cc.occupancy(x) - 1.0;
      var += d * d;
      big += cc.occupancy(x) >= 1 ? 1 : 0;
    }
  }
  var /= static_cast<double>(n) * reps;
  CHECK(std::abs(var - 2.0) < 0.05 * 2.0);
  CHECK(std::abs(static_cast<double>(big) / (n * reps) - 0.5) < 0.02);
}

TEST_CASE("moment condition check") {
  CHECK(moment_condition_check(build_measure(RateFunction::linear(), 1.0), 0.5));
  CHECK(moment_condition_check(build_measure(RateFunction::constant_rate(), 0.5), 0.5));

  // forced heavy tail pmf ~ k^-3: sum pmf k^{2.5} diverges
  ProductMeasure heavy;
  heavy.K = 4000;
  heavy.pmf.resize(4001, 0.0);
  double z = 0.0;
  for (int k = 1; k <= 4000; ++k) z += std::pow(k, -3.0);
  for (int k = 1; k <= 4000; ++k) heavy.pmf[static_cast<std::size_t>(k)] = std::pow(k, -3.0) / z;
  CHECK_FALSE(moment_condition_check(heavy, 0.5));
}

TEST_CASE("error paths") {
  CHECK_THROWS_AS(build_measure(RateFunction::constant_rate(), 1.05),
                  DivergentPartitionFunction);
  CHECK_THROWS_AS(build_measure(RateFunction::constant_rate(), 0.9, 3), TruncationTooSmall);
  CHECK_THROWS_AS(build_measure(RateFunction::tabulated({0.0, 1.0, 1.2}), 0.9),
                  TruncationTooSmall);
}

}  // TEST_SUITE
