#include <doctest.h>

#include <cmath>

#include "zrplab/errors.hpp"
#include "zrplab/height.hpp"
#include "zrplab/measure.hpp"
#include "zrplab/simulator.hpp"

using namespace zrplab;

TEST_SUITE("height") {

TEST_CASE("flat configuration has zero height") {
  const RateFunction g1 = RateFunction::constant_rate();
  Configuration c(std::vector<int>(6, 1), g1);
  const HeightField h(c, 1.0);
  for (int x = 0; x <= 6; ++x) CHECK(h.value(x) == 0.0);
}

TEST_CASE("hand prefix sum at N = 4") {
  const RateFunction g1 = RateFunction::constant_rate();
  Configuration c({2, 0, 1, 1}, g1);
  const HeightField h(c, 1.0);
  const double s = std::sqrt(4.0);
  const double expected[5] = {0.0, 1.0, 0.0, 0.0, 0.0};
  for (int x = 0; x <= 4; ++x) CHECK(h.value(x) * s == doctest::Approx(expected[x]));
}

TEST_CASE("flux term shifts every cut") {
  const RateFunction g1 = RateFunction::constant_rate();
  Configuration c({2, 0, 1, 1}, g1);
  const HeightField base(c, 1.0, 0);
  const HeightField shifted(c, 1.0, 3);
  for (int x = 0; x <= 4; ++x)
    CHECK(shifted.value(x) - base.value(x) == doctest::Approx(1.5));  // 3 / sqrt(4)
}

TEST_CASE("telescoping and winding identities") {
  const RateFunction g1 = RateFunction::constant_rate();
  const ProductMeasure nu = solve_fugacity(g1, 1.0);
  RngStream rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 16;
    Configuration c = sample_configuration(nu, n, rng, g1);
    const HeightField h(c, 1.0);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int x = 0; x < n; ++x)
      CHECK(h.value(x + 1) - h.value(x) ==
            doctest::Approx(scale * (c.occupancy(x) - 1.0)).epsilon(1e-12));
    CHECK(h.value(n) - h.value(0) ==
          doctest::Approx(scale * (static_cast<double>(c.total()) - n)).epsilon(1e-12));
  }
}

TEST_CASE("boundary crossings move the flux counter with the stated signs") {
  const RateFunction g1 = RateFunction::constant_rate();
  Configuration c({1, 0, 0, 1}, g1);
  HeightField h(c, 0.5);

  // leftward boundary move 0 -> N-1 contributes +1
  JumpEvent left{0.1, 0, 3, +1};
  h.apply_event(left);
  CHECK(h.flux0() == 1);

  // rightward boundary move N-1 -> 0 contributes -1
  JumpEvent right{0.2, 3, 0, -1};
  h.apply_event(right);
  CHECK(h.flux0() == 0);
}

TEST_CASE("interior jump changes exactly one cut by one lattice unit") {
  const RateFunction g1 = RateFunction::constant_rate();
  Configuration c({1, 2, 0, 1, 1, 0}, g1);
  HeightField h(c, 0.8);
  const HeightField before = h;
  JumpEvent ev{0.3, 1, 2, 0};  // rightward interior
  h.apply_event(ev);
  int changed = 0;
  for (int x = 0; x <= 6; ++x) {
    if (h.raw(x) != before.raw(x)) {
      ++changed;
      CHECK(x == 2);
      CHECK(h.raw(x) == before.raw(x) - 1);
    }
  }
  CHECK(changed == 1);
}

TEST_CASE("incremental heights equal from-scratch recomputation exactly") {
  const RateFunction g1 = RateFunction::constant_rate();
  const ProductMeasure nu = solve_fugacity(g1, 1.0);
  ModelParams params;
  params.lattice_size = 8;  // small torus: many boundary crossings
  params.gamma = 1.0;
  params.beta = 0.5;
  params.density = 1.0;
  params.rate = g1;

  RngStream rng(55);
  Configuration c = sample_configuration(nu, params.lattice_size, rng, g1);
  HeightTracker tracker(c, params.density);

  class FluxCount : public Observer {
  public:
    void on_event(const JumpEvent& ev, const Configuration&) override { flux += ev.flux_delta; }
    long long flux = 0;
  };
  FluxCount flux;
  Observer* obs[2] = {&tracker, &flux};
  run_until(c, params, 0.4, rng, obs);

  const HeightField fresh(c, params.density, flux.flux);
  for (int x = 0; x <= params.lattice_size; ++x)
    CHECK(tracker.height().raw(x) == fresh.raw(x));  // exact integers
  CHECK(tracker.height().flux0() == flux.flux);
}

TEST_CASE("inconsistent events are rejected") {
  const RateFunction g1 = RateFunction::constant_rate();
  Configuration c({1, 1, 1, 1}, g1);
  HeightField h(c, 1.0);
  JumpEvent bad{0.0, 0, 2, 0};
  CHECK_THROWS_AS(h.apply_event(bad), InconsistentEvent);
  JumpEvent bad_flux{0.0, 3, 0, 0};  // boundary right jump must carry -1
  CHECK_THROWS_AS(h.apply_event(bad_flux), InconsistentEvent);
}

}  // TEST_SUITE
