#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zrplab/configuration.hpp"
#include "zrplab/height.hpp"
#include "zrplab/measure.hpp"
#include "zrplab/rng.hpp"

namespace zrplab {

/// Continuous profile on [0,1], tabulated at sorted nodes with linear
/// interpolation (clamped at the ends). Targets must vanish at 0.
class TargetProfile {
public:
  static TargetProfile flat();
  static TargetProfile from_table(std::vector<double> xs, std::vector<double> values);
  static TargetProfile from_height(const HeightField& height);
  static TargetProfile load_csv(const std::string& path);

  double operator()(double x) const;
  const std::vector<double>& nodes() const { return xs_; }
  const std::vector<double>& values() const { return values_; }

private:
  std::vector<double> xs_;
  std::vector<double> values_;
};

struct EnvelopeSpec {
  TargetProfile target = TargetProfile::flat();
  double epsilon = 1.0;     // tube half-width in fluctuation units
  double rho = 0.0;         // centering density
  int lattice_size = 2;     // N
  long long max_attempts = 1000000;
};

struct EnvelopeResult {
  Configuration config;
  long long attempts = 0;
  double accept_rate = 0.0;
  double ci_low = 0.0;   // Wilson 95% interval on the acceptance probability
  double ci_high = 0.0;
};

/// sup over lattice cuts x = 0..N of |H_x - target(x/N)|.
double tube_distance(const HeightField& height, const TargetProfile& target);

/// Exact conditional sampler for the epsilon-envelope: product-measure
/// configurations are drawn until the centered height (flux0 = 0) lies in the
/// sup-norm tube around the target. Throws MaxAttemptsExceeded when the
/// budget runs out (acceptance too small, not a correctness failure).
EnvelopeResult envelope_sample(const EnvelopeSpec& spec, const ProductMeasure& measure,
                               const RateFunction& rate, RngStream& rng);

struct EntropyEstimate {
  double p_hat = 0.0;
  long long accepted = 0;
  long long samples = 0;
  double H_hat = 0.0;     // -log p_hat
  double ci_low = 0.0;    // CI on H propagated from the binomial CI on p
  double ci_high = 0.0;
  bool one_sided = false; // no acceptances: only a lower bound on H
};

/// Monte Carlo estimate of the relative entropy -log P(tube event) with a
/// binomial confidence interval.
EntropyEstimate relative_entropy_estimate(const EnvelopeSpec& spec, const ProductMeasure& measure,
                                          const RateFunction& rate, long long samples,
                                          RngStream& rng);

/// P(sup_{[0,1]} |f - B| < eps) for a Brownian motion with Var(B_t) = D t.
/// Paths are sampled on a uniform grid refining the profile's nodes and each
/// cell is weighted by the exact two-sided bridge non-exit probability, so the
/// estimator is unbiased for the continuum event (no grid bias). For f = 0 it
/// can be checked against the alternating reflection series.
double brownian_small_ball(const TargetProfile& f, double epsilon, double D, long long samples,
                           RngStream& rng, int grid = 256);

/// Alternating reflection series for P(sup_{[0,1]} |B| < eps), Var(B_t) = D t.
double small_ball_series(double epsilon, double D);

}  // namespace zrplab
