#include "zrplab/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "zrplab/errors.hpp"
#include "zrplab/stats.hpp"

namespace zrplab {

TargetProfile TargetProfile::flat() {
  TargetProfile p;
  p.xs_ = {0.0, 1.0};
  p.values_ = {0.0, 0.0};
  return p;
}

TargetProfile TargetProfile::from_table(std::vector<double> xs, std::vector<double> values) {
  if (xs.size() != values.size() || xs.size() < 2)
    throw ConfigError("target profile needs at least two (x, value) nodes");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1])) throw ConfigError("target profile nodes must be increasing");
  if (std::abs(values.front()) > 1e-12 || std::abs(xs.front()) > 1e-12)
    throw ConfigError("target profile must start at (0, 0)");
  TargetProfile p;
  p.xs_ = std::move(xs);
  p.values_ = std::move(values);
  return p;
}

TargetProfile TargetProfile::from_height(const HeightField& height) {
  const int n = height.size();
  std::vector<double> xs(static_cast<std::size_t>(n) + 1);
  std::vector<double> vals(static_cast<std::size_t>(n) + 1);
  for (int x = 0; x <= n; ++x) {
    xs[static_cast<std::size_t>(x)] = static_cast<double>(x) / n;
    vals[static_cast<std::size_t>(x)] = height.value(x);
  }
  // Anchor exactly at zero; a height with flux0 = 0 already starts at 0.
  vals[0] = 0.0;
  return from_table(std::move(xs), std::move(vals));
}

TargetProfile TargetProfile::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open target profile: " + path);
  std::vector<double> xs, vals;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.find_first_of("0123456789-+.") != 0) continue;  // header line
    std::istringstream row(line);
    double x, v;
    char comma;
    if (row >> x >> comma >> v) {
      xs.push_back(x);
      vals.push_back(v);
    }
  }
  return from_table(std::move(xs), std::move(vals));
}

double TargetProfile::operator()(double x) const {
  if (x <= xs_.front()) return values_.front();
  if (x >= xs_.back()) return values_.back();
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - xs_.begin());
  const double frac = (x - xs_[j - 1]) / (xs_[j] - xs_[j - 1]);
  return values_[j - 1] * (1.0 - frac) + values_[j] * frac;
}

double tube_distance(const HeightField& height, const TargetProfile& target) {
  const int n = height.size();
  double worst = 0.0;
  for (int x = 0; x <= n; ++x)
    worst = std::max(worst, std::abs(height.value(x) - target(static_cast<double>(x) / n)));
  return worst;
}

EnvelopeResult envelope_sample(const EnvelopeSpec& spec, const ProductMeasure& measure,
                               const RateFunction& rate, RngStream& rng) {
  if (!(spec.epsilon > 0.0)) throw ConfigError("envelope epsilon must be > 0");
  for (long long attempt = 1; attempt <= spec.max_attempts; ++attempt) {
    Configuration config = sample_configuration(measure, spec.lattice_size, rng, rate);
    HeightField height(config, spec.rho, 0);
    if (tube_distance(height, spec.target) <= spec.epsilon) {
      EnvelopeResult res{std::move(config), attempt, 0.0, 0.0, 0.0};
      res.accept_rate = 1.0 / static_cast<double>(attempt);
      const auto ci = stats::wilson_interval(1, attempt, 1.959963984540054);
      res.ci_low = ci.low;
      res.ci_high = ci.high;
      return res;
    }
  }
  throw MaxAttemptsExceeded(spec.max_attempts);
}

EntropyEstimate relative_entropy_estimate(const EnvelopeSpec& spec,
                                          const ProductMeasure& measure,
                                          const RateFunction& rate, long long samples,
                                          RngStream& rng) {
  if (samples < 1000) throw ConfigError("relative_entropy_estimate needs >= 1000 samples");
  long long accepted = 0;
  for (long long i = 0; i < samples; ++i) {
    Configuration config = sample_configuration(measure, spec.lattice_size, rng, rate);
    HeightField height(config, spec.rho, 0);
    if (tube_distance(height, spec.target) <= spec.epsilon) ++accepted;
  }
  EntropyEstimate est;
  est.accepted = accepted;
  est.samples = samples;
  const auto ci = stats::wilson_interval(accepted, samples, 1.959963984540054);
  if (accepted == 0) {
    est.one_sided = true;
    est.p_hat = 0.0;
    est.H_hat = std::numeric_limits<double>::infinity();
    est.ci_low = -std::log(ci.high);  // one-sided: H is at least this
    est.ci_high = std::numeric_limits<double>::infinity();
    return est;
  }
  est.p_hat = static_cast<double>(accepted) / static_cast<double>(samples);
  est.H_hat = -std::log(est.p_hat);
  est.ci_low = -std::log(ci.high);
  est.ci_high = -std::log(ci.low);
  return est;
}

namespace {

/// Non-exit probability of a Brownian bridge from y0 to y1 (increment
/// variance s) for the two-sided barrier (a, b); Anderson's image series.
double bridge_noexit(double y0, double y1, double a, double b, double s) {
  if (y0 <= a || y0 >= b || y1 <= a || y1 >= b) return 0.0;
  const double L = b - a;
  double q = 0.0;
  for (int k = -3; k <= 3; ++k) {
    const double kl = k * L;
    q += std::exp(-2.0 * kl * (kl + (y1 - y0)) / s);
    q -= std::exp(-2.0 * (kl + (y0 - a)) * (kl + (y1 - a)) / s);
  }
  return std::clamp(q, 0.0, 1.0);
}

}  // namespace

double small_ball_series(double epsilon, double D) {
  const double e = epsilon / std::sqrt(D);
  const double pi = 3.14159265358979323846;
  double s = 0.0;
  for (int n = 0; n < 64; ++n) {
    const double term = ((n % 2 == 0) ? 1.0 : -1.0) / (2 * n + 1) *
                        std::exp(-(2 * n + 1) * (2 * n + 1) * pi * pi / (8.0 * e * e));
    s += term;
    if (std::abs(term) < 1e-18) break;
  }
  return 4.0 / pi * s;
}

double brownian_small_ball(const TargetProfile& f, double epsilon, double D, long long samples,
                           RngStream& rng, int grid) {
  if (!(epsilon > 0.0) || !(D > 0.0)) throw ConfigError("small ball needs eps > 0, D > 0");
  if (std::abs(f(0.0)) > 1e-12) throw ConfigError("small-ball profile must vanish at 0");

  // Uniform grid refining the profile nodes: between nodes f is linear, and a
  // bridge minus a linear function is a bridge with shifted endpoints, so the
  // per-cell barrier is exactly constant and the weighting below is unbiased.
  int m = grid;
  const int nodes = static_cast<int>(f.nodes().size()) - 1;
  if (nodes > 0 && m % nodes != 0) m = ((m / nodes) + 1) * nodes;
  const double dt = 1.0 / m;
  const double step_sd = std::sqrt(D * dt);

  std::vector<double> fx(static_cast<std::size_t>(m) + 1);
  for (int i = 0; i <= m; ++i) fx[static_cast<std::size_t>(i)] = f(static_cast<double>(i) / m);

  double acc = 0.0;
  for (long long s = 0; s < samples; ++s) {
    double w = 1.0;
    double y_prev = 0.0;  // B - f at grid points
    double b_prev = 0.0;
    for (int i = 1; i <= m && w > 0.0; ++i) {
      const double b = b_prev + step_sd * rng.normal();
      const double y = b - fx[static_cast<std::size_t>(i)];
      if (std::abs(y) >= epsilon) {
        w = 0.0;
      } else {
        w *= bridge_noexit(y_prev, y, -epsilon, epsilon, D * dt);
      }
      y_prev = y;
      b_prev = b;
    }
    acc += w;
  }
  return acc / static_cast<double>(samples);
}

}  // namespace zrplab
