#include "zrplab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zrplab/csv.hpp"
#include "zrplab/errors.hpp"

namespace zrplab {

namespace {

// The struct invariant only needs tail_mass < 1e-12, but second moments pick
// up a K^2 factor from the tail, so the adaptive truncation aims much lower.
constexpr double kTailTarget = 1e-16;
constexpr double kTailInvariant = 1e-12;
constexpr int kHardKCap = 200000;

/// Log-weights log w_k = k log(alpha) - sum_{j<=k} log g(j), computed until
/// the geometric tail bound drops below the threshold (adaptive K) or the
/// requested K is reached.
std::vector<double> log_weights(const RateFunction& rate, double alpha, int requested_K,
                                double* tail_bound_out) {
  std::vector<double> logw;
  logw.push_back(0.0);  // k = 0, empty product
  if (alpha == 0.0) {
    *tail_bound_out = 0.0;
    return logw;
  }
  const double log_alpha = std::log(alpha);
  const double limit = rate.limit_rate();
  if (std::isfinite(limit) && alpha >= limit) throw DivergentPartitionFunction(alpha);

  const int hard_cap = std::min(requested_K >= 0 ? requested_K : kHardKCap,
                                std::min(rate.max_tabulated(), kHardKCap));
  double cum_log_g = 0.0;
  double tail_bound = std::numeric_limits<double>::infinity();
  int k = 0;
  while (k < hard_cap) {
    ++k;
    cum_log_g += std::log(rate(k));
    logw.push_back(k * log_alpha - cum_log_g);
    // Ratio w_{k+1}/w_k = alpha/g(k+1) is non-increasing (g monotone), so once
    // it is < 1 the remaining tail is dominated by a geometric series.
    if (requested_K >= 0 && k < requested_K) continue;
    const double next_g = k + 1 <= rate.max_tabulated() ? rate(k + 1) : limit;
    const double r = next_g > 0.0 ? alpha / next_g : std::numeric_limits<double>::infinity();
    if (r < 1.0) tail_bound = std::exp(logw.back()) * r / (1.0 - r);
    if (requested_K >= 0) break;  // honor the requested truncation
    if (r < 1.0 && tail_bound < kTailTarget) break;
  }
  *tail_bound_out = tail_bound;
  return logw;
}

}  // namespace

int ProductMeasure::sample_occupancy(RngStream& rng) const {
  const double u = rng.uniform();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return static_cast<int>(std::min<std::ptrdiff_t>(it - cdf.begin(), K));
}

ProductMeasure build_measure(const RateFunction& rate, double alpha, int requested_K) {
  if (!(alpha >= 0.0)) throw ConfigError("fugacity must be >= 0");

  double tail_bound = 0.0;
  std::vector<double> logw = log_weights(rate, alpha, requested_K, &tail_bound);

  // Normalize in log space.
  double max_logw = -std::numeric_limits<double>::infinity();
  for (double lw : logw) max_logw = std::max(max_logw, lw);
  double sum_scaled = 0.0;
  for (double lw : logw) sum_scaled += std::exp(lw - max_logw);

  ProductMeasure m;
  m.alpha = alpha;
  m.K = static_cast<int>(logw.size()) - 1;
  m.log_Z = max_logw + std::log(sum_scaled);
  m.Z = std::exp(m.log_Z);
  m.pmf.resize(logw.size());
  for (std::size_t k = 0; k < logw.size(); ++k) m.pmf[k] = std::exp(logw[k] - m.log_Z);
  m.tail_mass = alpha == 0.0 ? 0.0 : tail_bound / m.Z;
  if (!(m.tail_mass < kTailInvariant))
    throw TruncationTooSmall("tail mass bound " + format_double(m.tail_mass) +
                             " above threshold at K = " + std::to_string(m.K));

  double mean = 0.0;
  for (int k = 0; k <= m.K; ++k) mean += m.pmf[static_cast<std::size_t>(k)] * k;
  double var = 0.0;
  for (int k = 0; k <= m.K; ++k) {
    const double d = k - mean;
    var += m.pmf[static_cast<std::size_t>(k)] * d * d;
  }
  m.mean_rho = mean;
  m.chi = var;
  m.D = var;

  double c = 0.0;
  for (int k = 1; k <= m.K; ++k) c += m.pmf[static_cast<std::size_t>(k)] * rate(k);
  m.c = c;

  if (m.mean_rho > 0.0 && m.chi > 0.0) {
    m.c_prime = m.alpha / m.chi;
  } else {
    m.c_prime_fd_only = true;
    m.c_prime = rate(1);  // limiting slope d alpha / d rho at rho = 0
  }
  m.c_second = std::numeric_limits<double>::quiet_NaN();

  m.cdf.resize(m.pmf.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < m.pmf.size(); ++k) {
    acc += m.pmf[k];
    m.cdf[k] = acc;
  }
  m.cdf.back() = 1.0;
  return m;
}

ProductMeasure solve_fugacity(const RateFunction& rate, double rho, double tol) {
  if (!(rho >= 0.0)) throw ConfigError("density must be >= 0");
  if (!(tol > 0.0)) throw ConfigError("tolerance must be > 0");
  if (rho == 0.0) {
    ProductMeasure m = build_measure(rate, 0.0);
    m.c_second = 0.0;
    return m;
  }

  const double limit = rate.limit_rate();
  // Bracket [lo, hi] with mean(lo) < rho <= mean(hi); the mean is strictly
  // increasing in alpha.
  double lo = 0.0;
  double hi = std::isfinite(limit) ? limit * 0.5 : std::max(1.0, rho);
  auto mean_at = [&](double a) { return build_measure(rate, a).mean_rho; };

  int guard = 0;
  while (mean_at(hi) < rho) {
    if (std::isfinite(limit)) {
      hi = 0.5 * (hi + limit);
      if (limit - hi < 1e-14 * limit) {
        // Mean stays below rho arbitrarily close to the radius: the paper's
        // discard convention.
        if (mean_at(limit * (1.0 - 1e-12)) < rho) throw DensityUnreachable(rho);
        break;
      }
    } else {
      hi *= 2.0;
    }
    if (++guard > 200) throw NoConvergence("bracketing the fugacity failed");
  }

  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mean_at(mid) < rho)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-15 * std::max(1.0, hi)) break;
  }

  // Newton polish using d rho / d alpha = chi / alpha.
  double a = 0.5 * (lo + hi);
  ProductMeasure m = build_measure(rate, a);
  for (int iter = 0; iter < 60 && std::abs(m.mean_rho - rho) > tol; ++iter) {
    const double slope = m.chi / m.alpha;
    double next = m.alpha - (m.mean_rho - rho) / slope;
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    m = build_measure(rate, next);
    if (m.mean_rho < rho)
      lo = next;
    else
      hi = next;
  }
  if (std::abs(m.mean_rho - rho) > tol)
    throw NoConvergence("fugacity iteration did not reach tolerance");

  TransportConstants tc = transport_constants(m, rate);
  m.c_prime = tc.c_prime;
  m.c_second = tc.c_second;
  m.c_prime_fd_only = tc.fd_only;
  return m;
}

TransportConstants transport_constants(const ProductMeasure& measure, const RateFunction& rate,
                                       double h) {
  if (!(h > 0.0)) throw ConfigError("finite-difference step must be > 0");
  TransportConstants out;
  out.c = measure.c;

  const double rho = measure.mean_rho;

  // alpha(rho) by plain bisection; used for the finite-difference route only.
  auto alpha_of = [&](double r) -> double {
    if (r <= 0.0) return 0.0;
    const double limit = rate.limit_rate();
    double lo = 0.0, hi = std::isfinite(limit) ? limit * (1.0 - 1e-12) : std::max(1.0, r);
    if (!std::isfinite(limit)) {
      while (build_measure(rate, hi).mean_rho < r) hi *= 2.0;
    }
    for (int iter = 0; iter < 200; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (build_measure(rate, mid).mean_rho < r)
        lo = mid;
      else
        hi = mid;
      if (hi - lo < 1e-15 * std::max(1.0, hi)) break;
    }
    return 0.5 * (lo + hi);
  };

  if (rho <= 0.0 || measure.chi <= 0.0) {
    out.fd_only = true;
    const double step = h;
    out.c_prime = alpha_of(rho + step) / step;  // one-sided at the boundary
    out.c_second = (alpha_of(rho + 2 * step) - 2 * alpha_of(rho + step)) / (step * step);
    return out;
  }

  const double identity = measure.alpha / measure.chi;

  auto central = [&](double step) {
    return (alpha_of(rho + step) - alpha_of(rho - step)) / (2.0 * step);
  };
  const double d_h = central(h);
  const double d_h2 = central(0.5 * h);
  const double richardson = (4.0 * d_h2 - d_h) / 3.0;

  if (std::abs(identity - richardson) > 10.0 * h * h)
    throw NoConvergence("identity-based and finite-difference c' disagree beyond 10 h^2");

  out.c_prime = identity;
  const double a_p = alpha_of(rho + h);
  const double a_m = alpha_of(rho - h);
  out.c_second = (a_p - 2.0 * measure.alpha + a_m) / (h * h);
  return out;
}

Configuration sample_configuration(const ProductMeasure& measure, int N, RngStream& rng,
                                   const RateFunction& rate) {
  std::vector<int> eta(static_cast<std::size_t>(N));
  for (int x = 0; x < N; ++x) eta[static_cast<std::size_t>(x)] = measure.sample_occupancy(rng);
  return Configuration(std::move(eta), rate);
}

bool moment_condition_check(const ProductMeasure& measure, double delta) {
  if (!(delta > 0.0)) throw ConfigError("delta must be > 0");
  // Ratio test on t_k = pmf(k) k^{2+delta}: summable with decreasing tail iff
  // the tail ratios stay bounded away from 1.
  const double p = 2.0 + delta;
  const int K = measure.K;
  if (K < 8) return true;  // finitely supported
  // Probe only the far tail; at small k the k^{2+delta} growth can dominate
  // before the decay of the pmf sets in.
  const int probe_from = std::max(K / 2, K - 32);
  double worst = 0.0;
  for (int k = probe_from; k < K; ++k) {
    const double tk = measure.pmf[static_cast<std::size_t>(k)] * std::pow(k, p);
    const double tk1 = measure.pmf[static_cast<std::size_t>(k + 1)] * std::pow(k + 1, p);
    if (tk <= 0.0) continue;
    worst = std::max(worst, tk1 / tk);
  }
  return worst < 0.999;
}

void write_measure_csv(const std::string& path, const ProductMeasure& measure) {
  CsvWriter out(path);
  out.comment("alpha=" + format_double(measure.alpha) + " Z=" + format_double(measure.Z) +
              " rho=" + format_double(measure.mean_rho) + " chi=" + format_double(measure.chi) +
              " c=" + format_double(measure.c) + " c_prime=" + format_double(measure.c_prime) +
              " c_second=" + format_double(measure.c_second));
  out.header({"k", "pmf"});
  for (int k = 0; k <= measure.K; ++k) {
    out.field(static_cast<long long>(k));
    out.field(measure.pmf[static_cast<std::size_t>(k)]);
    out.end_row();
  }
}

}  // namespace zrplab
