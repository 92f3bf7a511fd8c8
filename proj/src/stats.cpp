#include "zrplab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zrplab/errors.hpp"

namespace zrplab::stats {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / 1.4142135623730950488); }

namespace {

// Lower incomplete gamma by series, upper by continued fraction
// (Lentz); the usual split at x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw Error("regularized_gamma_p domain error");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double chi_square_sf(double x, int dof) {
  if (dof <= 0) return 1.0;
  if (x <= 0.0) return 1.0;
  if (x < dof + 1.0) return 1.0 - gamma_p_series(0.5 * dof, 0.5 * x);
  return gamma_q_cf(0.5 * dof, 0.5 * x);
}

double kolmogorov_sf(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double s = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = ((j % 2 == 1) ? 2.0 : -2.0) * std::exp(-2.0 * j * j * lambda * lambda);
    s += term;
    if (std::abs(term) < 1e-16) break;
  }
  return std::clamp(s, 0.0, 1.0);
}

double ks_statistic_normal(std::vector<double>& sample) {
  std::sort(sample.begin(), sample.end());
  const auto n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = normal_cdf(sample[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

Interval wilson_interval(long long successes, long long trials, double z) {
  if (trials <= 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double total_variation(std::span<const long long> counts, std::span<const double> pmf) {
  long long n = 0;
  for (long long c : counts) n += c;
  if (n == 0) return 1.0;
  double tv = 0.0;
  double tail_p = 1.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) tail_p -= pmf[k];

  const std::size_t kmax = std::max(counts.size(), pmf.size());
  for (std::size_t k = 0; k < kmax; ++k) {
    const double emp = k < counts.size() ? static_cast<double>(counts[k]) / n : 0.0;
    const double ref = k < pmf.size() ? pmf[k] : 0.0;
    tv += std::abs(emp - ref);
  }
  tv += std::abs(tail_p);  // reference mass beyond truncation
  return 0.5 * tv;
}

namespace {

/// Pools trailing bins until each pooled expectation reaches min_expected.
std::vector<std::pair<double, double>> pooled(std::span<const long long> counts,
                                              std::span<const double> expected,
                                              double min_expected) {
  std::vector<std::pair<double, double>> bins;  // (observed, expected)
  double obs_acc = 0.0, exp_acc = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    obs_acc += static_cast<double>(counts[k]);
    exp_acc += expected[k];
    if (exp_acc >= min_expected) {
      bins.emplace_back(obs_acc, exp_acc);
      obs_acc = exp_acc = 0.0;
    }
  }
  if (exp_acc > 0.0 || obs_acc > 0.0) {
    if (!bins.empty()) {
      bins.back().first += obs_acc;
      bins.back().second += exp_acc;
    } else {
      bins.emplace_back(obs_acc, exp_acc);
    }
  }
  return bins;
}

}  // namespace

ChiSquareResult chi_square_gof(std::span<const long long> counts, std::span<const double> probs,
                               double min_expected) {
  long long n = 0;
  for (long long c : counts) n += c;
  std::vector<double> expected(counts.size(), 0.0);
  double covered = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const double p = k < probs.size() ? probs[k] : 0.0;
    covered += p;
    expected[k] = p * static_cast<double>(n);
  }
  // Any reference mass beyond the last bin belongs to the final pooled bin.
  if (!expected.empty()) expected.back() += (1.0 - covered) * static_cast<double>(n);

  const auto bins = pooled(counts, expected, min_expected);
  ChiSquareResult res;
  if (bins.size() < 2) return res;
  for (const auto& [obs, exp] : bins)
    if (exp > 0.0) res.statistic += (obs - exp) * (obs - exp) / exp;
  res.dof = static_cast<int>(bins.size()) - 1;
  res.p_value = chi_square_sf(res.statistic, res.dof);
  return res;
}

ChiSquareResult chi_square_two_sample(std::span<const long long> a, std::span<const long long> b,
                                      double min_expected) {
  const std::size_t m = std::max(a.size(), b.size());
  double na = 0.0, nb = 0.0;
  for (long long c : a) na += static_cast<double>(c);
  for (long long c : b) nb += static_cast<double>(c);
  if (na == 0.0 || nb == 0.0) return {};

  // Pool bins (from the right) until both pooled expected counts are adequate.
  std::vector<std::pair<double, double>> bins;
  double accA = 0.0, accB = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    accA += k < a.size() ? static_cast<double>(a[k]) : 0.0;
    accB += k < b.size() ? static_cast<double>(b[k]) : 0.0;
    const double tot = accA + accB;
    if (tot * na / (na + nb) >= min_expected && tot * nb / (na + nb) >= min_expected) {
      bins.emplace_back(accA, accB);
      accA = accB = 0.0;
    }
  }
  if (accA + accB > 0.0) {
    if (!bins.empty()) {
      bins.back().first += accA;
      bins.back().second += accB;
    } else {
      bins.emplace_back(accA, accB);
    }
  }

  ChiSquareResult res;
  if (bins.size() < 2) return res;
  for (const auto& [oa, ob] : bins) {
    const double tot = oa + ob;
    const double ea = tot * na / (na + nb);
    const double eb = tot * nb / (na + nb);
    if (ea > 0.0) res.statistic += (oa - ea) * (oa - ea) / ea;
    if (eb > 0.0) res.statistic += (ob - eb) * (ob - eb) / eb;
  }
  res.dof = static_cast<int>(bins.size()) - 1;
  res.p_value = chi_square_sf(res.statistic, res.dof);
  return res;
}

Moments moments(std::span<const double> sample) {
  Moments m;
  m.n = static_cast<long long>(sample.size());
  if (m.n == 0) return m;
  double mean = 0.0;
  for (double v : sample) mean += v;
  mean /= static_cast<double>(m.n);
  double m2 = 0.0, m3 = 0.0;
  for (double v : sample) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= static_cast<double>(m.n);
  m3 /= static_cast<double>(m.n);
  m.mean = mean;
  m.var = m2;
  m.skew = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  return m;
}

}  // namespace zrplab::stats
