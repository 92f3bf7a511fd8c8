#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace zrplab::stats {

double normal_cdf(double x);

/// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);

/// Chi-square survival function (p-value for statistic x with dof degrees).
double chi_square_sf(double x, int dof);

/// Kolmogorov distribution tail Q(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_sf(double lambda);

/// KS distance of a sample (modified in place by sorting) against the
/// standard normal CDF.
double ks_statistic_normal(std::vector<double>& sample);

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

/// Wilson score interval for a binomial proportion.
Interval wilson_interval(long long successes, long long trials, double z);

/// Total variation distance between empirical counts and a reference pmf
/// (counts beyond the pmf range are lumped into the last bin).
double total_variation(std::span<const long long> counts, std::span<const double> pmf);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Goodness-of-fit chi-square with tail pooling so every expected count is at
/// least min_expected.
ChiSquareResult chi_square_gof(std::span<const long long> counts, std::span<const double> probs,
                               double min_expected = 5.0);

/// Two-sample chi-square for two count vectors over the same bins, pooling
/// tails until pooled expectations reach min_expected.
ChiSquareResult chi_square_two_sample(std::span<const long long> a, std::span<const long long> b,
                                      double min_expected = 5.0);

struct Moments {
  long long n = 0;
  double mean = 0.0;
  double var = 0.0;
  double skew = 0.0;
};

Moments moments(std::span<const double> sample);

}  // namespace zrplab::stats
