#pragma once

#include <vector>

#include "zrplab/configuration.hpp"
#include "zrplab/rates.hpp"
#include "zrplab/rng.hpp"

namespace zrplab {

/// Single-site marginal of the product invariant measure nu_alpha, truncated
/// at occupancy K, together with the derived transport constants.
///
/// Weights are w_k = alpha^k / prod_{j=1..k} g(j) with the empty product
/// equal to 1, so pmf(k) = w_k / Z(alpha). The expected jump rate
/// c = E[g(eta)] collapses to alpha by reindexing the weights, which the
/// constructor checks.
struct ProductMeasure {
  double alpha = 0.0;       // fugacity
  double Z = 1.0;           // partition function at truncation
  double log_Z = 0.0;
  std::vector<double> pmf;  // occupancies 0..K
  int K = 0;
  double mean_rho = 0.0;    // mean occupancy
  double chi = 0.0;         // occupancy variance
  double c = 0.0;           // expected jump rate  (= alpha)
  double c_prime = 0.0;     // dc/drho
  double c_second = 0.0;    // d^2 c / drho^2 (filled by transport_constants)
  double D = 0.0;           // diffusion coefficient of the height walk (= chi)
  double tail_mass = 0.0;   // truncation error bound
  bool c_prime_fd_only = false;  // rho = 0: identity degenerate, finite differences used
  std::vector<double> cdf;  // inverse-CDF sampling table

  int sample_occupancy(RngStream& rng) const;
};

struct TransportConstants {
  double c = 0.0;
  double c_prime = 0.0;
  double c_second = 0.0;
  bool fd_only = false;
};

/// Builds the truncated measure at fugacity alpha. K < 0 selects the
/// truncation adaptively (smallest K with ratio-test tail bound < 1e-12).
/// Throws DivergentPartitionFunction when alpha is at or beyond the radius of
/// convergence, TruncationTooSmall when the requested K leaves too much tail.
ProductMeasure build_measure(const RateFunction& rate, double alpha, int K = -1);

/// Finds alpha with |mean_rho - rho| <= tol by bracketing bisection plus a
/// Newton polish (the mean is strictly increasing in alpha). Fills all
/// derived constants including c_second.
ProductMeasure solve_fugacity(const RateFunction& rate, double rho, double tol = 1e-12);

/// c = E[g]; c' from the exponential-family identity d rho / d alpha = chi/alpha,
/// cross-checked against Richardson-extrapolated central differences of
/// alpha(rho) with step h (the two must agree within 10 h^2); c'' by second
/// central difference. At rho = 0 the identity is 0/0 and only the
/// finite-difference value is returned (fd_only set).
TransportConstants transport_constants(const ProductMeasure& measure, const RateFunction& rate,
                                       double h = 1e-4);

/// N i.i.d. draws from the marginal via the inverse-CDF table.
Configuration sample_configuration(const ProductMeasure& measure, int N, RngStream& rng,
                                   const RateFunction& rate);

/// True iff sum pmf(k) k^{2+delta} is finite at truncation with a decreasing
/// tail (numerical ratio test on the weighted tail).
bool moment_condition_check(const ProductMeasure& measure, double delta);

/// CSV export (k, pmf) with a header carrying the derived constants.
void write_measure_csv(const std::string& path, const ProductMeasure& measure);

}  // namespace zrplab
