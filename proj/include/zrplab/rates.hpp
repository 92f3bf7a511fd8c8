#pragma once

#include <limits>
#include <string>
#include <vector>

namespace zrplab {

/// Per-site jump rate g(k) as a function of the occupancy k.
///
/// Admissible rates satisfy g(0) = 0, g(k) > 0 for k >= 1, monotone
/// non-decreasing, and |g(k+1) - g(k)| bounded (the attractivity and
/// Lipschitz constraints). Closed-form kinds evaluate directly for any k;
/// the tabulated kind is defined up to its table length only.
class RateFunction {
public:
  enum class Kind { Constant, Linear, Capped, Tabulated };

  /// g(k) = 1 for k >= 1 (constant-rate zero-range process).
  static RateFunction constant_rate();
  /// g(k) = k (independent walkers).
  static RateFunction linear();
  /// g(k) = min(k, cap), cap >= 1.
  static RateFunction capped(double cap);
  /// g given by an explicit table for k = 0..table.size()-1. The Lipschitz
  /// bound defaults to the largest tabulated increment; an explicit bound is
  /// checked by validate_rate_function.
  static RateFunction tabulated(std::vector<double> table, double lipschitz_bound = -1.0);

  double operator()(int k) const;

  Kind kind() const { return kind_; }
  double lipschitz_bound() const { return lipschitz_bound_; }

  /// sup_k g(k); +infinity for the linear kind. Radius of convergence of the
  /// single-site partition function.
  double limit_rate() const;

  /// Largest k for which g is defined (INT_MAX for closed forms).
  int max_tabulated() const;

  std::string describe() const;

private:
  RateFunction(Kind kind, double cap, std::vector<double> table, double lipschitz);

  Kind kind_;
  double cap_ = 0.0;
  std::vector<double> table_;
  double lipschitz_bound_ = 1.0;
};

/// Checks the three structural constraints and returns the rate unchanged.
/// Throws RateValidationError naming the first offending occupancy.
RateFunction validate_rate_function(const RateFunction& rate);

}  // namespace zrplab
