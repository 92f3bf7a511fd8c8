#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "zrplab/fenwick.hpp"
#include "zrplab/rates.hpp"

namespace zrplab {

/// Occupancy vector on the torus together with the maintained prefix-summable
/// index over per-site rates g(eta_x). The index entry at x always equals
/// g(eta_x); the particle count is cached and conserved by jumps.
class Configuration {
public:
  Configuration(std::vector<int> occupancies, const RateFunction& rate);

  int size() const { return static_cast<int>(eta_.size()); }
  long long total() const { return total_; }
  int occupancy(int x) const { return eta_[static_cast<std::size_t>(x)]; }
  const std::vector<int>& occupancies() const { return eta_; }

  double site_rate(int x) const { return rates_.value(static_cast<std::size_t>(x)); }
  double rate_sum() const { return rates_.total(); }

  /// Departure site sampled proportionally to g(eta_x); u in [0,1).
  int sample_site(double u) const { return static_cast<int>(rates_.sample(u)); }

  /// Moves one particle from `from` to `to` (adjacent mod N) and refreshes the
  /// rate index at exactly those two sites.
  void apply_jump(int from, int to, const RateFunction& rate);

  /// Recomputes the rate index from the occupancies (drift control / tests).
  void rebuild_rate_index(const RateFunction& rate);

private:
  std::vector<int> eta_;
  long long total_ = 0;
  PrefixSumTree rates_;
};

}  // namespace zrplab
