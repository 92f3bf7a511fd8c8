#pragma once

#include <vector>

#include "zrplab/configuration.hpp"
#include "zrplab/rates.hpp"

namespace zrplab {

/// Random-walk representation of a configuration: S_0 = 0 and increments
/// S_{n+1} - S_n = N^{-1/2} eta_n, non-negative lattice multiples.
struct WalkPath {
  std::vector<double> s;  // N+1 entries
  int lattice_size() const { return static_cast<int>(s.size()) - 1; }
};

WalkPath walk_from_config(const Configuration& config);

/// Inverse map; throws NonLatticeIncrement when an increment is not a
/// non-negative integer multiple of N^{-1/2}.
Configuration config_from_walk(const WalkPath& walk, const RateFunction& rate);

}  // namespace zrplab
