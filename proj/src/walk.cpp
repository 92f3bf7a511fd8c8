#include "zrplab/walk.hpp"

#include <cmath>

#include "zrplab/errors.hpp"

namespace zrplab {

WalkPath walk_from_config(const Configuration& config) {
  const int n = config.size();
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  WalkPath w;
  w.s.resize(static_cast<std::size_t>(n) + 1);
  long long acc = 0;
  w.s[0] = 0.0;
  for (int x = 0; x < n; ++x) {
    acc += config.occupancy(x);
    w.s[static_cast<std::size_t>(x) + 1] = static_cast<double>(acc) * scale;
  }
  return w;
}

Configuration config_from_walk(const WalkPath& walk, const RateFunction& rate) {
  const int n = walk.lattice_size();
  if (n < 2) throw ConfigError("walk too short");
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  std::vector<int> eta(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) {
    const double inc = (walk.s[static_cast<std::size_t>(x) + 1] -
                        walk.s[static_cast<std::size_t>(x)]) * sqrt_n;
    const double rounded = std::round(inc);
    if (rounded < 0.0 || std::abs(inc - rounded) > 1e-9 * std::max(1.0, std::abs(inc)) + 1e-12)
      throw NonLatticeIncrement(x);
    eta[static_cast<std::size_t>(x)] = static_cast<int>(rounded);
  }
  return Configuration(std::move(eta), rate);
}

}  // namespace zrplab
