#include "zrplab/configuration.hpp"

#include "zrplab/errors.hpp"

namespace zrplab {

Configuration::Configuration(std::vector<int> occupancies, const RateFunction& rate)
    : eta_(std::move(occupancies)), rates_(eta_.size()) {
  if (eta_.size() < 2) throw ConfigError("configuration needs at least 2 sites");
  for (std::size_t x = 0; x < eta_.size(); ++x) {
    if (eta_[x] < 0) throw ConfigError("negative occupancy");
    total_ += eta_[x];
  }
  rebuild_rate_index(rate);
}

void Configuration::apply_jump(int from, int to, const RateFunction& rate) {
  const int n = size();
  if (from < 0 || from >= n || to < 0 || to >= n)
    throw InconsistentEvent("jump site out of range");
  if (to != (from + 1) % n && to != (from + n - 1) % n)
    throw InconsistentEvent("jump sites are not torus neighbors");
  auto f = static_cast<std::size_t>(from);
  auto t = static_cast<std::size_t>(to);
  if (eta_[f] <= 0) throw InconsistentEvent("jump from an empty site");
  eta_[f] -= 1;
  eta_[t] += 1;
  rates_.set(f, rate(eta_[f]));
  rates_.set(t, rate(eta_[t]));
}

void Configuration::rebuild_rate_index(const RateFunction& rate) {
  std::vector<double> g(eta_.size());
  for (std::size_t x = 0; x < eta_.size(); ++x) g[x] = rate(eta_[x]);
  rates_.assign(g);
}

}  // namespace zrplab
