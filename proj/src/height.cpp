#include "zrplab/height.hpp"

#include <cmath>

#include "zrplab/csv.hpp"
#include "zrplab/errors.hpp"

namespace zrplab {

HeightField::HeightField(const Configuration& config, double rho, long long flux0)
    : n_(config.size()),
      rho_(rho),
      inv_sqrt_n_(1.0 / std::sqrt(static_cast<double>(config.size()))),
      flux0_(flux0),
      raw_(static_cast<std::size_t>(config.size()) + 1) {
  long long acc = flux0;
  raw_[0] = acc;
  for (int x = 0; x < n_; ++x) {
    acc += config.occupancy(x);
    raw_[static_cast<std::size_t>(x) + 1] = acc;
  }
}

std::vector<double> HeightField::values() const {
  std::vector<double> out(static_cast<std::size_t>(n_) + 1);
  for (int x = 0; x <= n_; ++x) out[static_cast<std::size_t>(x)] = value(x);
  return out;
}

void HeightField::apply_event(const JumpEvent& event) {
  const int n = n_;
  const bool right = event.to == (event.from + 1) % n;
  const bool left = event.to == (event.from + n - 1) % n;
  if (!right && !left) throw InconsistentEvent("event sites are not torus neighbors");
  if (right) {
    if (event.from == n - 1) {
      if (event.flux_delta != -1) throw InconsistentEvent("boundary right jump needs flux -1");
      flux0_ -= 1;
      raw_[0] -= 1;
      raw_[static_cast<std::size_t>(n)] -= 1;
    } else {
      raw_[static_cast<std::size_t>(event.from) + 1] -= 1;
    }
  } else {
    if (event.from == 0) {
      if (event.flux_delta != +1) throw InconsistentEvent("boundary left jump needs flux +1");
      flux0_ += 1;
      raw_[0] += 1;
      raw_[static_cast<std::size_t>(n)] += 1;
    } else {
      raw_[static_cast<std::size_t>(event.from)] += 1;
    }
  }
}

HeightField height_from_config(const Configuration& config, double rho, long long flux0) {
  return HeightField(config, rho, flux0);
}

HeightField update_height_on_event(HeightField height, const JumpEvent& event) {
  height.apply_event(event);
  return height;
}

void write_height_csv(const std::string& path, const HeightField& height, std::uint64_t seed) {
  CsvWriter out(path);
  out.comment("N=" + std::to_string(height.size()) + " rho=" + format_double(height.rho()) +
              " flux0=" + std::to_string(height.flux0()) + " T=" + format_double(height.time()) +
              " seed=" + std::to_string(seed));
  out.header({"x", "H"});
  for (int x = 0; x <= height.size(); ++x) {
    out.field(static_cast<long long>(x));
    out.field(height.value(x));
    out.end_row();
  }
}

}  // namespace zrplab
