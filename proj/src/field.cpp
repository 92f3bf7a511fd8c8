#include "zrplab/field.hpp"

#include <cmath>

namespace zrplab {

double frame_drift(const ModelParams& params, double c_prime, double T) {
  return params.frame_speed_factor() * c_prime * T;
}

FieldSample fluctuation_field(const Configuration& config, const TestFunction& J, double T,
                              const ModelParams& params, double c_prime) {
  const int n = config.size();
  const double drift = frame_drift(params, c_prime, T);
  const double rho = params.density;
  double sum = 0.0;
  for (int x = 0; x < n; ++x) {
    const double arg = wrap_unit(static_cast<double>(x) / n - drift);
    sum += (config.occupancy(x) - rho) * J(arg);
  }
  FieldSample s;
  s.value = sum / std::sqrt(static_cast<double>(n));
  s.time = T;
  s.drift_offset = drift;
  return s;
}

FieldSample field_by_sbp(const HeightField& height, const TestFunction& J, double T,
                         const ModelParams& params, double c_prime) {
  const int n = height.size();
  const double drift = frame_drift(params, c_prime, T);

  // Y = sum_x (H_{x+1} - H_x) u_x with u_x = J(x/N - drift). Abel summation:
  // Y = -sum_{x=0}^{N-1} H_{x+1} (u_{x+1} - u_x) + (H_N - H_0) u_0,
  // exact because u_N and u_0 are the same evaluation on the torus.
  auto u = [&](int x) { return J(wrap_unit(static_cast<double>(x % n) / n - drift)); };

  double sum = 0.0;
  double u_prev = u(0);
  const double u0 = u_prev;
  for (int x = 0; x < n; ++x) {
    const double u_next = u(x + 1);
    sum -= height.value(x + 1) * (u_next - u_prev);
    u_prev = u_next;
  }
  sum += (height.value(n) - height.value(0)) * u0;

  FieldSample s;
  s.value = sum;
  s.time = T;
  s.drift_offset = drift;
  return s;
}

}  // namespace zrplab
