#pragma once

#include "zrplab/configuration.hpp"
#include "zrplab/height.hpp"
#include "zrplab/params.hpp"
#include "zrplab/test_function.hpp"

namespace zrplab {

/// One evaluation of the density fluctuation field paired with a test
/// function in the frame moving at gamma N^{1-beta} c'_rho.
struct FieldSample {
  double value = 0.0;
  double time = 0.0;
  double drift_offset = 0.0;  // gamma N^{1-beta} c'_rho T
};

/// Frame offset at time T (not reduced mod 1; evaluation wraps).
double frame_drift(const ModelParams& params, double c_prime, double T);

/// Direct evaluation: N^{-1/2} sum_x (eta_x - rho) J(x/N - drift).
FieldSample fluctuation_field(const Configuration& config, const TestFunction& J, double T,
                              const ModelParams& params, double c_prime);

/// Same field through the exact discrete Abel summation against the height
/// function, including the winding boundary term that the continuum display
/// drops. Agrees with fluctuation_field to floating-point rounding.
FieldSample field_by_sbp(const HeightField& height, const TestFunction& J, double T,
                         const ModelParams& params, double c_prime);

}  // namespace zrplab
