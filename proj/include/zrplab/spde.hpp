#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "zrplab/rng.hpp"
#include "zrplab/test_function.hpp"

namespace zrplab {

/// Spectral solution of the additive stochastic heat equation or its spatial
/// derivative on the unit torus, advanced by the exact Ornstein-Uhlenbeck
/// transition per mode (no time-discretization error).
///
/// Noise convention: the cylindrical white noise is expanded in the real
/// orthonormal basis {1, sqrt(2) cos(2 pi k x), sqrt(2) sin(2 pi k x)} with an
/// independent standard Brownian motion per basis element. For the derivative
/// equation each mode's noise amplitude carries the factor 2 pi k, so mode 0
/// is constant in time.
class SpectralField {
public:
  /// derivative_noise = false: dH = a H'' dt + b dW        (ASHE)
  /// derivative_noise = true:  dY = a Y'' dt + b d(dW/dx)  (partial-ASHE)
  SpectralField(int cutoff, double diffusivity, double noise_amplitude, bool derivative_noise);

  int cutoff() const { return cutoff_; }
  double diffusivity() const { return a_; }
  double noise_amplitude() const { return b_; }

  /// Real-basis coefficients: index 0 is the mean mode, then (cos_k, sin_k).
  double& coeff_mean() { return coeffs_[0]; }
  double& coeff_cos(int k) { return coeffs_[static_cast<std::size_t>(2 * k - 1)]; }
  double& coeff_sin(int k) { return coeffs_[static_cast<std::size_t>(2 * k)]; }
  double coeff_mean() const { return coeffs_[0]; }
  double coeff_cos(int k) const { return coeffs_[static_cast<std::size_t>(2 * k - 1)]; }
  double coeff_sin(int k) const { return coeffs_[static_cast<std::size_t>(2 * k)]; }

  /// Complex Fourier coefficient of e^{2 pi i k x}; conjugate symmetry
  /// Y_{-k} = conj(Y_k) holds by construction.
  std::complex<double> mode(int k) const;

  /// Exact OU transition over dt; consumes 2*cutoff+1 normals.
  void step(double dt, RngStream& rng);

  /// Draws the coefficients from the stationary law (mode 0 left unchanged).
  void sample_stationary(RngStream& rng);

  double eval(double x) const;

  /// <field, J> on the torus. Exact for Fourier test functions; quadrature on
  /// a uniform grid otherwise.
  double pair(const TestFunction& J, int quadrature = 1024) const;

  /// OU relaxation rate a (2 pi k)^2 and stationary standard deviation of one
  /// real-basis coefficient of wavenumber k.
  double relaxation_rate(int k) const;
  double stationary_sd(int k) const;

private:
  int cutoff_;
  double a_;
  double b_;
  bool derivative_noise_;
  std::vector<double> coeffs_;  // 2*cutoff+1 real coefficients
};

/// Finite-difference multiplicative-noise stochastic heat equation
/// dZ = a Z'' dt + lambda sqrt(a) Z dW on a periodic grid, explicit
/// Euler-Maruyama with discrete space-time white noise (one N(0, dt/dx)
/// increment per cell per step).
class GridField {
public:
  GridField(int grid_size, double diffusivity, double lambda);

  int size() const { return static_cast<int>(values_.size()); }
  double dx() const { return dx_; }
  double diffusivity() const { return a_; }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }
  bool nonpositive_detected() const { return nonpositive_; }

  /// Stability requires a dt <= dx^2 / 2 (throws StabilityViolated).
  /// Noise increments are drawn from `rng`; passing the same stream state to
  /// two fields couples them through the same realization.
  void step(double dt, RngStream& rng);

  /// Same transition with caller-provided noise (for shared-noise pairs).
  void step_with_noise(double dt, std::span<const double> xi);

  double max_stable_dt() const { return 0.5 * dx_ * dx_ / a_; }

private:
  double a_;
  double lambda_;
  double dx_;
  bool nonpositive_ = false;
  std::vector<double> values_;
  std::vector<double> scratch_;
  std::vector<double> noise_;
};

/// -<J', log Z> by quadrature on the periodic grid; the stochastic Burgers
/// field tested against J. Throws NonpositiveField if any value <= 0.
double cole_hopf_pairing(const GridField& field, const TestFunction& J);

struct AsheFellerResult {
  double gap_initial = 0.0;    // |<Y^eps - Y, J>| at time 0
  double gap_evolved = 0.0;    // same at time T under shared noise
  double gap_predicted = 0.0;  // heat-semigroup evolution of the initial gap
};

/// Shared-noise continuity check for the derivative ASHE: the difference of
/// two solutions is deterministic and decays by the heat semigroup. The
/// perturbation is placed in a single Fourier mode.
AsheFellerResult feller_check_ashe(const SpectralField& base_state, int perturbed_mode,
                                   double delta, const TestFunction& J, double T, double dt,
                                   std::uint64_t noise_seed);

struct SbeFellerPoint {
  double epsilon = 0.0;
  double input_msd = 0.0;       // sup_x |Z0^eps - Z0|^2 (deterministic data)
  double output_msd = 0.0;      // E (<J,Y^eps> - <J,Y>)^2 at T
  double output_se = 0.0;
  long long runs = 0;
  long long excluded = 0;       // runs dropped for nonpositivity
};

/// Shared-noise Feller check for the Cole-Hopf stochastic Burgers field:
/// Z0^eps = Z0 (1 + eps cos 2 pi x). Each run couples the pair through one
/// noise realization.
SbeFellerPoint feller_check_sbe(const std::vector<double>& z0, double epsilon,
                                const TestFunction& J, double T, double dt, double diffusivity,
                                double lambda, int runs, std::uint64_t master_seed);

}  // namespace zrplab
