#include "zrplab/spde.hpp"

#include <cmath>

#include "zrplab/errors.hpp"

namespace zrplab {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kSqrt2 = 1.4142135623730950488;
}  // namespace

SpectralField::SpectralField(int cutoff, double diffusivity, double noise_amplitude,
                             bool derivative_noise)
    : cutoff_(cutoff),
      a_(diffusivity),
      b_(noise_amplitude),
      derivative_noise_(derivative_noise),
      coeffs_(static_cast<std::size_t>(2 * cutoff + 1), 0.0) {
  if (cutoff < 1) throw ConfigError("spectral cutoff must be >= 1");
  if (!(diffusivity > 0.0)) throw ConfigError("diffusivity must be > 0");
}

std::complex<double> SpectralField::mode(int k) const {
  if (k == 0) return {coeff_mean(), 0.0};
  const int kk = std::abs(k);
  if (kk > cutoff_) return {0.0, 0.0};
  // field = sum_k a_k sqrt(2) cos + b_k sqrt(2) sin = sum_k m_k e^{2 pi i k x}
  const std::complex<double> m(coeff_cos(kk) / kSqrt2, -coeff_sin(kk) / kSqrt2);
  return k > 0 ? m : std::conj(m);
}

double SpectralField::relaxation_rate(int k) const {
  const double w = kTwoPi * k;
  return a_ * w * w;
}

double SpectralField::stationary_sd(int k) const {
  if (k == 0) return 0.0;  // no stationary law for the mean mode
  const double amp = derivative_noise_ ? b_ * kTwoPi * k : b_;
  return amp / std::sqrt(2.0 * relaxation_rate(k));
}

void SpectralField::step(double dt, RngStream& rng) {
  if (!(dt > 0.0)) throw ConfigError("dt must be > 0");
  // Mode 0: no damping; plain Brownian motion unless the noise is a spatial
  // derivative, in which case it is constant.
  {
    const double xi = rng.normal();
    if (!derivative_noise_) coeffs_[0] += b_ * std::sqrt(dt) * xi;
  }
  for (int k = 1; k <= cutoff_; ++k) {
    const double lam = relaxation_rate(k);
    const double amp = derivative_noise_ ? b_ * kTwoPi * k : b_;
    const double decay = std::exp(-lam * dt);
    const double sd = amp * std::sqrt((1.0 - decay * decay) / (2.0 * lam));
    coeff_cos(k) = decay * coeff_cos(k) + sd * rng.normal();
    coeff_sin(k) = decay * coeff_sin(k) + sd * rng.normal();
  }
}

void SpectralField::sample_stationary(RngStream& rng) {
  for (int k = 1; k <= cutoff_; ++k) {
    const double sd = stationary_sd(k);
    coeff_cos(k) = sd * rng.normal();
    coeff_sin(k) = sd * rng.normal();
  }
}

double SpectralField::eval(double x) const {
  double v = coeff_mean();
  for (int k = 1; k <= cutoff_; ++k) {
    const double w = kTwoPi * k * x;
    v += kSqrt2 * (coeff_cos(k) * std::cos(w) + coeff_sin(k) * std::sin(w));
  }
  return v;
}

double SpectralField::pair(const TestFunction& J, int quadrature) const {
  if (J.is_fourier()) {
    // <1, field> = mean coefficient; <cos_k, field> = a_k sqrt(2)/2, etc.
    const int k = J.mode();
    if (k == 0) return coeff_mean();
    if (k > cutoff_) return 0.0;
    // distinguish cos vs sin through evaluation at 0 (cos(0)=1, sin(0)=0)
    const bool is_cos = std::abs(J(0.0) - 1.0) < 1e-12;
    return (is_cos ? coeff_cos(k) : coeff_sin(k)) * kSqrt2 * 0.5;
  }
  double s = 0.0;
  for (int i = 0; i < quadrature; ++i) {
    const double x = static_cast<double>(i) / quadrature;
    s += J(x) * eval(x);
  }
  return s / quadrature;
}

GridField::GridField(int grid_size, double diffusivity, double lambda)
    : a_(diffusivity),
      lambda_(lambda),
      dx_(1.0 / grid_size),
      values_(static_cast<std::size_t>(grid_size), 0.0),
      scratch_(static_cast<std::size_t>(grid_size), 0.0) {
  if (grid_size < 4) throw ConfigError("grid size must be >= 4");
  if (!(diffusivity > 0.0)) throw ConfigError("diffusivity must be > 0");
}

void GridField::step(double dt, RngStream& rng) {
  const std::size_t m = values_.size();
  noise_.resize(m);
  for (std::size_t i = 0; i < m; ++i) noise_[i] = rng.normal();
  step_with_noise(dt, noise_);
}

void GridField::step_with_noise(double dt, std::span<const double> xi) {
  if (!(dt > 0.0)) throw ConfigError("dt must be > 0");
  if (dt > max_stable_dt() * (1.0 + 1e-12)) throw StabilityViolated(dt, max_stable_dt());
  const std::size_t m = values_.size();
  if (xi.size() != m) throw ConfigError("noise vector size mismatch");

  const double lap = a_ * dt / (dx_ * dx_);
  const double noise_sd = lambda_ * std::sqrt(a_) * std::sqrt(dt / dx_);
  scratch_.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double zl = values_[i == 0 ? m - 1 : i - 1];
    const double zr = values_[i + 1 == m ? 0 : i + 1];
    const double z = values_[i];
    scratch_[i] = z + lap * (zr - 2.0 * z + zl) + noise_sd * z * xi[i];
  }
  values_.swap(scratch_);
  if (!nonpositive_) {
    for (std::size_t i = 0; i < m; ++i) {
      if (values_[i] <= 0.0) {
        nonpositive_ = true;
        break;
      }
    }
  }
}

double cole_hopf_pairing(const GridField& field, const TestFunction& J) {
  const auto& z = field.values();
  const int m = static_cast<int>(z.size());
  double s = 0.0;
  for (int i = 0; i < m; ++i) {
    if (!(z[static_cast<std::size_t>(i)] > 0.0)) throw NonpositiveField(i);
    const double x = static_cast<double>(i) / m;
    s += J.derivative(x) * std::log(z[static_cast<std::size_t>(i)]);
  }
  return -s * field.dx();
}

AsheFellerResult feller_check_ashe(const SpectralField& base_state, int perturbed_mode,
                                   double delta, const TestFunction& J, double T, double dt,
                                   std::uint64_t noise_seed) {
  SpectralField a = base_state;
  SpectralField b = base_state;
  if (perturbed_mode == 0)
    b.coeff_mean() += delta;
  else
    b.coeff_cos(perturbed_mode) += delta;

  AsheFellerResult res;
  res.gap_initial = std::abs(a.pair(J) - b.pair(J));

  RngStream rng_a(noise_seed);
  RngStream rng_b(noise_seed);
  int steps = std::max(1, static_cast<int>(std::llround(T / dt)));
  const double h = T / steps;
  for (int s = 0; s < steps; ++s) {
    a.step(h, rng_a);
    b.step(h, rng_b);
  }
  res.gap_evolved = std::abs(a.pair(J) - b.pair(J));
  const double lam = base_state.relaxation_rate(perturbed_mode);
  res.gap_predicted = res.gap_initial * std::exp(-lam * T);
  return res;
}

SbeFellerPoint feller_check_sbe(const std::vector<double>& z0, double epsilon,
                                const TestFunction& J, double T, double dt, double diffusivity,
                                double lambda, int runs, std::uint64_t master_seed) {
  const int m = static_cast<int>(z0.size());
  SbeFellerPoint point;
  point.epsilon = epsilon;
  point.runs = runs;
  for (int i = 0; i < m; ++i) {
    const double x = static_cast<double>(i) / m;
    const double diff = z0[static_cast<std::size_t>(i)] * epsilon * std::cos(kTwoPi * x);
    point.input_msd = std::max(point.input_msd, diff * diff);
  }

  const int steps = std::max(1, static_cast<int>(std::llround(T / dt)));
  const double h = T / steps;
  std::vector<double> xi(static_cast<std::size_t>(m));
  double sum = 0.0, sum_sq = 0.0;
  long long kept = 0;
  for (int r = 0; r < runs; ++r) {
    RngStream rng = RngStream::substream(master_seed, static_cast<std::uint64_t>(r));
    GridField base(m, diffusivity, lambda);
    GridField pert(m, diffusivity, lambda);
    for (int i = 0; i < m; ++i) {
      const double x = static_cast<double>(i) / m;
      base.values()[static_cast<std::size_t>(i)] = z0[static_cast<std::size_t>(i)];
      pert.values()[static_cast<std::size_t>(i)] =
          z0[static_cast<std::size_t>(i)] * (1.0 + epsilon * std::cos(kTwoPi * x));
    }
    bool bad = false;
    for (int s = 0; s < steps; ++s) {
      for (int i = 0; i < m; ++i) xi[static_cast<std::size_t>(i)] = rng.normal();
      base.step_with_noise(h, xi);
      pert.step_with_noise(h, xi);
      if (base.nonpositive_detected() || pert.nonpositive_detected()) {
        bad = true;
        break;
      }
    }
    if (bad) {
      ++point.excluded;
      continue;
    }
    const double d = cole_hopf_pairing(pert, J) - cole_hopf_pairing(base, J);
    sum += d * d;
    sum_sq += d * d * d * d;
    ++kept;
  }
  if (kept > 0) {
    point.output_msd = sum / static_cast<double>(kept);
    const double var = std::max(0.0, sum_sq / kept - point.output_msd * point.output_msd);
    point.output_se = std::sqrt(var / kept);
  }
  return point;
}

}  // namespace zrplab
