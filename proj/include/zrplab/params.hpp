#pragma once

#include <cmath>

#include "zrplab/errors.hpp"
#include "zrplab/rates.hpp"

namespace zrplab {

/// Model parameters of the weakly asymmetric zero-range process on the
/// discrete torus of N sites. The generator carries the diffusive N^2
/// speed-up, so all times in this library are macroscopic: a site with
/// occupancy k fires rightward at rate N^2 (1 + gamma N^-beta) g(k) and
/// leftward at rate N^2 g(k).
struct ModelParams {
  int lattice_size = 2;   // N
  double gamma = 0.0;     // asymmetry strength, >= 0
  double beta = 0.5;      // asymmetry exponent, >= 1/2
  double density = 0.0;   // target density rho, >= 0
  RateFunction rate = RateFunction::constant_rate();

  void validate() const {
    if (lattice_size < 2) throw ConfigError("lattice_size must be >= 2");
    if (!(gamma >= 0.0)) throw ConfigError("gamma must be >= 0");
    if (!(beta >= 0.5)) throw ConfigError("beta must be >= 1/2");
    if (!(density >= 0.0)) throw ConfigError("density must be >= 0");
  }

  /// gamma N^{-beta}: the per-rate asymmetry at this size.
  double asymmetry() const { return gamma * std::pow(static_cast<double>(lattice_size), -beta); }

  /// N^2 (2 + gamma N^{-beta}): total firing rate per unit g.
  double speed_per_g() const {
    double n = static_cast<double>(lattice_size);
    return n * n * (2.0 + asymmetry());
  }

  /// Probability the sampled jump goes right: (1 + gamma N^-beta) / (2 + gamma N^-beta).
  double prob_right() const { return (1.0 + asymmetry()) / (2.0 + asymmetry()); }

  /// gamma N^{1-beta}: speed factor of the moving frame (times c'_rho).
  double frame_speed_factor() const {
    return gamma * std::pow(static_cast<double>(lattice_size), 1.0 - beta);
  }
};

}  // namespace zrplab
