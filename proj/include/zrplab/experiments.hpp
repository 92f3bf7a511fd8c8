#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zrplab/measure.hpp"
#include "zrplab/params.hpp"

namespace zrplab {

/// Sectioned key/value experiment configuration. A run is a pure function of
/// (config, seed): reports embed the hash of the resolved text plus the seed,
/// and identical resolved configs produce byte-identical outputs regardless
/// of worker count.
class ExperimentConfig {
public:
  static ExperimentConfig parse_file(const std::string& path);
  static ExperimentConfig parse_text(const std::string& text);
  ExperimentConfig() = default;

  void set(const std::string& section_key, const std::string& value);
  bool has(const std::string& section_key) const;

  std::string get_string(const std::string& section_key, const std::string& fallback) const;
  double get_double(const std::string& section_key, double fallback) const;
  long long get_int(const std::string& section_key, long long fallback) const;
  std::vector<double> get_list(const std::string& section_key,
                               const std::vector<double>& fallback) const;

  /// Canonical "section.key=value" lines, sorted; input to the hash.
  std::string resolved_text() const;
  /// FNV-1a over the resolved text, hex.
  std::string hash() const;

  /// [model] block -> ModelParams (rate spec: constant | linear | capped:<b>
  /// | table:v0,v1,...).
  ModelParams model_params() const;
  RateFunction rate_function() const;

  std::uint64_t seed() const { return static_cast<std::uint64_t>(get_int("ensemble.seed", 1)); }
  int workers() const { return static_cast<int>(get_int("ensemble.workers", 1)); }
  std::string out_dir() const { return get_string("output.dir", "out"); }

private:
  std::map<std::string, std::string> values_;
};

/// Runs fn(0..count-1) across `workers` threads; results must be written into
/// index-addressed slots so aggregation order cannot depend on scheduling.
void parallel_for_indexed(long long count, int workers,
                          const std::function<void(long long)>& fn);

/// Matched Ornstein-Uhlenbeck coefficients for the derivative stochastic heat
/// equation limit of this generator: diffusivity c'(rho) and noise amplitude
/// sqrt(2 c(rho)). Under the library's unit-rate-per-mode noise convention
/// these reproduce the stationary mode variance chi(rho) and the microscopic
/// relaxation rate; the static variance chi N^{-1} sum J^2 is the anchor.
struct OuCoefficients {
  double diffusivity = 0.0;
  double noise_amplitude = 0.0;
};
OuCoefficients matched_ou_coefficients(const ProductMeasure& measure);

/// Experiment entry points; each writes CSV + JSON into output.dir and
/// returns 0 (gates passed) or 1 (an acceptance gate failed).
int cmd_invariance(const ExperimentConfig& cfg);
int cmd_crossover(const ExperimentConfig& cfg);
int cmd_entropy_scan(const ExperimentConfig& cfg);
int cmd_sandwich(const ExperimentConfig& cfg);
int cmd_sample_invariant(const ExperimentConfig& cfg);
int cmd_spde_bench(const ExperimentConfig& cfg);

}  // namespace zrplab
