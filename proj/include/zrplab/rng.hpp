#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace zrplab {

/// Deterministic RNG stream with portable draw semantics.
///
/// All variates are derived from the raw mt19937_64 output through fixed
/// formulas (no std::*_distribution), so a given (seed, call sequence) yields
/// the same numbers on every platform and compiler. Replica streams are
/// derived from a master seed by a documented counter scheme: stream k uses
/// splitmix64(splitmix64(master) + k).
class RngStream {
public:
  explicit RngStream(std::uint64_t seed) : engine_(mix(seed)) {}

  /// Stream `stream_id` of a family keyed by `master_seed`.
  static RngStream substream(std::uint64_t master_seed, std::uint64_t stream_id) {
    return RngStream(mix(master_seed) + stream_id);
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0,1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform on (0,1].
  double uniform_open() { return 1.0 - uniform(); }

  /// Exponential with the given rate (mean 1/rate).
  double exponential(double rate) { return -std::log(uniform_open()) / rate; }

  /// Standard normal (Box-Muller, one spare cached).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u = uniform_open();
    double v = uniform();
    double r = std::sqrt(-2.0 * std::log(u));
    double a = 6.283185307179586476925286766559 * v;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  /// Uniform integer in [0, n).
  std::uint64_t uniform_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
  }

private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace zrplab
