#pragma once

#include <vector>

#include "zrplab/configuration.hpp"
#include "zrplab/simulator.hpp"

namespace zrplab {

/// Height function over the N+1 cuts x = 0..N.
///
/// Internally the heights are unscaled integers A_x = sum_{y<x} eta_y + flux0
/// so that event-level assertions are exact; the fluctuation-scaled value is
/// H_x = N^{-1/2} (A_x - rho x). Cut 0 and cut N are the same torus cut seen
/// before/after winding: H_N - H_0 = N^{-1/2}(total - rho N).
///
/// A particle jumping rightward across the bond (x, x+1) lowers the height at
/// cut x+1 by one lattice unit; leftward raises it. Crossings of the periodic
/// boundary additionally move flux0 (leftward 0 -> N-1 counts +1).
class HeightField {
public:
  HeightField(const Configuration& config, double rho, long long flux0 = 0);

  int size() const { return n_; }
  double rho() const { return rho_; }
  long long flux0() const { return flux0_; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  long long raw(int x) const { return raw_[static_cast<std::size_t>(x)]; }
  double value(int x) const {
    return (static_cast<double>(raw_[static_cast<std::size_t>(x)]) - rho_ * x) * inv_sqrt_n_;
  }
  std::vector<double> values() const;

  /// Incremental update; equals height_from_config recomputed from scratch.
  void apply_event(const JumpEvent& event);

private:
  int n_;
  double rho_;
  double inv_sqrt_n_;
  long long flux0_;
  double time_ = 0.0;
  std::vector<long long> raw_;  // A_x for x = 0..N
};

HeightField height_from_config(const Configuration& config, double rho, long long flux0 = 0);

/// Value-returning variant of HeightField::apply_event.
HeightField update_height_on_event(HeightField height, const JumpEvent& event);

/// Observer that maintains a height field alongside a running simulation.
class HeightTracker : public Observer {
public:
  HeightTracker(const Configuration& config, double rho) : height_(config, rho) {}
  void on_event(const JumpEvent& ev, const Configuration&) override {
    height_.apply_event(ev);
    height_.set_time(ev.time);
  }
  const HeightField& height() const { return height_; }
  HeightField& height() { return height_; }

private:
  HeightField height_;
};

/// CSV export (x, H) with params in the header.
void write_height_csv(const std::string& path, const HeightField& height,
                      std::uint64_t seed);

}  // namespace zrplab
