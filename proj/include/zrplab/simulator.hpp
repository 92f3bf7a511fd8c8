#pragma once

#include <span>
#include <string>
#include <vector>

#include "zrplab/configuration.hpp"
#include "zrplab/params.hpp"
#include "zrplab/rng.hpp"

namespace zrplab {

/// One realized transition. flux_delta follows the winding convention:
/// +1 for a leftward crossing of the periodic boundary (site 0 -> N-1),
/// -1 for a rightward crossing (site N-1 -> 0), 0 otherwise.
struct JumpEvent {
  double time = 0.0;
  int from = 0;
  int to = 0;
  int flux_delta = 0;
};

/// Observer contract for a single sequential simulation.
/// advance_to(t, config) is called with the state that is valid on the time
/// interval up to t (before the next event applies); on_event fires after the
/// configuration has been updated.
class Observer {
public:
  virtual ~Observer() = default;
  virtual void advance_to(double /*t*/, const Configuration& /*config*/) {}
  virtual void on_event(const JumpEvent& /*event*/, const Configuration& /*config*/) {}
};

struct EventStats {
  long long events = 0;
  long long rights = 0;
  long long lefts = 0;
  double final_time = 0.0;
};

/// N^2 (2 + gamma N^-beta) * sum_x g(eta_x); zero iff the configuration is empty.
double total_jump_rate(const Configuration& config, const ModelParams& params);

/// One transition of the generator. Advances `time` by an exponential
/// increment, picks the departure site proportionally to g(eta_x) and the
/// direction with the exact generator ratio, and applies the jump.
/// Throws EmptySystemError when the total rate is zero.
JumpEvent step(Configuration& config, const ModelParams& params, double& time, RngStream& rng);

/// Runs until macroscopic time T, invoking observers along the way.
/// Deterministic given the stream. An empty configuration simply idles.
EventStats run_until(Configuration& config, const ModelParams& params, double T,
                     RngStream& rng, std::span<Observer* const> observers = {});

/// Newline-delimited event log (time, from, to, boundary flag) with a header
/// line carrying params and seed.
class EventLogObserver : public Observer {
public:
  void on_event(const JumpEvent& ev, const Configuration&) override { events.push_back(ev); }
  std::vector<JumpEvent> events;
};

/// Writes an event log in the export format.
void write_event_log(const std::string& path, const ModelParams& params,
                     std::uint64_t seed, std::span<const JumpEvent> events);

/// Writes a configuration snapshot as CSV of occupancies.
void write_configuration_csv(const std::string& path, const ModelParams& params,
                             std::uint64_t seed, const Configuration& config);

}  // namespace zrplab
