#include "zrplab/simulator.hpp"

#include "zrplab/csv.hpp"
#include "zrplab/errors.hpp"

namespace zrplab {

double total_jump_rate(const Configuration& config, const ModelParams& params) {
  return params.speed_per_g() * config.rate_sum();
}

JumpEvent step(Configuration& config, const ModelParams& params, double& time, RngStream& rng) {
  const double rate_sum = config.rate_sum();
  if (!(rate_sum > 0.0)) throw EmptySystemError();
  const double total_rate = params.speed_per_g() * rate_sum;
  time += rng.exponential(total_rate);

  const int n = config.size();
  const int from = config.sample_site(rng.uniform());
  const bool right = rng.uniform() < params.prob_right();

  JumpEvent ev;
  ev.time = time;
  ev.from = from;
  if (right) {
    ev.to = from + 1 == n ? 0 : from + 1;
    ev.flux_delta = from + 1 == n ? -1 : 0;
  } else {
    ev.to = from == 0 ? n - 1 : from - 1;
    ev.flux_delta = from == 0 ? +1 : 0;
  }
  config.apply_jump(ev.from, ev.to, params.rate);
  return ev;
}

EventStats run_until(Configuration& config, const ModelParams& params, double T,
                     RngStream& rng, std::span<Observer* const> observers) {
  EventStats stats;
  double t = 0.0;
  const double speed = params.speed_per_g();
  while (true) {
    const double rate_sum = config.rate_sum();
    if (!(rate_sum > 0.0)) break;  // empty system: nothing ever happens
    const double dt = rng.exponential(speed * rate_sum);
    if (t + dt > T) break;
    const double t_next = t + dt;
    for (Observer* o : observers) o->advance_to(t_next, config);

    const int n = config.size();
    const int from = config.sample_site(rng.uniform());
    const bool right = rng.uniform() < params.prob_right();
    JumpEvent ev;
    ev.time = t_next;
    ev.from = from;
    if (right) {
      ev.to = from + 1 == n ? 0 : from + 1;
      ev.flux_delta = from + 1 == n ? -1 : 0;
      ++stats.rights;
    } else {
      ev.to = from == 0 ? n - 1 : from - 1;
      ev.flux_delta = from == 0 ? +1 : 0;
      ++stats.lefts;
    }
    config.apply_jump(ev.from, ev.to, params.rate);
    t = t_next;
    ++stats.events;
    for (Observer* o : observers) o->on_event(ev, config);
  }
  for (Observer* o : observers) o->advance_to(T, config);
  stats.final_time = T;
  return stats;
}

void write_event_log(const std::string& path, const ModelParams& params,
                     std::uint64_t seed, std::span<const JumpEvent> events) {
  CsvWriter out(path);
  out.comment("params N=" + std::to_string(params.lattice_size) +
              " gamma=" + format_double(params.gamma) + " beta=" + format_double(params.beta) +
              " rho=" + format_double(params.density) + " rate=" + params.rate.describe() +
              " seed=" + std::to_string(seed));
  out.header({"time", "from", "to", "boundary"});
  for (const JumpEvent& ev : events) {
    out.field(ev.time);
    out.field(static_cast<long long>(ev.from));
    out.field(static_cast<long long>(ev.to));
    out.field(static_cast<long long>(ev.flux_delta));
    out.end_row();
  }
}

void write_configuration_csv(const std::string& path, const ModelParams& params,
                             std::uint64_t seed, const Configuration& config) {
  CsvWriter out(path);
  out.comment("params N=" + std::to_string(params.lattice_size) +
              " gamma=" + format_double(params.gamma) + " beta=" + format_double(params.beta) +
              " rho=" + format_double(params.density) + " rate=" + params.rate.describe() +
              " seed=" + std::to_string(seed));
  out.header({"site", "occupancy"});
  for (int x = 0; x < config.size(); ++x) {
    out.field(static_cast<long long>(x));
    out.field(static_cast<long long>(config.occupancy(x)));
    out.end_row();
  }
}

}  // namespace zrplab
