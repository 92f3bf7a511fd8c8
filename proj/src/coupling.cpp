#include "zrplab/coupling.hpp"

#include <cmath>

#include "zrplab/errors.hpp"
#include "zrplab/field.hpp"

namespace zrplab {

CoupledSystem::CoupledSystem(std::vector<Configuration> replicas, const ModelParams& params)
    : params_(params), replicas_(std::move(replicas)), dominating_(0) {
  if (replicas_.empty()) throw ConfigError("coupled system needs at least one replica");
  const int n = replicas_.front().size();
  for (const Configuration& c : replicas_)
    if (c.size() != n) throw ConfigError("replicas must share the torus size");
  heights_.reserve(replicas_.size());
  for (const Configuration& c : replicas_) heights_.emplace_back(c, params_.density);

  std::vector<double> r(static_cast<std::size_t>(n), 0.0);
  for (int x = 0; x < n; ++x) {
    double mx = 0.0;
    for (const Configuration& c : replicas_) mx = std::max(mx, c.site_rate(x));
    r[static_cast<std::size_t>(x)] = mx;
  }
  dominating_ = PrefixSumTree(std::span<const double>(r));
}

void CoupledSystem::refresh_dominating(int x) {
  double mx = 0.0;
  for (const Configuration& c : replicas_) mx = std::max(mx, c.site_rate(x));
  dominating_.set(static_cast<std::size_t>(x), mx);
}

CoupledSystem::CoupledEvent CoupledSystem::step(RngStream& rng) {
  const double r_total = dominating_.total();
  if (!(r_total > 0.0)) throw AllEmptyError();
  time_ += rng.exponential(params_.speed_per_g() * r_total);
  const int from = static_cast<int>(dominating_.sample(rng.uniform()));
  const bool right = rng.uniform() < params_.prob_right();
  return apply_selection(from, right, rng.uniform());
}

std::optional<CoupledSystem::CoupledEvent> CoupledSystem::step_until(double T, RngStream& rng) {
  const double r_total = dominating_.total();
  if (!(r_total > 0.0)) throw AllEmptyError();
  const double dt = rng.exponential(params_.speed_per_g() * r_total);
  if (time_ + dt > T) {
    time_ = T;
    return std::nullopt;
  }
  time_ += dt;
  const int from = static_cast<int>(dominating_.sample(rng.uniform()));
  const bool right = rng.uniform() < params_.prob_right();
  return apply_selection(from, right, rng.uniform());
}

CoupledSystem::CoupledEvent CoupledSystem::apply_selection(int from, bool right, double mark_u) {
  const int n = replicas_.front().size();
  const double mark = mark_u * dominating_.value(static_cast<std::size_t>(from));

  CoupledEvent ev;
  ev.time = time_;
  ev.from = from;
  if (right) {
    ev.to = from + 1 == n ? 0 : from + 1;
    ev.flux_delta = from + 1 == n ? -1 : 0;
  } else {
    ev.to = from == 0 ? n - 1 : from - 1;
    ev.flux_delta = from == 0 ? +1 : 0;
  }

  ev.jumped.resize(replicas_.size(), false);
  JumpEvent jump{time_, ev.from, ev.to, ev.flux_delta};
  for (std::size_t m = 0; m < replicas_.size(); ++m) {
    if (mark <= replicas_[m].site_rate(from) && replicas_[m].occupancy(from) > 0) {
      replicas_[m].apply_jump(ev.from, ev.to, params_.rate);
      heights_[m].apply_event(jump);
      heights_[m].set_time(time_);
      ev.jumped[m] = true;
    }
  }
  refresh_dominating(ev.from);
  refresh_dominating(ev.to);
  return ev;
}

namespace {

/// Gap |H^1 - H^0| at one cut, in integer lattice units before scaling.
long long cut_gap_raw(const HeightField& a, const HeightField& b, int cut) {
  return std::llabs(a.raw(cut) - b.raw(cut));
}

}  // namespace

SandwichReport check_height_sandwich(CoupledSystem& system, double epsilon, double kappa,
                                     double T, RngStream& rng) {
  if (system.replica_count() < 2) throw ConfigError("sandwich check needs two replicas");
  const int n = system.replica(0).size();
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  const double bound = kappa * epsilon;

  SandwichReport report;
  auto full_sweep = [&](long long event_index) {
    for (int cut = 0; cut <= n; ++cut) {
      const double gap = scale * static_cast<double>(
                                     cut_gap_raw(system.height(0), system.height(1), cut));
      report.max_gap = std::max(report.max_gap, gap);
      if (gap > bound && !report.violated) {
        report.violated = true;
        report.first = {event_index, cut, gap};
      }
    }
  };

  // Initial tube.
  for (int cut = 0; cut <= n; ++cut)
    report.initial_gap = std::max(
        report.initial_gap,
        scale * static_cast<double>(cut_gap_raw(system.height(0), system.height(1), cut)));
  full_sweep(-1);

  while (!report.violated) {
    std::optional<CoupledSystem::CoupledEvent> maybe;
    try {
      maybe = system.step_until(T, rng);
    } catch (const AllEmptyError&) {
      break;
    }
    if (!maybe) break;
    const CoupledSystem::CoupledEvent& ev = *maybe;
    ++report.events;
    // Only the crossed cut can change: interior cut from/to boundary, or the
    // seam cuts 0 and N for boundary crossings.
    int cuts[2];
    int ncuts = 0;
    if (ev.flux_delta != 0) {
      cuts[ncuts++] = 0;
      cuts[ncuts++] = n;
    } else {
      cuts[ncuts++] = ev.to == (ev.from + 1) % n ? ev.from + 1 : ev.from;
    }
    for (int c = 0; c < ncuts; ++c) {
      const double gap = scale * static_cast<double>(
                                     cut_gap_raw(system.height(0), system.height(1), cuts[c]));
      report.max_gap = std::max(report.max_gap, gap);
      if (gap > bound) {
        report.violated = true;
        report.first = {report.events, cuts[c], gap};
      }
    }
  }
  if (!report.violated) full_sweep(report.events);
  return report;
}

double field_distance(const CoupledSystem& system, const TestFunction& J, double T,
                      double c_prime, int i, int j) {
  const FieldSample yi = field_by_sbp(system.height(i), J, T, system.params(), c_prime);
  const FieldSample yj = field_by_sbp(system.height(j), J, T, system.params(), c_prime);
  return std::abs(yi.value - yj.value);
}

bool sitewise_leq(const Configuration& a, const Configuration& b) {
  if (a.size() != b.size()) return false;
  for (int x = 0; x < a.size(); ++x)
    if (a.occupancy(x) > b.occupancy(x)) return false;
  return true;
}

}  // namespace zrplab
