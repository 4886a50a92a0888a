#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "exogate/simkit/scenario.hpp"
#include "exogate/simkit/simulate.hpp"

namespace exogate::simkit {

struct Metrics {
  bool partial = false;
  std::optional<double> t_grasp;
  // Grasp instant to the first tick of state 2 with trunk assistance.
  std::optional<double> onset_latency;
  std::optional<double> latency_novis;
  std::optional<double> latency_gain;
  double peak_tau_ass = 0.0;
  double peak_tau_ass_novis = 0.0;
  double tau_user_integral = 0.0;  // integral of |tau_user| dt
  double tau_user_integral_novis = 0.0;
  std::array<double, 4> state_durations{};
  std::vector<double> rising_edges;
  std::vector<double> falling_edges;
};

inline std::optional<double> onset_after(const std::vector<SimRow>& rows, double t_grasp) {
  for (const auto& r : rows)
    if (r.t >= t_grasp - 1e-9 && r.state == TaskState::StandWithBox && r.alpha_w)
      return r.t - t_grasp;
  return std::nullopt;
}

inline double peak_assist(const std::vector<SimRow>& rows) {
  double peak = 0.0;
  for (const auto& r : rows) peak = std::max(peak, r.tau_ass);
  return peak;
}

// Trapezoid rule over the tick grid.
inline double user_effort_integral(const std::vector<SimRow>& rows, double dt) {
  double acc = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i)
    acc += 0.5 * (std::abs(rows[i - 1].tau_user) + std::abs(rows[i].tau_user)) * dt;
  return acc;
}

inline Metrics compute_metrics(const SimLog& log, const Scenario& sc) {
  Metrics m;
  m.peak_tau_ass = peak_assist(log.rows);
  m.peak_tau_ass_novis = peak_assist(log.shadow);
  m.tau_user_integral = user_effort_integral(log.rows, log.dt);
  m.tau_user_integral_novis = user_effort_integral(log.shadow, log.dt);
  for (const auto& r : log.rows)
    m.state_durations[static_cast<std::size_t>(index_of(r.state))] += log.dt;
  for (const auto& e : log.events) {
    if (e.kind == EventKind::GateRising) m.rising_edges.push_back(e.t);
    if (e.kind == EventKind::GateFalling) m.falling_edges.push_back(e.t);
  }

  if (sc.grasp_events.empty()) {
    m.partial = true;
    return m;
  }
  m.t_grasp = sc.grasp_events.front().t_grasp;
  m.onset_latency = onset_after(log.rows, *m.t_grasp);
  m.latency_novis = onset_after(log.shadow, *m.t_grasp);
  if (m.onset_latency && m.latency_novis)
    m.latency_gain = *m.latency_novis - *m.onset_latency;
  else
    m.partial = true;
  return m;
}

}  // namespace exogate::simkit
