#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "exogate/admittance.hpp"
#include "exogate/biomech.hpp"
#include "exogate/error.hpp"
#include "exogate/format.hpp"
#include "exogate/fsm.hpp"
#include "exogate/simkit/perception.hpp"
#include "exogate/simkit/scenario.hpp"
#include "exogate/simkit/trajectory.hpp"
#include "exogate/visiongate.hpp"

namespace exogate::simkit {

struct IntentTorque {
  double tau_user = 0.0;
  double tau_meas = 0.0;
};

// Synthetic human in coupled mode. The user holds the trunk against gravity
// minus whatever the exoskeleton delivers, plus a PD effort toward the
// intended posture. tau_meas is the net external torque seen by the
// admittance (user effort plus the gravity load), so that
// tau_meas + tau_ass reduces to the tracking effort.
inline IntentTorque human_intent_torque(double theta, double theta_dot, double theta_des,
                                        double theta_dot_des, double tau_ass,
                                        const SubjectParams& p, const IntentGains& gains) {
  const double tau_g = total_gravity_torque(p, theta);
  IntentTorque out;
  out.tau_user =
      tau_g - tau_ass + gains.K_p * (theta_des - theta) + gains.K_d * (theta_dot_des - theta_dot);
  out.tau_meas = out.tau_user - tau_g;
  return out;
}

struct SimRow {
  double t = 0.0;
  double theta_w = 0.0;
  double theta_dot_w = 0.0;
  double theta_ref = 0.0;
  TaskState state = TaskState::StandNoBox;
  bool alpha_w = false;
  bool alpha_b = false;  // after gating
  bool gate = false;
  double tau_w = 0.0;
  double tau_box = 0.0;
  double tau_ass_ref = 0.0;
  double tau_ass = 0.0;
  double K = 0.0;
  double C = 0.0;
  GainMode mode = GainMode::Soft;
  double tau_meas = 0.0;
  double tau_user = 0.0;
};

enum class EventKind { GateRising, GateFalling, Transition, Anomaly };

inline const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::GateRising: return "gate_rising";
    case EventKind::GateFalling: return "gate_falling";
    case EventKind::Transition: return "fsm_transition";
    case EventKind::Anomaly: return "anomaly";
  }
  return "?";
}

struct SimEvent {
  double t = 0.0;
  std::size_t tick = 0;
  EventKind kind = EventKind::Anomaly;
  std::string detail;
};

struct SimLog {
  double dt = 0.0;
  std::vector<SimRow> rows;
  std::vector<SimRow> shadow;  // same inputs, gate forced off
  std::vector<SimEvent> events;
};

inline std::size_t tick_count(double duration, double dt) {
  if (!(duration > 0.0)) return 0;
  return static_cast<std::size_t>(std::floor(duration / dt + 1e-9));
}

namespace detail {

// One controller instance: task policy plus admittance state.
struct Channel {
  Channel(const Scenario& sc, double theta0, bool gate_forced_off)
      : ctrl(make_controller_state(sc.controller, theta0)),
        policy(sc.policy, sc.controller.theta_dot_th),
        gate_off(gate_forced_off) {}

  ControllerState ctrl;
  TaskPolicy policy;
  bool gate_off;
  bool overcompensating = false;
};

struct TickInput {
  std::size_t tick = 0;
  double t = 0.0;
  double theta = 0.0;
  double theta_dot = 0.0;
  bool gate = false;
  // Coupled mode only.
  std::optional<TrajectorySample> desired;
};

inline SimRow tick_channel(Channel& ch, const Scenario& sc, const TickInput& in,
                           std::vector<SimEvent>* events) {
  const ControllerConfig& cc = sc.controller;
  const SubjectParams& p = sc.subject.params;
  const bool gate = in.gate && !ch.gate_off;

  const bool settled = (in.t - ch.ctrl.tau_ramp_t0) >= cc.T_tau;
  const auto pol = ch.policy.step({in.theta, in.theta_dot, gate, cc.dt, settled});
  if (events && pol.transitioned) {
    events->push_back({in.t, in.tick, EventKind::Transition,
                       std::to_string(index_of(pol.from)) + "->" +
                           std::to_string(index_of(pol.state))});
  }

  const Contributions alpha = gated_contributions(pol.alpha, gate);
  SimRow row;
  row.t = in.t;
  row.theta_w = in.theta;
  row.theta_dot_w = in.theta_dot;
  row.state = pol.state;
  row.alpha_w = alpha.trunk;
  row.alpha_b = alpha.box;
  row.gate = gate;
  row.tau_w = trunk_gravity_torque(p, in.theta);
  row.tau_box = box_gravity_torque(p, in.theta);

  const double tau_ref = sc.flags.no_exo ? 0.0 : assist_reference(p, in.theta, alpha, sc.policy.gamma);
  const int key = sc.flags.no_exo ? 0 : alpha.key();
  ch.ctrl = ramp_assist_torque(ch.ctrl, tau_ref, in.t, cc, key);
  ch.ctrl = schedule_gains(ch.ctrl, in.theta_dot, in.t, cc);
  ch.ctrl = update_reference(ch.ctrl, in.theta, in.theta_dot, cc);

  double tau_user = 0.0;
  double tau_meas = 0.0;
  if (in.desired) {
    const auto h = human_intent_torque(in.theta, in.theta_dot, in.desired->theta,
                                       in.desired->theta_dot, ch.ctrl.tau_ass_current, p,
                                       sc.trajectory.intent);
    tau_user = h.tau_user;
    tau_meas = h.tau_meas;
  } else {
    tau_user = user_torque(p, in.theta, ch.ctrl.tau_ass_current);
    tau_meas = tau_user - total_gravity_torque(p, in.theta);
  }

  if (events) {
    const bool over = tau_user < 0.0;
    if (over && !ch.overcompensating)
      events->push_back({in.t, in.tick, EventKind::Anomaly, "overcompensation: tau_user < 0"});
    ch.overcompensating = over;
  }

  row.tau_ass_ref = tau_ref;
  row.tau_ass = ch.ctrl.tau_ass_current;
  row.K = ch.ctrl.K_current;
  row.C = ch.ctrl.C_current;
  row.mode = ch.ctrl.mode;
  row.theta_ref = ch.ctrl.theta_ref;
  row.tau_meas = tau_meas;
  row.tau_user = tau_user;

  ch.ctrl = step_admittance(ch.ctrl, tau_meas, cc.dt, cc);
  return row;
}

inline bool row_finite(const SimRow& r) {
  for (double v : {r.theta_w, r.theta_dot_w, r.theta_ref, r.tau_w, r.tau_box, r.tau_ass_ref,
                   r.tau_ass, r.K, r.C, r.tau_meas, r.tau_user})
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace detail

// Fixed-tick closed loop. Each tick: read the trunk angle (trajectory or
// admittance plant), sample the latest committed gate value, step the task
// policy, form the assistance reference, ramp it, schedule gains, update the
// lead reference, integrate the admittance, and log. A shadow controller with
// the gate forced off runs on the same inputs.
//
// frames overrides the synthetic perception stream (replay).
inline SimLog run_scenario(const Scenario& sc,
                           const std::optional<std::vector<Frame>>& frames = std::nullopt) {
  require_valid(sc);
  const double dt = sc.controller.dt;
  const Trajectory traj(sc.trajectory.keyframes);
  const std::vector<Frame> stream =
      frames ? *frames
             : synth_perception(traj, sc.grasp_events, sc.policy.theta_bend, sc.duration,
                                sc.perception);
  for (std::size_t k = 1; k < stream.size(); ++k)
    if (!(stream[k].t > stream[k - 1].t))
      throw InvalidConfig("frame timestamps must be strictly increasing");

  SimLog log;
  log.dt = dt;
  const std::size_t n = tick_count(sc.duration, dt);
  log.rows.reserve(n);
  log.shadow.reserve(n);

  const double theta0 = traj.sample(0.0).theta;
  detail::Channel main(sc, theta0, sc.flags.no_vision);
  detail::Channel shadow(sc, theta0, true);

  GateState gs = make_gate_state(sc.gate);
  GateSnapshot snapshot;
  std::size_t next_frame = 0;
  bool clamped = false;
  constexpr double kFrameSlack = 1e-9;

  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * dt;

    // Perception runs at its own rate; the control tick sees the last commit.
    while (next_frame < stream.size() && stream[next_frame].t <= t + kFrameSlack) {
      const Frame& f = stream[next_frame];
      const GateState prev = gs;
      const Indicators ind = frame_indicators(f, sc.gate.min_confidence);
      advance_gate(gs, ind.grasped, ind.not_grasped, sc.gate);
      if (const auto edge = edge_events(prev, gs)) {
        const TaskState s = main.policy.state();
        log.events.push_back({t, i,
                              *edge == GateEdge::Rising ? EventKind::GateRising
                                                        : EventKind::GateFalling,
                              "frame t=" + format9(f.t)});
        if (*edge == GateEdge::Rising && s == TaskState::StandNoBox)
          log.events.push_back({t, i, EventKind::Anomaly, "gate rose in state 0"});
        if (*edge == GateEdge::Falling && s == TaskState::StandWithBox)
          log.events.push_back({t, i, EventKind::Anomaly, "gate fell in state 2"});
      }
      snapshot.publish(gs);
      ++next_frame;
    }
    const bool gate = snapshot.read().gate;

    detail::TickInput in;
    in.tick = i;
    in.t = t;
    in.gate = gate;
    if (sc.mode == SimMode::Scripted) {
      const auto s = traj.sample(t);
      in.theta = s.theta;
      in.theta_dot = s.theta_dot;
    } else {
      in.theta = main.ctrl.theta;
      in.theta_dot = main.ctrl.theta_dot;
      in.desired = traj.sample(t);
    }

    const bool outside = in.theta < 0.0 || in.theta > std::numbers::pi / 2.0;
    if (outside) {
      if (!clamped)
        log.events.push_back({t, i, EventKind::Anomaly, "trunk angle outside [0, pi/2], clamped"});
      in.theta = std::clamp(in.theta, 0.0, std::numbers::pi / 2.0);
    }
    clamped = outside;

    if (!std::isfinite(in.theta) || !std::isfinite(in.theta_dot))
      throw SimulationAbort(i, "non-finite trunk state");

    SimRow row = detail::tick_channel(main, sc, in, &log.events);
    SimRow shadow_row = detail::tick_channel(shadow, sc, in, nullptr);
    if (!detail::row_finite(row) || !detail::row_finite(shadow_row) ||
        !std::isfinite(main.ctrl.theta) || !std::isfinite(main.ctrl.theta_dot))
      throw SimulationAbort(i, "non-finite controller state");

    log.rows.push_back(row);
    log.shadow.push_back(shadow_row);
  }
  return log;
}

}  // namespace exogate::simkit
