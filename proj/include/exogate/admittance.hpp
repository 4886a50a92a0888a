#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "exogate/error.hpp"
#include "exogate/smoothstep.hpp"

namespace exogate {

// Variable admittance controller
//
//   M th'' + C th' + K (th - th_ref) = tau_meas + tau_ass
//
// with (K, C) scheduled between a backdrivable Soft mode (K = 0, C = C_soft)
// and a Hard mode (K = K_hard, C = 2 zeta sqrt(M K)). Every gain switch and
// every change of assistance target is blended with a smoothstep ramp.
//
// Units are SI: kg m^2, N m s/rad, N m/rad, seconds, radians.

struct ControllerConfig {
  double M = 0.5;
  double K_hard = 40.0;
  double K_min = 10.0;
  double C_soft = 5.0;
  double zeta = 0.9;
  double T_K = 0.4;
  double T_hold = 0.5;
  double T_tau = 0.8;
  double delta_theta_step = 0.07;
  double theta_dot_th = 0.2;
  double dt = 0.01;
  // Idle re-anchoring rate of the reference toward the measured angle [1/s].
  double reanchor_rate = 2.0;
};

inline std::vector<std::string> check_controller(const ControllerConfig& c) {
  std::vector<std::string> out;
  auto need = [&](bool ok, const char* msg) {
    if (!ok) out.push_back(std::string("controller.") + msg);
  };
  auto pos = [](double v) { return std::isfinite(v) && v > 0.0; };
  need(pos(c.M), "M must be > 0");
  need(std::isfinite(c.K_min) && c.K_min >= 0.0, "K_min must be >= 0");
  need(std::isfinite(c.K_hard) && c.K_hard >= c.K_min, "K_hard >= K_min required");
  need(std::isfinite(c.C_soft) && c.C_soft >= 0.0, "C_soft must be >= 0");
  need(std::isfinite(c.zeta) && c.zeta > 0.0 && c.zeta <= 2.0, "zeta must be in (0, 2]");
  need(pos(c.T_K), "T_K must be > 0");
  need(pos(c.T_hold), "T_hold must be > 0");
  need(pos(c.T_tau), "T_tau must be > 0");
  need(pos(c.delta_theta_step), "delta_theta_step must be > 0");
  need(std::isfinite(c.theta_dot_th) && c.theta_dot_th >= 0.0, "theta_dot_th must be >= 0");
  need(pos(c.dt), "dt must be > 0");
  need(std::isfinite(c.reanchor_rate) && c.reanchor_rate >= 0.0, "reanchor_rate must be >= 0");
  return out;
}

enum class GainMode { Soft, Hard };

inline const char* to_string(GainMode m) { return m == GainMode::Soft ? "soft" : "hard"; }

struct ControllerState {
  double theta = 0.0;
  double theta_dot = 0.0;
  double theta_ref = 0.0;

  GainMode mode = GainMode::Soft;
  double K_current = 0.0;
  double C_current = 0.0;
  double K_start = 0.0;
  double K_target = 0.0;
  double C_start = 0.0;
  double ramp_t0 = 0.0;
  double hold_until = 0.0;

  double tau_ass_current = 0.0;
  double tau_ass_start = 0.0;
  double tau_ass_ref = 0.0;
  double tau_ramp_t0 = 0.0;
  int tau_target_key = 0;

  std::optional<double> last_gain_t;
  std::optional<double> last_ramp_t;
};

inline ControllerState make_controller_state(const ControllerConfig& cfg, double theta0 = 0.0) {
  ControllerState st;
  st.theta = theta0;
  st.theta_ref = theta0;
  st.C_current = cfg.C_soft;
  st.C_start = cfg.C_soft;
  return st;
}

inline double hard_damping(const ControllerConfig& cfg, double K) {
  return 2.0 * cfg.zeta * std::sqrt(cfg.M * K);
}

inline bool gain_ramp_complete(const ControllerState& st, double t, const ControllerConfig& cfg) {
  return (t - st.ramp_t0) / cfg.T_K >= 1.0;
}

// Stiffness scheduling with smoothstep ramps and a Hard-mode hold time.
//
// Soft -> Hard fires on |theta_dot| > theta_dot_th and arms the hold timer;
// Hard -> Soft requires both the hold to have elapsed and slow motion. A
// re-trigger during an unfinished ramp restarts from the current gains so
// K and C stay continuous. C is blended linearly across the ramp window and
// lands exactly on its mode value when the ramp completes.
inline ControllerState schedule_gains(ControllerState st, double theta_dot, double t,
                                      const ControllerConfig& cfg) {
  if (st.last_gain_t && t < *st.last_gain_t)
    throw ContractViolation("schedule_gains: time went backwards");
  st.last_gain_t = t;

  const bool fast = std::abs(theta_dot) > cfg.theta_dot_th;
  if (st.mode == GainMode::Soft && fast) {
    st.mode = GainMode::Hard;
    st.K_start = st.K_current;
    st.C_start = st.C_current;
    st.K_target = cfg.K_hard;
    st.ramp_t0 = t;
    st.hold_until = t + cfg.T_hold;
  } else if (st.mode == GainMode::Hard && !fast && t >= st.hold_until) {
    st.mode = GainMode::Soft;
    st.K_start = st.K_current;
    st.C_start = st.C_current;
    st.K_target = 0.0;
    st.ramp_t0 = t;
  }

  const double u = (t - st.ramp_t0) / cfg.T_K;
  if (u >= 1.0) {
    st.K_current = st.K_target;
    st.C_current = st.mode == GainMode::Hard ? hard_damping(cfg, st.K_current) : cfg.C_soft;
    return st;
  }
  st.K_current = st.K_start + (st.K_target - st.K_start) * smoothstep(u);
  const double c_end = st.mode == GainMode::Hard ? hard_damping(cfg, st.K_current) : cfg.C_soft;
  const double w = u <= 0.0 ? 0.0 : u;
  st.C_current = (1.0 - w) * st.C_start + w * c_end;
  return st;
}

// Lead reference: steps by delta_theta_step in the direction of motion, never
// leading the measured angle by more than one step. While idle it relaxes
// toward the measured angle at reanchor_rate.
inline ControllerState update_reference(ControllerState st, double theta, double theta_dot,
                                        const ControllerConfig& cfg) {
  if (!std::isfinite(theta) || !std::isfinite(theta_dot))
    throw InvalidInput("update_reference: non-finite input");
  if (std::abs(theta_dot) > cfg.theta_dot_th) {
    const double step = theta_dot > 0.0 ? cfg.delta_theta_step : -cfg.delta_theta_step;
    const double lo = theta - cfg.delta_theta_step;
    const double hi = theta + cfg.delta_theta_step;
    double next = st.theta_ref + step;
    if (next < lo) next = lo;
    if (next > hi) next = hi;
    st.theta_ref = next;
  } else {
    st.theta_ref += cfg.reanchor_rate * (theta - st.theta_ref) * cfg.dt;
  }
  return st;
}

inline constexpr double kTorqueRetargetTolerance = 1e-6;

// Smoothstep ramp of the delivered assistance toward tau_ref.
//
// Without a key, a new ramp starts whenever tau_ref moves by more than
// kTorqueRetargetTolerance. With a key (the active contribution set), a new
// ramp starts only when the key changes and tau_ref may keep tracking posture
// in between; the blend then follows the live target.
inline ControllerState ramp_assist_torque(ControllerState st, double tau_ref, double t,
                                          const ControllerConfig& cfg,
                                          std::optional<int> target_key = std::nullopt) {
  if (st.last_ramp_t && t < *st.last_ramp_t)
    throw ContractViolation("ramp_assist_torque: time went backwards");
  st.last_ramp_t = t;

  const bool retarget = target_key
                            ? *target_key != st.tau_target_key
                            : std::abs(tau_ref - st.tau_ass_ref) > kTorqueRetargetTolerance;
  if (retarget) {
    st.tau_ass_start = st.tau_ass_current;
    st.tau_ramp_t0 = t;
    if (target_key) st.tau_target_key = *target_key;
  }
  st.tau_ass_ref = tau_ref;

  const double u = (t - st.tau_ramp_t0) / cfg.T_tau;
  st.tau_ass_current =
      u >= 1.0 ? tau_ref : st.tau_ass_start + (tau_ref - st.tau_ass_start) * smoothstep(u);
  return st;
}

// One semi-implicit Euler step: velocity first, then position with the new
// velocity.
inline ControllerState step_admittance(ControllerState st, double tau_meas, double dt,
                                       const ControllerConfig& cfg) {
  if (!(cfg.M > 0.0)) throw InvalidConfig("controller.M must be > 0");
  if (!(dt > 0.0)) throw InvalidConfig("step_admittance: dt must be > 0");
  const double accel = (tau_meas + st.tau_ass_current - st.C_current * st.theta_dot -
                        st.K_current * (st.theta - st.theta_ref)) /
                       cfg.M;
  st.theta_dot += accel * dt;
  st.theta += st.theta_dot * dt;
  return st;
}

// Kinetic plus spring energy of the virtual system.
inline double virtual_energy(const ControllerState& st, const ControllerConfig& cfg) {
  const double e = st.theta - st.theta_ref;
  return 0.5 * cfg.M * st.theta_dot * st.theta_dot + 0.5 * st.K_current * e * e;
}

}  // namespace exogate
