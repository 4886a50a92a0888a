#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "exogate/admittance.hpp"
#include "exogate/biomech.hpp"
#include "exogate/fsm.hpp"
#include "exogate/simkit/perception.hpp"
#include "exogate/simkit/trajectory.hpp"
#include "exogate/visiongate.hpp"

namespace exogate::simkit {

enum class SimMode { Scripted, Coupled };

inline const char* to_string(SimMode m) { return m == SimMode::Scripted ? "scripted" : "coupled"; }

// Tracking effort of the synthetic human in coupled mode.
struct IntentGains {
  double K_p = 400.0;  // [N m/rad]
  double K_d = 40.0;   // [N m s/rad]
};

struct TrajectorySpec {
  std::vector<Keyframe> keyframes;
  IntentGains intent;
};

// Subject either given directly or derived from anthropometrics; the derived
// inputs are kept so artifacts can echo them.
struct SubjectSource {
  SubjectParams params;
  std::optional<Anthropometrics> anthropometrics;
  AnthropometricOverrides overrides;
};

struct RunFlags {
  bool no_vision = false;  // gate forced off: posture-only assistance
  bool no_exo = false;     // assistance forced to zero
};

struct Scenario {
  SubjectSource subject;
  ControllerConfig controller;
  PolicyConfig policy;
  GateConfig gate;
  SimMode mode = SimMode::Scripted;
  TrajectorySpec trajectory;
  std::vector<GraspEvent> grasp_events;
  PerceptionConfig perception;
  double duration = 0.0;
  RunFlags flags;
};

inline std::vector<std::string> check_scenario(const Scenario& sc) {
  std::vector<std::string> out;
  auto append = [&](std::vector<std::string> v) {
    out.insert(out.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
  };
  append(check_subject(sc.subject.params));
  append(check_controller(sc.controller));
  append(check_policy(sc.policy));
  append(check_gate(sc.gate));
  append(check_perception(sc.perception));

  const auto& keys = sc.trajectory.keyframes;
  if (keys.size() < 2) out.emplace_back("trajectory.keyframes needs at least 2 entries");
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (!std::isfinite(keys[i].t) || !std::isfinite(keys[i].theta))
      out.push_back("trajectory.keyframes[" + std::to_string(i) + "] must be finite");
    else if (i > 0 && !(keys[i].t > keys[i - 1].t))
      out.push_back("trajectory.keyframes[" + std::to_string(i) + "] time must be > previous");
  }
  if (sc.mode == SimMode::Coupled) {
    if (!(std::isfinite(sc.trajectory.intent.K_p) && sc.trajectory.intent.K_p >= 0.0))
      out.emplace_back("trajectory.intent.K_p must be >= 0");
    if (!(std::isfinite(sc.trajectory.intent.K_d) && sc.trajectory.intent.K_d >= 0.0))
      out.emplace_back("trajectory.intent.K_d must be >= 0");
  }

  for (std::size_t i = 0; i < sc.grasp_events.size(); ++i) {
    const auto& e = sc.grasp_events[i];
    const std::string at = "grasp_events[" + std::to_string(i) + "]";
    if (!std::isfinite(e.t_grasp) || !std::isfinite(e.t_release) || !(e.t_grasp < e.t_release))
      out.push_back(at + " requires t_grasp < t_release");
    if (i > 0 && !(e.t_grasp >= sc.grasp_events[i - 1].t_release))
      out.push_back(at + " overlaps the previous grasp interval");
  }
  if (!(std::isfinite(sc.duration) && sc.duration >= 0.0))
    out.emplace_back("duration must be >= 0");
  return out;
}

inline void require_valid(const Scenario& sc) {
  const auto v = check_scenario(sc);
  if (!v.empty()) throw InvalidConfig(v.front());
}

// Reference fixture: bend, grasp while bent, lift, re-bend, release, stand.
inline Scenario canonical_scenario() {
  Scenario sc;
  sc.subject.params = SubjectParams{40.7, 4.0, 9.81, 0.5, 0.45, 0.3};
  sc.policy.theta_stand = 0.15;
  sc.policy.theta_bend = 0.7;
  sc.policy.gamma = 0.25;
  sc.gate.rho_on = 1.0;
  sc.trajectory.keyframes = {{0.0, 0.0},  {2.0, 0.9}, {3.5, 0.9}, {5.5, 0.05},
                             {6.0, 0.05}, {8.0, 0.9}, {8.5, 0.9}, {10.0, 0.0}};
  sc.grasp_events = {{3.0, 8.2}};
  sc.perception.fps = 50.0;
  sc.perception.seed = 7;
  sc.perception.false_negative_rate = 0.0;
  sc.perception.false_positive_rate = 0.0;
  sc.perception.gaze_dropout_rate = 0.0;
  sc.duration = 12.0;
  return sc;
}

}  // namespace exogate::simkit
