#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "exogate/biomech.hpp"

namespace exogate {

// Stoop-lift task cycle 0 -> 1 -> 2 -> 3 -> 0.
enum class TaskState : int {
  StandNoBox = 0,
  BendToPick = 1,
  StandWithBox = 2,
  BendToPlace = 3,
};

inline const char* to_string(TaskState s) {
  switch (s) {
    case TaskState::StandNoBox: return "stand_no_box";
    case TaskState::BendToPick: return "bend_to_pick";
    case TaskState::StandWithBox: return "stand_with_box";
    case TaskState::BendToPlace: return "bend_to_place";
  }
  return "?";
}

inline int index_of(TaskState s) { return static_cast<int>(s); }

// Which gravity terms feed the assistance reference.
struct Contributions {
  bool trunk = false;  // alpha_w
  bool box = false;    // alpha_b

  friend bool operator==(const Contributions&, const Contributions&) = default;

  int key() const { return (trunk ? 1 : 0) | (box ? 2 : 0); }
};

// Contributions of the state entered by each transition row, indexed by the
// destination state.
inline constexpr std::array<Contributions, 4> kTransitionContributions = {{
    {true, false},  // 3 -> 0
    {false, false}, // 0 -> 1
    {true, true},   // 1 -> 2
    {false, true},  // 2 -> 3
}};

inline constexpr Contributions kBaselineContributions{false, false};

struct PolicyConfig {
  double theta_stand = 0.15;  // [rad]
  double theta_bend = 0.7;    // [rad]
  double gamma = 0.25;
  // Post-place trunk assistance is released after this long upright and still [s].
  double release_dwell = 0.5;
  std::array<Contributions, 4> alpha = kTransitionContributions;
};

inline std::vector<std::string> check_policy(const PolicyConfig& c) {
  std::vector<std::string> out;
  if (!std::isfinite(c.theta_stand) || !std::isfinite(c.theta_bend) ||
      !(c.theta_stand < c.theta_bend))
    out.emplace_back("policy.theta_stand < theta_bend required");
  if (!(std::isfinite(c.gamma) && c.gamma > 0.0 && c.gamma <= 1.0))
    out.emplace_back("policy.gamma must be in (0, 1]");
  if (!(std::isfinite(c.release_dwell) && c.release_dwell >= 0.0))
    out.emplace_back("policy.release_dwell must be >= 0");
  if (c.alpha != kTransitionContributions)
    out.emplace_back("policy.alpha must match the transition table");
  return out;
}

struct FsmStep {
  TaskState state = TaskState::StandNoBox;
  Contributions alpha;
  bool transitioned = false;
};

// Transition table, one transition per call at most. Thresholds are inclusive.
//
//   0 -> 1  theta >= theta_bend
//   1 -> 2  theta <= theta_stand  or  gate
//   2 -> 3  theta >= theta_bend
//   3 -> 0  theta <= theta_stand  or  !gate
//
// bend_armed = false suppresses the two theta >= theta_bend triggers; the
// TaskPolicy below uses it to demand a fresh bend after a state was entered
// while already bent.
//
// A self-loop reports the contributions of the current state; state 0 reports
// the baseline (0, 0).
inline FsmStep fsm_step(TaskState s, double theta, bool gate, const PolicyConfig& cfg,
                        bool bend_armed = true) {
  const bool bent = bend_armed && theta >= cfg.theta_bend;
  const bool upright = theta <= cfg.theta_stand;

  TaskState next = s;
  switch (s) {
    case TaskState::StandNoBox:
      if (bent) next = TaskState::BendToPick;
      break;
    case TaskState::BendToPick:
      if (upright || gate) next = TaskState::StandWithBox;
      break;
    case TaskState::StandWithBox:
      if (bent) next = TaskState::BendToPlace;
      break;
    case TaskState::BendToPlace:
      if (upright || !gate) next = TaskState::StandNoBox;
      break;
  }

  FsmStep out;
  out.state = next;
  out.transitioned = next != s;
  if (out.transitioned || next != TaskState::StandNoBox)
    out.alpha = cfg.alpha[static_cast<std::size_t>(index_of(next))];
  else
    out.alpha = kBaselineContributions;
  return out;
}

// The box term is only admitted while the vision gate is on.
inline Contributions gated_contributions(Contributions a, bool gate) {
  return {a.trunk, a.box && gate};
}

inline double assist_reference(const SubjectParams& p, double theta, Contributions a,
                               double gamma) {
  double tau = 0.0;
  if (a.trunk) tau += trunk_gravity_torque(p, theta);
  if (a.box) tau += box_gravity_torque(p, theta);
  return gamma * tau;
}

// Stateful wrapper owned by the control loop.
//
// Adds what the bare table cannot express: bend re-arming, and the (1, 0)
// contribution after 3 -> 0 held until the user has stood still for
// release_dwell and the running torque ramp has settled.
class TaskPolicy {
 public:
  explicit TaskPolicy(PolicyConfig cfg, double theta_dot_th)
      : cfg_(cfg), theta_dot_th_(theta_dot_th) {}

  struct Input {
    double theta = 0.0;
    double theta_dot = 0.0;
    bool gate = false;
    double dt = 0.0;
    bool assist_settled = true;
  };

  struct Output {
    TaskState from = TaskState::StandNoBox;
    TaskState state = TaskState::StandNoBox;
    Contributions alpha;
    bool transitioned = false;
    bool released = false;  // post-place trunk assistance dropped this tick
  };

  Output step(const Input& in) {
    if (in.theta < cfg_.theta_bend) armed_ = true;

    const FsmStep r = fsm_step(state_, in.theta, in.gate, cfg_, armed_);
    Output out;
    out.from = state_;
    out.transitioned = r.transitioned;
    state_ = r.state;

    if (r.transitioned) {
      if (in.theta >= cfg_.theta_bend) armed_ = false;
      hold_trunk_ = state_ == TaskState::StandNoBox;
      still_time_ = 0.0;
    } else if (state_ == TaskState::StandNoBox && hold_trunk_) {
      const bool still =
          in.theta <= cfg_.theta_stand && std::abs(in.theta_dot) <= theta_dot_th_;
      still_time_ = still ? still_time_ + in.dt : 0.0;
      if (still_time_ >= cfg_.release_dwell && in.assist_settled) {
        hold_trunk_ = false;
        out.released = true;
      }
    }

    out.state = state_;
    out.alpha = (state_ == TaskState::StandNoBox && hold_trunk_) ? cfg_.alpha[0] : r.alpha;
    return out;
  }

  TaskState state() const { return state_; }
  bool bend_armed() const { return armed_; }
  const PolicyConfig& config() const { return cfg_; }

 private:
  PolicyConfig cfg_;
  double theta_dot_th_;
  TaskState state_ = TaskState::StandNoBox;
  bool armed_ = true;
  bool hold_trunk_ = false;
  double still_time_ = 0.0;
};

}  // namespace exogate
