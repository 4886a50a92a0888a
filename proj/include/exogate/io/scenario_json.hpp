#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "exogate/io/json_text.hpp"
#include "exogate/simkit/scenario.hpp"

namespace exogate::io {

// Scenario file schema (unknown keys are rejected at every level):
//
//   subject     {m_w, m_b, g, l_w, l_int, l_b}
//               or {total_mass, height, box_mass, upper_body_fraction,
//                   kappa_w, kappa_int, l_w, l_int, l_b, g}
//   controller  ControllerConfig fields
//   policy      {theta_stand | theta_stand_deg, theta_bend | theta_bend_deg,
//                gamma, release_dwell}
//   gate        {N_on, rho_on, N_off, rho_off, min_confidence}
//   mode        "scripted" | "coupled"
//   trajectory  {keyframes: [[t, theta], ...], intent: {K_p, K_d}}
//   grasp_events [[t_grasp, t_release], ...]
//   perception  {fps, seed, false_negative_rate, false_positive_rate,
//                gaze_dropout_rate}
//   duration    seconds
//
// subject, trajectory, perception.seed and duration are required.

struct ScenarioParse {
  std::optional<simkit::Scenario> scenario;
  std::vector<std::string> violations;

  bool ok() const { return scenario.has_value() && violations.empty(); }
};

namespace detail {

class Block {
 public:
  Block(const Json& j, std::string path, std::vector<std::string>& errs)
      : j_(j), path_(std::move(path)), errs_(errs) {
    if (!j_.is_object()) errs_.push_back(path_ + " must be an object");
  }

  bool has(const char* key) const { return j_.is_object() && j_.contains(key); }

  void number(const char* key, double& out, bool required = false) {
    seen_.insert(key);
    if (!has(key)) {
      if (required) errs_.push_back(at(key) + " is required");
      return;
    }
    const Json& v = j_.at(key);
    if (!v.is_number()) {
      errs_.push_back(at(key) + " must be a number");
      return;
    }
    out = v.get<double>();
  }

  void count(const char* key, std::size_t& out) {
    seen_.insert(key);
    if (!has(key)) return;
    const Json& v = j_.at(key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
      errs_.push_back(at(key) + " must be an integer >= 1");
      return;
    }
    out = static_cast<std::size_t>(v.get<std::int64_t>());
  }

  void seed(const char* key, std::uint64_t& out, bool required) {
    seen_.insert(key);
    if (!has(key)) {
      if (required) errs_.push_back(at(key) + " is required");
      return;
    }
    const Json& v = j_.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                   v.get<std::int64_t>() < 0)) {
      errs_.push_back(at(key) + " must be a non-negative integer");
      return;
    }
    out = v.get<std::uint64_t>();
  }

  // Angle given either in radians under `key` or in degrees under `key_deg`.
  void angle(const char* key, const char* key_deg, double& out) {
    seen_.insert(key);
    seen_.insert(key_deg);
    if (has(key) && has(key_deg)) {
      errs_.push_back(path_ + ": give only one of " + key + " / " + key_deg);
      return;
    }
    if (has(key_deg)) {
      double deg = 0.0;
      number(key_deg, deg);
      out = deg * std::numbers::pi / 180.0;
      return;
    }
    number(key, out);
  }

  const Json* child(const char* key) {
    seen_.insert(key);
    return has(key) ? &j_.at(key) : nullptr;
  }

  void reject_unknown() {
    if (!j_.is_object()) return;
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) errs_.push_back(at(k.c_str()) + ": unknown key");
  }

  std::string at(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  const Json& j_;
  std::string path_;
  std::vector<std::string>& errs_;
  std::set<std::string> seen_;
};

inline bool read_pair(const Json& v, double& a, double& b) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) return false;
  a = v[0].get<double>();
  b = v[1].get<double>();
  return true;
}

inline void read_subject(const Json& j, simkit::SubjectSource& out,
                         std::vector<std::string>& errs) {
  Block b(j, "subject", errs);
  if (b.has("total_mass") || b.has("height")) {
    Anthropometrics a;
    AnthropometricOverrides o;
    b.number("total_mass", a.total_mass, true);
    b.number("height", a.height, true);
    b.number("box_mass", a.box_mass, true);
    b.number("upper_body_fraction", o.upper_body_fraction);
    b.number("kappa_w", o.kappa_w);
    b.number("kappa_int", o.kappa_int);
    b.number("l_b", o.l_b);
    b.number("g", o.g);
    if (b.has("l_w")) {
      double v = 0.0;
      b.number("l_w", v);
      o.l_w = v;
    }
    if (b.has("l_int")) {
      double v = 0.0;
      b.number("l_int", v);
      o.l_int = v;
    }
    b.reject_unknown();
    try {
      out.params = derive_subject_params(a, o);
    } catch (const InvalidParams& e) {
      errs.push_back(std::string("subject.") + e.what());
    }
    out.anthropometrics = a;
    out.overrides = o;
    return;
  }
  SubjectParams& p = out.params;
  b.number("m_w", p.m_w, true);
  b.number("m_b", p.m_b, true);
  b.number("g", p.g);
  b.number("l_w", p.l_w, true);
  b.number("l_int", p.l_int, true);
  b.number("l_b", p.l_b, true);
  b.reject_unknown();
}

inline void read_controller(const Json& j, ControllerConfig& c, std::vector<std::string>& errs) {
  Block b(j, "controller", errs);
  b.number("M", c.M);
  b.number("K_hard", c.K_hard);
  b.number("K_min", c.K_min);
  b.number("C_soft", c.C_soft);
  b.number("zeta", c.zeta);
  b.number("T_K", c.T_K);
  b.number("T_hold", c.T_hold);
  b.number("T_tau", c.T_tau);
  b.number("delta_theta_step", c.delta_theta_step);
  b.number("theta_dot_th", c.theta_dot_th);
  b.number("dt", c.dt);
  b.number("reanchor_rate", c.reanchor_rate);
  b.reject_unknown();
}

inline void read_policy(const Json& j, PolicyConfig& c, std::vector<std::string>& errs) {
  Block b(j, "policy", errs);
  b.angle("theta_stand", "theta_stand_deg", c.theta_stand);
  b.angle("theta_bend", "theta_bend_deg", c.theta_bend);
  b.number("gamma", c.gamma);
  b.number("release_dwell", c.release_dwell);
  b.reject_unknown();
}

inline void read_gate(const Json& j, GateConfig& c, std::vector<std::string>& errs) {
  Block b(j, "gate", errs);
  b.count("N_on", c.N_on);
  b.number("rho_on", c.rho_on);
  b.count("N_off", c.N_off);
  b.number("rho_off", c.rho_off);
  b.number("min_confidence", c.min_confidence);
  b.reject_unknown();
}

inline void read_trajectory(const Json& j, simkit::TrajectorySpec& t,
                            std::vector<std::string>& errs) {
  Block b(j, "trajectory", errs);
  if (const Json* keys = b.child("keyframes")) {
    if (!keys->is_array()) {
      errs.emplace_back("trajectory.keyframes must be an array of [t, theta]");
    } else {
      for (std::size_t i = 0; i < keys->size(); ++i) {
        simkit::Keyframe k;
        if (!read_pair((*keys)[i], k.t, k.theta))
          errs.push_back("trajectory.keyframes[" + std::to_string(i) + "] must be [t, theta]");
        else
          t.keyframes.push_back(k);
      }
    }
  } else {
    errs.emplace_back("trajectory.keyframes is required");
  }
  if (const Json* intent = b.child("intent")) {
    Block ib(*intent, "trajectory.intent", errs);
    ib.number("K_p", t.intent.K_p);
    ib.number("K_d", t.intent.K_d);
    ib.reject_unknown();
  }
  b.reject_unknown();
}

inline void read_perception(const Json& j, simkit::PerceptionConfig& c,
                            std::vector<std::string>& errs) {
  Block b(j, "perception", errs);
  b.number("fps", c.fps);
  b.seed("seed", c.seed, true);
  b.number("false_negative_rate", c.false_negative_rate);
  b.number("false_positive_rate", c.false_positive_rate);
  b.number("gaze_dropout_rate", c.gaze_dropout_rate);
  b.reject_unknown();
}

}  // namespace detail

inline ScenarioParse parse_scenario(const Json& j) {
  ScenarioParse out;
  auto& errs = out.violations;
  simkit::Scenario sc;
  detail::Block top(j, "", errs);
  if (!j.is_object()) return out;

  if (const Json* v = top.child("subject"))
    detail::read_subject(*v, sc.subject, errs);
  else
    errs.emplace_back("subject is required");
  if (const Json* v = top.child("controller")) detail::read_controller(*v, sc.controller, errs);
  if (const Json* v = top.child("policy")) detail::read_policy(*v, sc.policy, errs);
  if (const Json* v = top.child("gate")) detail::read_gate(*v, sc.gate, errs);
  if (const Json* v = top.child("mode")) {
    if (*v == "scripted")
      sc.mode = simkit::SimMode::Scripted;
    else if (*v == "coupled")
      sc.mode = simkit::SimMode::Coupled;
    else
      errs.emplace_back("mode must be \"scripted\" or \"coupled\"");
  }
  if (const Json* v = top.child("trajectory"))
    detail::read_trajectory(*v, sc.trajectory, errs);
  else
    errs.emplace_back("trajectory is required");
  if (const Json* v = top.child("grasp_events")) {
    if (!v->is_array()) {
      errs.emplace_back("grasp_events must be an array of [t_grasp, t_release]");
    } else {
      for (std::size_t i = 0; i < v->size(); ++i) {
        simkit::GraspEvent e;
        if (!detail::read_pair((*v)[i], e.t_grasp, e.t_release))
          errs.push_back("grasp_events[" + std::to_string(i) + "] must be [t_grasp, t_release]");
        else
          sc.grasp_events.push_back(e);
      }
    }
  }
  if (const Json* v = top.child("perception"))
    detail::read_perception(*v, sc.perception, errs);
  else
    errs.emplace_back("perception.seed is required");
  top.number("duration", sc.duration, true);
  top.reject_unknown();

  const auto semantic = simkit::check_scenario(sc);
  for (const auto& s : semantic)
    if (std::find(errs.begin(), errs.end(), s) == errs.end()) errs.push_back(s);
  out.scenario = std::move(sc);
  return out;
}

inline ScenarioParse parse_scenario_text(const std::string& text, const std::string& source) {
  return parse_scenario(parse_json_text(text, source));
}

// Parses and validates; throws InvalidConfig listing the first violation.
inline simkit::Scenario load_scenario(const Json& j) {
  auto r = parse_scenario(j);
  if (!r.violations.empty()) throw InvalidConfig(r.violations.front());
  return std::move(*r.scenario);
}

inline Json to_json(const simkit::Scenario& sc) {
  Json j;
  const auto& s = sc.subject;
  if (s.anthropometrics) {
    Json sub = {{"total_mass", s.anthropometrics->total_mass},
                {"height", s.anthropometrics->height},
                {"box_mass", s.anthropometrics->box_mass},
                {"upper_body_fraction", s.overrides.upper_body_fraction},
                {"kappa_w", s.overrides.kappa_w},
                {"kappa_int", s.overrides.kappa_int},
                {"l_b", s.overrides.l_b},
                {"g", s.overrides.g}};
    if (s.overrides.l_w) sub["l_w"] = *s.overrides.l_w;
    if (s.overrides.l_int) sub["l_int"] = *s.overrides.l_int;
    j["subject"] = sub;
  } else {
    j["subject"] = {{"m_w", s.params.m_w}, {"m_b", s.params.m_b}, {"g", s.params.g},
                    {"l_w", s.params.l_w}, {"l_int", s.params.l_int}, {"l_b", s.params.l_b}};
  }
  const auto& c = sc.controller;
  j["controller"] = {{"M", c.M},
                     {"K_hard", c.K_hard},
                     {"K_min", c.K_min},
                     {"C_soft", c.C_soft},
                     {"zeta", c.zeta},
                     {"T_K", c.T_K},
                     {"T_hold", c.T_hold},
                     {"T_tau", c.T_tau},
                     {"delta_theta_step", c.delta_theta_step},
                     {"theta_dot_th", c.theta_dot_th},
                     {"dt", c.dt},
                     {"reanchor_rate", c.reanchor_rate}};
  j["policy"] = {{"theta_stand", sc.policy.theta_stand},
                 {"theta_bend", sc.policy.theta_bend},
                 {"gamma", sc.policy.gamma},
                 {"release_dwell", sc.policy.release_dwell}};
  j["gate"] = {{"N_on", sc.gate.N_on},
               {"rho_on", sc.gate.rho_on},
               {"N_off", sc.gate.N_off},
               {"rho_off", sc.gate.rho_off},
               {"min_confidence", sc.gate.min_confidence}};
  j["mode"] = simkit::to_string(sc.mode);
  Json keys = Json::array();
  for (const auto& k : sc.trajectory.keyframes) keys.push_back({k.t, k.theta});
  j["trajectory"] = {{"keyframes", keys},
                     {"intent", {{"K_p", sc.trajectory.intent.K_p},
                                 {"K_d", sc.trajectory.intent.K_d}}}};
  Json grasps = Json::array();
  for (const auto& e : sc.grasp_events) grasps.push_back({e.t_grasp, e.t_release});
  j["grasp_events"] = grasps;
  const auto& p = sc.perception;
  j["perception"] = {{"fps", p.fps},
                     {"seed", p.seed},
                     {"false_negative_rate", p.false_negative_rate},
                     {"false_positive_rate", p.false_positive_rate},
                     {"gaze_dropout_rate", p.gaze_dropout_rate}};
  j["duration"] = sc.duration;
  return j;
}

}  // namespace exogate::io
