#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "exogate/error.hpp"

namespace exogate {

// Quasi-static sagittal model of the trunk + handled box about the hip.
//
// Angles follow the trunk convention used throughout the library: 0 is
// upright, positive is forward flexion, radians.
struct SubjectParams {
  double m_w = 40.7;   // upper-body mass [kg]
  double m_b = 4.0;    // box mass [kg]
  double g = 9.81;     // gravitational acceleration [m/s^2]
  double l_w = 0.5;    // hip to upper-body COM [m]
  double l_int = 0.45; // hip to interaction pad [m]
  double l_b = 0.3;    // box COM forward of the pad, held constant [m]
};

struct TrunkAngle {
  double theta_w = 0.0;      // [rad]
  double theta_dot_w = 0.0;  // [rad/s]
};

// Returns one message per violated field. m_b may be zero (no box).
inline std::vector<std::string> check_subject(const SubjectParams& p) {
  std::vector<std::string> out;
  auto positive = [&](double v, const char* name) {
    if (!(std::isfinite(v) && v > 0.0)) out.push_back(std::string("subject.") + name + " must be > 0");
  };
  positive(p.m_w, "m_w");
  if (!(std::isfinite(p.m_b) && p.m_b >= 0.0)) out.emplace_back("subject.m_b must be >= 0");
  positive(p.g, "g");
  positive(p.l_w, "l_w");
  positive(p.l_int, "l_int");
  positive(p.l_b, "l_b");
  return out;
}

namespace detail {
inline void require_finite_angle(double theta) {
  if (!std::isfinite(theta)) throw InvalidInput("trunk angle must be finite");
}
}  // namespace detail

// Upper-body gravity moment about the hip.
inline double trunk_gravity_torque(const SubjectParams& p, double theta) {
  detail::require_finite_angle(theta);
  return p.m_w * p.g * p.l_w * std::sin(theta);
}

// Horizontal lever of the box: projection of the pad point plus the constant
// forward offset of the box COM.
inline double box_lever_arm(const SubjectParams& p, double theta) {
  detail::require_finite_angle(theta);
  return p.l_int * std::sin(theta) + p.l_b;
}

inline double box_gravity_torque(const SubjectParams& p, double theta) {
  return p.m_b * p.g * box_lever_arm(p, theta);
}

inline double total_gravity_torque(const SubjectParams& p, double theta) {
  return trunk_gravity_torque(p, theta) + box_gravity_torque(p, theta);
}

// Pad force that would fully unload the user at this posture.
inline double equilibrium_interaction_force(const SubjectParams& p, double theta) {
  if (!(p.l_int > 0.0)) throw InvalidParams("l_int must be > 0");
  return total_gravity_torque(p, theta) / p.l_int;
}

// Residual muscular torque left to the user once tau_ass is delivered.
inline double user_torque(const SubjectParams& p, double theta, double tau_ass) {
  return total_gravity_torque(p, theta) - tau_ass;
}

struct Anthropometrics {
  double total_mass = 0.0;  // [kg]
  double height = 0.0;      // [m]
  double box_mass = 0.0;    // [kg]
};

// Fractions are estimates; override when better measurements exist.
struct AnthropometricOverrides {
  double upper_body_fraction = 0.55;
  double kappa_w = 0.33;    // l_w / height
  double kappa_int = 0.40;  // l_int / height
  double l_b = 0.30;
  double g = 9.81;
  std::optional<double> l_w;    // absolute value wins over kappa_w
  std::optional<double> l_int;  // absolute value wins over kappa_int
};

inline SubjectParams derive_subject_params(const Anthropometrics& a,
                                           const AnthropometricOverrides& o = {}) {
  if (!(std::isfinite(a.total_mass) && a.total_mass > 0.0))
    throw InvalidParams("total_mass must be > 0");
  if (!(std::isfinite(a.height) && a.height > 0.0)) throw InvalidParams("height must be > 0");
  if (!(std::isfinite(a.box_mass) && a.box_mass >= 0.0))
    throw InvalidParams("box_mass must be >= 0");

  SubjectParams p;
  p.m_w = o.upper_body_fraction * a.total_mass;
  p.m_b = a.box_mass;
  p.g = o.g;
  p.l_w = o.l_w.value_or(o.kappa_w * a.height);
  p.l_int = o.l_int.value_or(o.kappa_int * a.height);
  p.l_b = o.l_b;

  auto bad = check_subject(p);
  if (!bad.empty()) throw InvalidParams(bad.front());
  return p;
}

}  // namespace exogate
