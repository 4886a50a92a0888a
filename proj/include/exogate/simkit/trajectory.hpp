#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "exogate/error.hpp"
#include "exogate/smoothstep.hpp"

namespace exogate::simkit {

struct Keyframe {
  double t = 0.0;
  double theta = 0.0;
};

struct TrajectorySample {
  double theta = 0.0;
  double theta_dot = 0.0;
};

// Piecewise smoothstep interpolant through keyframes. C1: the velocity is the
// analytic derivative and vanishes at every keyframe. Held constant outside
// the keyframe span.
class Trajectory {
 public:
  Trajectory() = default;

  explicit Trajectory(std::vector<Keyframe> keys) : keys_(std::move(keys)) {
    if (keys_.size() < 2) throw InvalidConfig("trajectory needs at least 2 keyframes");
    for (std::size_t i = 0; i < keys_.size(); ++i) {
      if (!std::isfinite(keys_[i].t) || !std::isfinite(keys_[i].theta))
        throw InvalidConfig("trajectory keyframes must be finite");
      if (i > 0 && !(keys_[i].t > keys_[i - 1].t))
        throw InvalidConfig("trajectory keyframe times must be strictly increasing");
    }
  }

  TrajectorySample sample(double t) const {
    if (keys_.empty()) return {};
    if (t <= keys_.front().t) return {keys_.front().theta, 0.0};
    if (t >= keys_.back().t) return {keys_.back().theta, 0.0};

    std::size_t i = 1;
    while (keys_[i].t < t) ++i;
    const Keyframe& a = keys_[i - 1];
    const Keyframe& b = keys_[i];
    const double span = b.t - a.t;
    const double u = (t - a.t) / span;
    const double delta = b.theta - a.theta;
    return {a.theta + delta * smoothstep(u), delta * smoothstep_derivative(u) / span};
  }

  const std::vector<Keyframe>& keyframes() const { return keys_; }
  double start_time() const { return keys_.empty() ? 0.0 : keys_.front().t; }
  double end_time() const { return keys_.empty() ? 0.0 : keys_.back().t; }

 private:
  std::vector<Keyframe> keys_;
};

// theta(i dt), theta_dot(i dt) for i in [0, ticks).
inline std::vector<TrajectorySample> synth_trajectory(const std::vector<Keyframe>& keys, double dt,
                                                      std::size_t ticks) {
  if (!(dt > 0.0)) throw InvalidConfig("synth_trajectory: dt must be > 0");
  const Trajectory traj(keys);
  std::vector<TrajectorySample> out;
  out.reserve(ticks);
  for (std::size_t i = 0; i < ticks; ++i) out.push_back(traj.sample(static_cast<double>(i) * dt));
  return out;
}

}  // namespace exogate::simkit
