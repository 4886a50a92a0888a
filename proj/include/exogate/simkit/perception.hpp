#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "exogate/simkit/trajectory.hpp"
#include "exogate/visiongate.hpp"

namespace exogate::simkit {

struct GraspEvent {
  double t_grasp = 0.0;
  double t_release = 0.0;
};

// Synthetic stand-in for the egocentric detector + gaze tracker.
struct PerceptionConfig {
  double fps = 50.0;
  std::uint64_t seed = 0;
  double false_negative_rate = 0.06;  // detection missing from a frame (estimate)
  double false_positive_rate = 0.04;  // detection carries the wrong label (estimate)
  double gaze_dropout_rate = 0.0;    // no fixation reported
};

inline std::vector<std::string> check_perception(const PerceptionConfig& c) {
  std::vector<std::string> out;
  auto rate = [&](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) out.push_back(std::string("perception.") + name + " must be in [0, 1]");
  };
  if (!(std::isfinite(c.fps) && c.fps > 0.0)) out.emplace_back("perception.fps must be > 0");
  rate(c.false_negative_rate, "false_negative_rate");
  rate(c.false_positive_rate, "false_positive_rate");
  rate(c.gaze_dropout_rate, "gaze_dropout_rate");
  return out;
}

// Counter-based generator: every draw is a pure function of (seed, frame,
// channel), so noise does not depend on the order frames are consumed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline double uniform01(std::uint64_t seed, std::uint64_t frame, std::uint64_t channel) {
  const std::uint64_t h = splitmix64(splitmix64(seed ^ splitmix64(frame)) + channel);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

enum NoiseChannel : std::uint64_t {
  kChannelDetectionDrop = 1,
  kChannelLabelFlip = 2,
  kChannelGazeDrop = 3,
  kChannelGazeJitterX = 4,
  kChannelGazeJitterY = 5,
};

inline bool grasp_active(const std::vector<GraspEvent>& events, double t) {
  for (const auto& e : events)
    if (t >= e.t_grasp && t < e.t_release) return true;
  return false;
}

struct PerceptionScene {
  BoundingBox box{0.38, 0.40, 0.62, 0.70};
  GazePoint idle_gaze{0.5, 0.2};  // looking ahead, above the bin
  double detection_confidence = 0.9;
  double visibility_fraction = 0.5;  // box in view once theta >= this * theta_bend
};

inline std::size_t frame_count(double duration, double fps) {
  if (!(duration > 0.0)) return 0;
  return static_cast<std::size_t>(std::ceil(duration * fps - 1e-9));
}

// Frame k is stamped k / fps. While a grasp is active the box is reported as
// Grasped and fixated; otherwise it is NotGrasped and only in view when the
// trunk is bent far enough to look into the bin.
inline std::vector<Frame> synth_perception(const Trajectory& theta_of_t,
                                           const std::vector<GraspEvent>& grasps,
                                           double theta_bend, double duration,
                                           const PerceptionConfig& cfg,
                                           const PerceptionScene& scene = {}) {
  std::vector<Frame> frames;
  const std::size_t n = frame_count(duration, cfg.fps);
  frames.reserve(n);
  const double half_w = 0.5 * (scene.box.x_max - scene.box.x_min);
  const double half_h = 0.5 * (scene.box.y_max - scene.box.y_min);
  const double cx = scene.box.x_min + half_w;
  const double cy = scene.box.y_min + half_h;

  for (std::size_t k = 0; k < n; ++k) {
    Frame f;
    f.t = static_cast<double>(k) / cfg.fps;
    const bool held = grasp_active(grasps, f.t);
    const bool in_view =
        held || theta_of_t.sample(f.t).theta >= scene.visibility_fraction * theta_bend;

    if (in_view) {
      if (uniform01(cfg.seed, k, kChannelDetectionDrop) >= cfg.false_negative_rate) {
        Detection d;
        d.bbox = scene.box;
        d.confidence = scene.detection_confidence;
        bool grasped = held;
        if (uniform01(cfg.seed, k, kChannelLabelFlip) < cfg.false_positive_rate) grasped = !grasped;
        d.label = grasped ? GraspLabel::Grasped : GraspLabel::NotGrasped;
        f.detections.push_back(d);
      }
      const double jx = (uniform01(cfg.seed, k, kChannelGazeJitterX) - 0.5) * half_w;
      const double jy = (uniform01(cfg.seed, k, kChannelGazeJitterY) - 0.5) * half_h;
      f.gaze = GazePoint{cx + jx, cy + jy};
    } else {
      f.gaze = scene.idle_gaze;
    }
    if (uniform01(cfg.seed, k, kChannelGazeDrop) < cfg.gaze_dropout_rate) f.gaze.reset();
    frames.push_back(std::move(f));
  }
  return frames;
}

}  // namespace exogate::simkit
