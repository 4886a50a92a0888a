#pragma once

#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "exogate/error.hpp"

namespace exogate {

enum class GraspLabel { Grasped, NotGrasped };

inline const char* to_string(GraspLabel l) {
  return l == GraspLabel::Grasped ? "Grasped" : "NotGrasped";
}

// Normalized image coordinates, closed box.
struct BoundingBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  bool well_formed() const {
    return std::isfinite(x_min) && std::isfinite(y_min) && std::isfinite(x_max) &&
           std::isfinite(y_max) && x_min <= x_max && y_min <= y_max;
  }

  bool contains(double x, double y) const {
    return x >= x_min && x <= x_max && y >= y_min && y <= y_max;
  }
};

struct Detection {
  BoundingBox bbox;
  GraspLabel label = GraspLabel::NotGrasped;
  double confidence = 1.0;
};

struct GazePoint {
  double x = 0.0;
  double y = 0.0;
};

struct Frame {
  double t = 0.0;
  std::optional<GazePoint> gaze;  // nullopt = tracker dropout
  std::vector<Detection> detections;
};

inline void check_frame(const Frame& f) {
  if (!std::isfinite(f.t)) throw ParseError("frame: non-finite timestamp");
  for (const auto& d : f.detections) {
    if (!d.bbox.well_formed()) throw ParseError("frame: malformed bbox");
    if (!(d.confidence >= 0.0 && d.confidence <= 1.0))
      throw ParseError("frame: confidence outside [0, 1]");
  }
}

struct Indicators {
  bool grasped = false;      // chi+
  bool not_grasped = false;  // chi-

  friend bool operator==(const Indicators&, const Indicators&) = default;
};

// chi+ / chi-: gaze inside at least one confident box of each class. Both can
// be set when boxes overlap.
inline Indicators frame_indicators(const Frame& f, double min_confidence) {
  check_frame(f);
  Indicators out;
  if (!f.gaze) return out;
  for (const auto& d : f.detections) {
    if (d.confidence < min_confidence) continue;
    if (!d.bbox.contains(f.gaze->x, f.gaze->y)) continue;
    if (d.label == GraspLabel::Grasped)
      out.grasped = true;
    else
      out.not_grasped = true;
  }
  return out;
}

struct GateConfig {
  std::size_t N_on = 5;
  double rho_on = 0.8;
  std::size_t N_off = 8;
  double rho_off = 0.6;
  double min_confidence = 0.5;
};

inline std::vector<std::string> check_gate(const GateConfig& c) {
  std::vector<std::string> out;
  if (c.N_on < 1) out.emplace_back("gate.N_on must be >= 1");
  if (c.N_off < 1) out.emplace_back("gate.N_off must be >= 1");
  if (!(c.rho_on > 0.0 && c.rho_on <= 1.0)) out.emplace_back("gate.rho_on must be in (0, 1]");
  if (!(c.rho_off > 0.0 && c.rho_off <= 1.0)) out.emplace_back("gate.rho_off must be in (0, 1]");
  if (!(c.min_confidence >= 0.0 && c.min_confidence <= 1.0))
    out.emplace_back("gate.min_confidence must be in [0, 1]");
  return out;
}

// Fixed-length ring of 0/1 samples with a running count of ones.
class IndicatorWindow {
 public:
  IndicatorWindow() = default;
  explicit IndicatorWindow(std::size_t length) : buf_(length, 0) {}

  void push(bool v) {
    if (buf_.empty()) return;
    if (size_ == buf_.size()) {
      ones_ -= buf_[head_];
    } else {
      ++size_;
    }
    buf_[head_] = v ? 1 : 0;
    ones_ += buf_[head_];
    head_ = head_ + 1 == buf_.size() ? 0 : head_ + 1;
  }

  void clear() {
    size_ = 0;
    head_ = 0;
    ones_ = 0;
  }

  bool full() const { return !buf_.empty() && size_ == buf_.size(); }
  std::size_t size() const { return size_; }
  std::size_t capacity() const { return buf_.size(); }
  std::size_t ones() const { return ones_; }

  // Sliding average over the full window length.
  double mean() const {
    return buf_.empty() ? 0.0 : static_cast<double>(ones_) / static_cast<double>(buf_.size());
  }

 private:
  std::vector<std::uint8_t> buf_;
  std::size_t head_ = 0;
  std::size_t size_ = 0;
  std::size_t ones_ = 0;
};

struct GateState {
  bool gate = false;
  IndicatorWindow on_window;
  IndicatorWindow off_window;
  std::uint64_t frames_seen = 0;
};

inline GateState make_gate_state(const GateConfig& cfg) {
  GateState gs;
  gs.on_window = IndicatorWindow(cfg.N_on);
  gs.off_window = IndicatorWindow(cfg.N_off);
  return gs;
}

// In-place variant of gate_step. Only the window matching the current gate
// value is tested, an edge needs that window full, and every edge empties the
// window of the other direction.
inline void advance_gate(GateState& gs, bool chi_plus, bool chi_minus, const GateConfig& cfg) {
  gs.on_window.push(chi_plus);
  gs.off_window.push(chi_minus);
  ++gs.frames_seen;
  if (!gs.gate) {
    if (gs.on_window.full() && gs.on_window.mean() >= cfg.rho_on) {
      gs.gate = true;
      gs.off_window.clear();
    }
  } else {
    if (gs.off_window.full() && gs.off_window.mean() >= cfg.rho_off) {
      gs.gate = false;
      gs.on_window.clear();
    }
  }
}

inline GateState gate_step(GateState gs, bool chi_plus, bool chi_minus, const GateConfig& cfg) {
  advance_gate(gs, chi_plus, chi_minus, cfg);
  return gs;
}

inline GateState gate_step(GateState gs, Indicators ind, const GateConfig& cfg) {
  advance_gate(gs, ind.grasped, ind.not_grasped, cfg);
  return gs;
}

enum class GateEdge { Rising, Falling };

inline const char* to_string(GateEdge e) { return e == GateEdge::Rising ? "rising" : "falling"; }

inline std::optional<GateEdge> edge_events(const GateState& prev, const GateState& next) {
  if (!prev.gate && next.gate) return GateEdge::Rising;
  if (prev.gate && !next.gate) return GateEdge::Falling;
  return std::nullopt;
}

// Latest committed gate value, written by the perception consumer and read by
// the control tick. Reader sees (gate, frame count) from one commit.
class GateSnapshot {
 public:
  struct Value {
    bool gate = false;
    std::uint64_t frames_seen = 0;
  };

  void publish(const GateState& gs) {
    const std::uint64_t packed = (gs.frames_seen << 1) | (gs.gate ? 1u : 0u);
    word_.store(packed, std::memory_order_release);
  }

  Value read() const {
    const std::uint64_t packed = word_.load(std::memory_order_acquire);
    return {(packed & 1u) != 0, packed >> 1};
  }

 private:
  std::atomic<std::uint64_t> word_{0};
};

}  // namespace exogate
