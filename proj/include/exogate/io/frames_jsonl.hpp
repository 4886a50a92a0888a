#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "exogate/format.hpp"
#include "exogate/io/json_text.hpp"
#include "exogate/visiongate.hpp"

namespace exogate::io {

// One frame per line:
//   {"t": 3.02, "gaze": [0.5, 0.55] | null,
//    "detections": [{"bbox": [x0, y0, x1, y1], "label": "Grasped", "conf": 0.9}]}

inline Frame frame_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("frame must be an object");
  for (const auto& [k, v] : j.items())
    if (k != "t" && k != "gaze" && k != "detections") throw ParseError("frame: unknown key " + k);
  if (!j.contains("t") || !j["t"].is_number()) throw ParseError("frame: t must be a number");

  Frame f;
  f.t = j["t"].get<double>();
  if (j.contains("gaze") && !j["gaze"].is_null()) {
    const Json& g = j["gaze"];
    if (!g.is_array() || g.size() != 2 || !g[0].is_number() || !g[1].is_number())
      throw ParseError("frame: gaze must be [x, y] or null");
    f.gaze = GazePoint{g[0].get<double>(), g[1].get<double>()};
  }
  if (j.contains("detections")) {
    const Json& ds = j["detections"];
    if (!ds.is_array()) throw ParseError("frame: detections must be an array");
    for (const Json& d : ds) {
      if (!d.is_object() || !d.contains("bbox") || !d.contains("label"))
        throw ParseError("frame: detection needs bbox and label");
      const Json& b = d["bbox"];
      if (!b.is_array() || b.size() != 4) throw ParseError("frame: bbox must have 4 numbers");
      for (const Json& x : b)
        if (!x.is_number()) throw ParseError("frame: bbox must have 4 numbers");
      Detection det;
      det.bbox = {b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>()};
      const Json& label = d["label"];
      if (label == "Grasped")
        det.label = GraspLabel::Grasped;
      else if (label == "NotGrasped")
        det.label = GraspLabel::NotGrasped;
      else
        throw ParseError("frame: label must be Grasped or NotGrasped");
      if (d.contains("conf")) {
        if (!d["conf"].is_number()) throw ParseError("frame: conf must be a number");
        det.confidence = d["conf"].get<double>();
      }
      f.detections.push_back(det);
    }
  }
  check_frame(f);
  return f;
}

inline Json frame_to_json(const Frame& f) {
  Json j;
  j["t"] = round9(f.t);
  j["gaze"] = f.gaze ? Json::array({round9(f.gaze->x), round9(f.gaze->y)}) : Json(nullptr);
  Json ds = Json::array();
  for (const auto& d : f.detections) {
    ds.push_back({{"bbox",
                   {round9(d.bbox.x_min), round9(d.bbox.y_min), round9(d.bbox.x_max),
                    round9(d.bbox.y_max)}},
                  {"label", to_string(d.label)},
                  {"conf", round9(d.confidence)}});
  }
  j["detections"] = ds;
  return j;
}

inline void write_frames(std::ostream& out, const std::vector<Frame>& frames) {
  for (const auto& f : frames) out << frame_to_json(f).dump() << '\n';
}

// Blank lines are skipped. Timestamps must be strictly increasing.
inline std::vector<Frame> read_frames(std::istream& in, const std::string& source = "frames") {
  std::vector<Frame> frames;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    try {
      Frame f = frame_from_json(parse_json_text(line, where));
      if (!frames.empty() && !(f.t > frames.back().t))
        throw ParseError("timestamps must be strictly increasing");
      frames.push_back(std::move(f));
    } catch (const ParseError& e) {
      const std::string msg = e.what();
      throw ParseError(msg.rfind(where, 0) == 0 ? msg : where + ": " + msg);
    }
  }
  return frames;
}

}  // namespace exogate::io
