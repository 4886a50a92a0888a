#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "exogate/cli/log.hpp"
#include "exogate/cli/overrides.hpp"
#include "exogate/format.hpp"
#include "exogate/io/frames_jsonl.hpp"
#include "exogate/io/scenario_json.hpp"
#include "exogate/io/sim_output.hpp"
#include "exogate/simkit/metrics.hpp"
#include "exogate/simkit/simulate.hpp"

namespace exogate::cli {

// Stable exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitAbort = 2;

namespace fs = std::filesystem;

// Writes next to the target and renames into place.
inline void write_file_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

// 64-bit FNV-1a; used to report artifact fingerprints.
inline std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

struct RunOptions {
  std::string out_dir = "out";
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  bool no_vision = false;
  bool no_exo = false;
  std::optional<std::string> frames_path;
};

// Scenario document after overrides, plus its parse.
struct LoadedScenario {
  Json doc;
  io::ScenarioParse parse;
};

inline LoadedScenario load_with_overrides(const std::string& path, const RunOptions& opt) {
  LoadedScenario out;
  out.doc = io::parse_json_text(io::read_text_file(path), path);
  for (const auto& o : opt.overrides) apply_override(out.doc, o);
  if (opt.seed) set_path(out.doc, "perception.seed", Json(*opt.seed));
  out.parse = io::parse_scenario(out.doc);
  if (out.parse.scenario) {
    out.parse.scenario->flags.no_vision = opt.no_vision;
    out.parse.scenario->flags.no_exo = opt.no_exo;
  }
  return out;
}

inline int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
  try {
    const Json doc = io::parse_json_text(io::read_text_file(path), path);
    const auto r = io::parse_scenario(doc);
    if (r.violations.empty()) {
      out << path << ": valid\n";
      return kExitOk;
    }
    err << path << ": " << r.violations.size() << " violation(s)\n";
    for (const auto& v : r.violations) err << "  - " << v << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return kExitInvalid;
  }
}

struct RunArtifacts {
  std::string log_csv;
  std::string shadow_csv;
  std::string metrics_json;
  std::string events_json;
  std::string frames_jsonl;
  simkit::Metrics metrics;
};

inline Json provenance(const simkit::Scenario& sc, const RunOptions& opt) {
  Json overrides = Json::array();
  for (const auto& o : opt.overrides) overrides.push_back(o);
  return {{"scenario", io::to_json(sc)},
          {"overrides", overrides},
          {"flags", {{"no_vision", sc.flags.no_vision}, {"no_exo", sc.flags.no_exo}}},
          {"frames", opt.frames_path ? Json(*opt.frames_path) : Json(nullptr)}};
}

// Simulates and renders every artifact in memory.
inline RunArtifacts render_run(const simkit::Scenario& sc, const RunOptions& opt) {
  std::optional<std::vector<Frame>> frames;
  if (opt.frames_path) {
    std::ifstream in(*opt.frames_path);
    if (!in) throw ParseError(*opt.frames_path + ": cannot open");
    frames = io::read_frames(in, *opt.frames_path);
  } else {
    frames = simkit::synth_perception(simkit::Trajectory(sc.trajectory.keyframes),
                                      sc.grasp_events, sc.policy.theta_bend, sc.duration,
                                      sc.perception);
  }
  const simkit::SimLog log = simkit::run_scenario(sc, frames);

  RunArtifacts a;
  a.metrics = simkit::compute_metrics(log, sc);
  std::ostringstream csv;
  io::write_log_csv(csv, log.rows);
  a.log_csv = csv.str();
  std::ostringstream shadow;
  io::write_log_csv(shadow, log.shadow);
  a.shadow_csv = shadow.str();
  Json metrics = io::metrics_to_json(a.metrics);
  metrics["provenance"] = provenance(sc, opt);
  a.metrics_json = metrics.dump(2) + "\n";
  a.events_json = io::events_to_json(log.events).dump(2) + "\n";
  std::ostringstream fr;
  io::write_frames(fr, *frames);
  a.frames_jsonl = fr.str();
  return a;
}

inline void write_artifacts(const fs::path& dir, const RunArtifacts& a) {
  fs::create_directories(dir);
  write_file_atomic(dir / "log.csv", a.log_csv);
  write_file_atomic(dir / "shadow_log.csv", a.shadow_csv);
  write_file_atomic(dir / "metrics.json", a.metrics_json);
  write_file_atomic(dir / "events.json", a.events_json);
  write_file_atomic(dir / "frames.jsonl", a.frames_jsonl);
}

inline std::string describe(const std::optional<double>& v) {
  return v ? format9(*v) : std::string("n/a");
}

inline int cmd_run(const std::string& path, const RunOptions& opt, std::ostream& out,
                   std::ostream& err) {
  LoadedScenario loaded;
  try {
    loaded = load_with_overrides(path, opt);
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return kExitInvalid;
  }
  if (!loaded.parse.ok()) {
    err << path << ": " << loaded.parse.violations.size() << " violation(s)\n";
    for (const auto& v : loaded.parse.violations) err << "  - " << v << '\n';
    return kExitInvalid;
  }
  const simkit::Scenario& sc = *loaded.parse.scenario;
  log(LogLevel::Info, "running " + path + " (" + simkit::to_string(sc.mode) + ", " +
                          std::to_string(simkit::tick_count(sc.duration, sc.controller.dt)) +
                          " ticks)");
  RunArtifacts a;
  try {
    a = render_run(sc, opt);
  } catch (const SimulationAbort& e) {
    err << "simulation aborted at " << e.what() << '\n';
    return kExitAbort;
  } catch (const ParseError& e) {
    err << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    err << e.what() << '\n';
    return kExitInvalid;
  }
  try {
    write_artifacts(opt.out_dir, a);
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return kExitAbort;
  }
  const auto& m = a.metrics;
  out << "onset_latency  " << describe(m.onset_latency) << " s\n"
      << "latency_novis  " << describe(m.latency_novis) << " s\n"
      << "latency_gain   " << describe(m.latency_gain) << " s\n"
      << "peak_tau_ass   " << format9(m.peak_tau_ass) << " N m\n"
      << "user effort    " << format9(m.tau_user_integral) << " N m s\n"
      << "artifacts      " << opt.out_dir << '\n';
  return kExitOk;
}

inline int cmd_replay(const std::string& path, const RunOptions& opt, std::ostream& out,
                      std::ostream& err) {
  if (!opt.frames_path) {
    err << "replay requires --frames <path>\n";
    return kExitInvalid;
  }
  return cmd_run(path, opt, out, err);
}

struct SweepAxis {
  std::string path;
  std::vector<Json> values;
};

// {"base": "scenario.json", "axes": [{"path": "policy.gamma", "values": [...]}],
//  "out": "dir", "max_points": 10000}
struct SweepSpec {
  std::string base;
  std::vector<SweepAxis> axes;
  std::string out_dir = "sweep_out";
  std::size_t max_points = 10000;
};

inline SweepSpec parse_sweep_spec(const Json& j, const fs::path& spec_dir = {}) {
  if (!j.is_object()) throw ParseError("sweep spec must be an object");
  for (const auto& [k, v] : j.items())
    if (k != "base" && k != "axes" && k != "out" && k != "max_points")
      throw ParseError("sweep spec: unknown key " + k);
  SweepSpec s;
  if (!j.contains("base") || !j["base"].is_string()) throw ParseError("sweep spec: base is required");
  fs::path base = j["base"].get<std::string>();
  if (base.is_relative() && !spec_dir.empty()) base = spec_dir / base;
  s.base = base.string();
  if (j.contains("out")) {
    if (!j["out"].is_string()) throw ParseError("sweep spec: out must be a string");
    s.out_dir = j["out"].get<std::string>();
  }
  if (j.contains("max_points")) {
    if (!j["max_points"].is_number_unsigned()) throw ParseError("sweep spec: max_points must be >= 0");
    s.max_points = j["max_points"].get<std::size_t>();
  }
  if (j.contains("axes")) {
    if (!j["axes"].is_array()) throw ParseError("sweep spec: axes must be an array");
    for (const Json& a : j["axes"]) {
      if (!a.is_object() || !a.contains("path") || !a["path"].is_string() ||
          !a.contains("values") || !a["values"].is_array() || a["values"].empty())
        throw ParseError("sweep spec: each axis needs a path and a non-empty values array");
      SweepAxis axis;
      axis.path = a["path"].get<std::string>();
      for (const Json& v : a["values"]) axis.values.push_back(v);
      s.axes.push_back(std::move(axis));
    }
  }
  return s;
}

inline std::size_t grid_size(const SweepSpec& s) {
  std::size_t n = 1;
  for (const auto& a : s.axes) {
    if (a.values.size() != 0 && n > SIZE_MAX / a.values.size()) return SIZE_MAX;
    n *= a.values.size();
  }
  return n;
}

// Row-major: the last axis varies fastest.
inline std::vector<std::size_t> grid_indices(const SweepSpec& s, std::size_t point) {
  std::vector<std::size_t> idx(s.axes.size());
  for (std::size_t a = s.axes.size(); a-- > 0;) {
    idx[a] = point % s.axes[a].values.size();
    point /= s.axes[a].values.size();
  }
  return idx;
}

struct SweepOptions {
  std::optional<std::string> out_dir;  // overrides the spec's out
  bool allow_large = false;
  unsigned jobs = 0;  // 0: hardware concurrency
  RunOptions run;     // flags and overrides applied to every point
};

inline std::string point_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "point_%04zu", i);
  return buf;
}

struct SweepPointResult {
  int status = kExitOk;
  std::string message;
  simkit::Metrics metrics;
};

inline constexpr const char* kAggregateMetricColumns =
    "status,partial,onset_latency,latency_novis,latency_gain,peak_tau_ass,peak_tau_ass_novis,"
    "tau_user_integral,tau_user_integral_novis";

inline int cmd_sweep(const std::string& spec_path, const SweepOptions& opt, std::ostream& out,
                     std::ostream& err) {
  SweepSpec spec;
  Json base;
  try {
    spec = parse_sweep_spec(io::parse_json_text(io::read_text_file(spec_path), spec_path),
                            fs::path(spec_path).parent_path());
    base = io::parse_json_text(io::read_text_file(spec.base), spec.base);
    for (const auto& o : opt.run.overrides) apply_override(base, o);
    if (opt.run.seed) set_path(base, "perception.seed", Json(*opt.run.seed));
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return kExitInvalid;
  }
  const fs::path out_dir = opt.out_dir.value_or(spec.out_dir);
  const std::size_t n = grid_size(spec);
  if (n > spec.max_points && !opt.allow_large) {
    err << "sweep has " << n << " points, above the cap of " << spec.max_points
        << "; pass --allow-large to run it\n";
    return kExitInvalid;
  }

  // Resolve every point up front so path errors are reported before running.
  std::vector<Json> docs(n, base);
  for (std::size_t i = 0; i < n; ++i) {
    const auto idx = grid_indices(spec, i);
    for (std::size_t a = 0; a < spec.axes.size(); ++a) {
      try {
        set_path(docs[i], spec.axes[a].path, spec.axes[a].values[idx[a]]);
      } catch (const std::exception& e) {
        err << "axis " << spec.axes[a].path << ": " << e.what() << '\n';
        return kExitInvalid;
      }
    }
  }

  std::vector<SweepPointResult> results(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      SweepPointResult& r = results[i];
      auto parsed = io::parse_scenario(docs[i]);
      if (!parsed.ok()) {
        r.status = kExitInvalid;
        r.message = parsed.violations.empty() ? "invalid" : parsed.violations.front();
        continue;
      }
      parsed.scenario->flags.no_vision = opt.run.no_vision;
      parsed.scenario->flags.no_exo = opt.run.no_exo;
      try {
        RunOptions ro = opt.run;
        const RunArtifacts a = render_run(*parsed.scenario, ro);
        r.metrics = a.metrics;
        write_artifacts(out_dir / point_name(i), a);
      } catch (const SimulationAbort& e) {
        r.status = kExitAbort;
        r.message = e.what();
      } catch (const std::exception& e) {
        r.status = kExitInvalid;
        r.message = e.what();
      }
    }
  };
  unsigned jobs = opt.jobs ? opt.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(n, 1)));
  try {
    fs::create_directories(out_dir);
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return kExitAbort;
  }
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < jobs; ++w) pool.emplace_back(worker);
    worker();
  }

  std::ostringstream agg;
  agg << "point";
  for (const auto& a : spec.axes) agg << ',' << a.path;
  agg << ',' << kAggregateMetricColumns << '\n';
  int worst = kExitOk;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = results[i];
    const auto idx = grid_indices(spec, i);
    agg << point_name(i);
    for (std::size_t a = 0; a < spec.axes.size(); ++a) {
      const Json& v = spec.axes[a].values[idx[a]];
      agg << ',' << (v.is_number() ? format9(v.get<double>()) : v.dump());
    }
    const auto& m = r.metrics;
    auto opt_num = [](const std::optional<double>& v) { return v ? format9(*v) : std::string(); };
    agg << ',' << (r.status == kExitOk ? "ok" : r.status == kExitAbort ? "abort" : "invalid") << ','
        << (m.partial ? 1 : 0) << ',' << opt_num(m.onset_latency) << ','
        << opt_num(m.latency_novis) << ',' << opt_num(m.latency_gain) << ','
        << format9(m.peak_tau_ass) << ',' << format9(m.peak_tau_ass_novis) << ','
        << format9(m.tau_user_integral) << ',' << format9(m.tau_user_integral_novis) << '\n';
    if (r.status != kExitOk) {
      err << point_name(i) << ": " << r.message << '\n';
      worst = std::max(worst, r.status);
    }
  }
  try {
    write_file_atomic(out_dir / "aggregate.csv", agg.str());
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return kExitAbort;
  }
  out << n << " point(s) -> " << (out_dir / "aggregate.csv").string() << '\n';
  return worst;
}

}  // namespace exogate::cli
