#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "exogate/format.hpp"
#include "exogate/io/json_text.hpp"
#include "exogate/simkit/metrics.hpp"
#include "exogate/simkit/simulate.hpp"

namespace exogate::io {

inline constexpr const char* kLogHeader =
    "t,theta_w,theta_dot_w,theta_ref,state,alpha_w,alpha_b,gate,tau_w,tau_box,tau_ass_ref,"
    "tau_ass,K,C,mode,tau_meas,tau_user";

inline void write_log_csv(std::ostream& out, const std::vector<simkit::SimRow>& rows) {
  out << kLogHeader << '\n';
  for (const auto& r : rows) {
    out << format9(r.t) << ',' << format9(r.theta_w) << ',' << format9(r.theta_dot_w) << ','
        << format9(r.theta_ref) << ',' << index_of(r.state) << ',' << (r.alpha_w ? 1 : 0) << ','
        << (r.alpha_b ? 1 : 0) << ',' << (r.gate ? 1 : 0) << ',' << format9(r.tau_w) << ','
        << format9(r.tau_box) << ',' << format9(r.tau_ass_ref) << ',' << format9(r.tau_ass) << ','
        << format9(r.K) << ',' << format9(r.C) << ',' << to_string(r.mode) << ','
        << format9(r.tau_meas) << ',' << format9(r.tau_user) << '\n';
  }
}

inline Json events_to_json(const std::vector<simkit::SimEvent>& events) {
  Json out = Json::array();
  for (const auto& e : events)
    out.push_back({{"t", round9(e.t)},
                   {"tick", e.tick},
                   {"kind", simkit::to_string(e.kind)},
                   {"detail", e.detail}});
  return out;
}

inline Json optional_number(const std::optional<double>& v) {
  return v ? Json(round9(*v)) : Json(nullptr);
}

inline Json metrics_to_json(const simkit::Metrics& m) {
  Json j;
  j["partial"] = m.partial;
  j["t_grasp"] = optional_number(m.t_grasp);
  j["onset_latency"] = optional_number(m.onset_latency);
  j["latency_novis"] = optional_number(m.latency_novis);
  j["latency_gain"] = optional_number(m.latency_gain);
  j["peak_tau_ass"] = round9(m.peak_tau_ass);
  j["peak_tau_ass_novis"] = round9(m.peak_tau_ass_novis);
  j["tau_user_integral"] = round9(m.tau_user_integral);
  j["tau_user_integral_novis"] = round9(m.tau_user_integral_novis);
  Json durations = Json::object();
  for (std::size_t s = 0; s < m.state_durations.size(); ++s)
    durations[std::to_string(s)] = round9(m.state_durations[s]);
  j["state_durations"] = durations;
  Json rising = Json::array();
  for (double t : m.rising_edges) rising.push_back(round9(t));
  Json falling = Json::array();
  for (double t : m.falling_edges) falling.push_back(round9(t));
  j["edge_timestamps"] = {{"rising", rising}, {"falling", falling}};
  return j;
}

}  // namespace exogate::io
