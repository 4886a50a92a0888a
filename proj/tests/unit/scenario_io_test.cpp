#include <sstream>

#include <gtest/gtest.h>

#include "exogate/cli/overrides.hpp"
#include "exogate/io/frames_jsonl.hpp"
#include "exogate/io/scenario_json.hpp"
#include "exogate/io/sim_output.hpp"

using namespace exogate;
using namespace exogate::io;

namespace {

std::string fixture(const std::string& name) {
  return read_text_file(std::string(EXOGATE_SCENARIO_DIR) + "/" + name);
}

Json canonical_doc() { return parse_json_text(fixture("canonical.json"), "canonical.json"); }

bool mentions(const std::vector<std::string>& v, const std::string& needle) {
  for (const auto& s : v)
    if (s.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST(ScenarioJson, CanonicalFixtureMatchesBuiltIn) {
  const auto r = parse_scenario(canonical_doc());
  ASSERT_TRUE(r.ok()) << (r.violations.empty() ? "" : r.violations.front());
  EXPECT_EQ(to_json(*r.scenario), to_json(simkit::canonical_scenario()));
}

TEST(ScenarioJson, ShippedFixturesValidate) {
  for (const char* name : {"canonical.json", "canonical_coupled.json", "noisy.json"}) {
    const auto r = parse_scenario_text(fixture(name), name);
    EXPECT_TRUE(r.ok()) << name;
  }
}

TEST(ScenarioJson, RoundTrip) {
  const auto sc = simkit::canonical_scenario();
  const auto back = load_scenario(to_json(sc));
  EXPECT_EQ(to_json(back), to_json(sc));
}

TEST(ScenarioJson, UnknownKeysRejected) {
  Json doc = canonical_doc();
  doc["policy"]["gama"] = 0.3;
  doc["extra"] = 1;
  const auto r = parse_scenario(doc);
  EXPECT_TRUE(mentions(r.violations, "policy.gama"));
  EXPECT_TRUE(mentions(r.violations, "extra"));
}

TEST(ScenarioJson, ThresholdOrderViolation) {
  Json doc = canonical_doc();
  doc["policy"]["theta_stand"] = 0.8;
  const auto r = parse_scenario(doc);
  EXPECT_TRUE(mentions(r.violations, "policy.theta_stand < theta_bend required"));
}

TEST(ScenarioJson, NegativeMassNamesField) {
  Json doc = canonical_doc();
  doc["subject"]["m_w"] = -3.0;
  EXPECT_TRUE(mentions(parse_scenario(doc).violations, "subject.m_w"));
}

TEST(ScenarioJson, MissingRequiredBlocks) {
  Json doc = canonical_doc();
  doc.erase("trajectory");
  doc.erase("duration");
  const auto r = parse_scenario(doc);
  EXPECT_TRUE(mentions(r.violations, "trajectory"));
  EXPECT_TRUE(mentions(r.violations, "duration"));
}

TEST(ScenarioJson, UnsortedKeyframes) {
  Json doc = canonical_doc();
  doc["trajectory"]["keyframes"][2][0] = 1.0;
  EXPECT_FALSE(parse_scenario(doc).ok());
}

TEST(ScenarioJson, DegreeThresholds) {
  Json doc = canonical_doc();
  doc["policy"].erase("theta_stand");
  doc["policy"].erase("theta_bend");
  doc["policy"]["theta_stand_deg"] = 10.0;
  doc["policy"]["theta_bend_deg"] = 40.0;
  const auto sc = load_scenario(doc);
  EXPECT_NEAR(sc.policy.theta_stand, 10.0 * std::numbers::pi / 180.0, 1e-12);
  EXPECT_NEAR(sc.policy.theta_bend, 40.0 * std::numbers::pi / 180.0, 1e-12);
}

TEST(ScenarioJson, AnthropometricSubject) {
  Json doc = canonical_doc();
  doc["subject"] = {{"total_mass", 74.0}, {"height", 1.787}, {"box_mass", 4.0}};
  const auto sc = load_scenario(doc);
  EXPECT_NEAR(sc.subject.params.m_w, 40.7, 1e-9);
  EXPECT_TRUE(sc.subject.anthropometrics.has_value());
}

TEST(JsonText, SyntaxErrorHasLineContext) {
  try {
    parse_json_text("{\n  \"a\": 1,\n  \"b\": ]\n}", "bad.json");
    FAIL();
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("bad.json:3:"), std::string::npos) << msg;
    EXPECT_NE(msg.find("\"b\": ]"), std::string::npos) << msg;
  }
}

TEST(Overrides, DottedPathsLastWins) {
  Json doc = canonical_doc();
  cli::apply_override(doc, "policy.gamma=0.4");
  cli::apply_override(doc, "policy.gamma=0.5");
  cli::apply_override(doc, "trajectory.keyframes.1.1=0.95");
  EXPECT_EQ(doc["policy"]["gamma"], 0.5);
  EXPECT_EQ(doc["trajectory"]["keyframes"][1][1], 0.95);
  cli::apply_override(doc, "mode=coupled");
  EXPECT_EQ(doc["mode"], "coupled");
  EXPECT_THROW(cli::apply_override(doc, "policy..gamma=1"), InvalidConfig);
  EXPECT_THROW(cli::apply_override(doc, "nonsense"), InvalidConfig);
  EXPECT_THROW(cli::apply_override(doc, "trajectory.keyframes.99.0=1"), InvalidConfig);
}

TEST(FramesJsonl, RoundTrip) {
  const auto sc = simkit::canonical_scenario();
  auto cfg = sc.perception;
  cfg.gaze_dropout_rate = 0.1;
  const auto frames = simkit::synth_perception(simkit::Trajectory(sc.trajectory.keyframes),
                                               sc.grasp_events, sc.policy.theta_bend, 2.0, cfg);
  std::stringstream buf;
  write_frames(buf, frames);
  const auto back = read_frames(buf);
  ASSERT_EQ(back.size(), frames.size());
  std::stringstream again;
  write_frames(again, back);
  std::stringstream first;
  write_frames(first, frames);
  EXPECT_EQ(again.str(), first.str());
}

TEST(FramesJsonl, ErrorsCarryLineNumbers) {
  std::stringstream in(
      "{\"t\": 0.0, \"gaze\": null, \"detections\": []}\n"
      "{\"t\": 0.02, \"gaze\": [0.5, 0.5], \"detections\": "
      "[{\"bbox\": [0.6, 0.4, 0.4, 0.6], \"label\": \"Grasped\"}]}\n");
  try {
    read_frames(in, "s.jsonl");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("s.jsonl:2"), std::string::npos) << e.what();
  }
  std::stringstream backwards("{\"t\": 1.0}\n{\"t\": 0.5}\n");
  EXPECT_THROW(read_frames(backwards), ParseError);
}

TEST(SimOutput, LogHeaderAndPrecision) {
  const auto sc = simkit::canonical_scenario();
  auto log = simkit::run_scenario(sc);
  log.rows.resize(3);
  std::stringstream out;
  write_log_csv(out, log.rows);
  std::string header;
  std::getline(out, header);
  EXPECT_EQ(header,
            "t,theta_w,theta_dot_w,theta_ref,state,alpha_w,alpha_b,gate,tau_w,tau_box,"
            "tau_ass_ref,tau_ass,K,C,mode,tau_meas,tau_user");
  EXPECT_EQ(format9(1.0 / 3.0), "0.333333333");
}
