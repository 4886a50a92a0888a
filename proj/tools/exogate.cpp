#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "exogate/cli/commands.hpp"

namespace {

void add_run_flags(CLI::App* cmd, exogate::cli::RunOptions& opt, std::optional<std::uint64_t>& seed,
                   std::string& frames) {
  cmd->add_option("--out", opt.out_dir, "Output directory");
  cmd->add_option("--set", opt.overrides, "Override a scenario value: key.path=value")
      ->allow_extra_args(false);
  cmd->add_option("--seed", seed, "Perception seed");
  cmd->add_flag("--no-vision", opt.no_vision, "Force the vision gate off (posture only)");
  cmd->add_flag("--no-exo", opt.no_exo, "Force the assistive torque to zero");
  cmd->add_option("--frames", frames, "Replay a recorded frame stream (JSON lines)");
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = exogate::cli;
  CLI::App app{"Vision-gated lumbar exoskeleton controller simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  cli::RunOptions run_opt;
  std::optional<std::uint64_t> seed;
  std::string frames;

  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("scenario", scenario_path, "Scenario JSON")->required();

  auto* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("scenario", scenario_path, "Scenario JSON")->required();
  add_run_flags(run, run_opt, seed, frames);

  auto* replay = app.add_subcommand("replay", "Re-run a scenario on a recorded frame stream");
  replay->add_option("scenario", scenario_path, "Scenario JSON")->required();
  add_run_flags(replay, run_opt, seed, frames);

  std::string sweep_path;
  cli::SweepOptions sweep_opt;
  std::string sweep_out;
  auto* sweep = app.add_subcommand("sweep", "Run a parameter grid");
  sweep->add_option("spec", sweep_path, "Sweep spec JSON")->required();
  sweep->add_option("--out", sweep_out, "Output directory (overrides the spec)");
  sweep->add_option("--set", sweep_opt.run.overrides, "Override applied to every point");
  sweep->add_option("--seed", seed, "Perception seed for every point");
  sweep->add_flag("--no-vision", sweep_opt.run.no_vision, "Force the vision gate off");
  sweep->add_flag("--no-exo", sweep_opt.run.no_exo, "Force the assistive torque to zero");
  sweep->add_option("--jobs", sweep_opt.jobs, "Worker threads (0: all cores)");
  sweep->add_flag("--allow-large", sweep_opt.allow_large, "Run grids above max_points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitInvalid;
  }

  if (seed) run_opt.seed = seed;
  if (!frames.empty()) run_opt.frames_path = frames;

  if (*validate) return cli::cmd_validate(scenario_path, std::cout, std::cerr);
  if (*run) return cli::cmd_run(scenario_path, run_opt, std::cout, std::cerr);
  if (*replay) return cli::cmd_replay(scenario_path, run_opt, std::cout, std::cerr);
  if (*sweep) {
    if (seed) sweep_opt.run.seed = seed;
    if (!sweep_out.empty()) sweep_opt.out_dir = sweep_out;
    return cli::cmd_sweep(sweep_path, sweep_opt, std::cout, std::cerr);
  }
  return cli::kExitInvalid;
}
