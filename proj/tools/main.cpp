#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "commands.hpp"

int main(int argc, char** argv) {
  // stdout carries command output; diagnostics go to stderr.
  spdlog::set_default_logger(spdlog::stderr_color_mt("softbody"));
  using namespace softbody;
  using namespace softbody::cli;

  CLI::App app{"softbody: two-layer soft-body simulation, state dumps and AHP prioritization"};
  app.require_subcommand(1);

  const std::map<std::string, DumpFormat> formats{{"xml", DumpFormat::Xml}, {"csv", DumpFormat::Csv}};
  const std::map<std::string, IntegratorKind> integrators{
      {"euler", IntegratorKind::Euler}, {"midpoint", IntegratorKind::Midpoint}, {"rk4", IntegratorKind::RungeKutta4}};

  const auto add_run_flags = [&](CLI::App* cmd, RunOptions& o) {
    cmd->add_option("scene", o.scene, "Scene JSON file")->required();
    cmd->add_option("--record", o.record, "Write every frame to this XML or CSV file");
    cmd->add_option("--format", o.format, "Dump format (default: from --record extension)")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    cmd->add_option("--integrator", o.integrator, "Override the scene integrator")
        ->transform(CLI::CheckedTransformer(integrators, CLI::ignore_case));
    cmd->add_option("--dt", o.dt, "Override the scene timestep (s)");
    cmd->add_option("--capacity", o.capacity, "Recorder capacity in frames");
    cmd->add_option("--save-dir", o.save_dir, "Default directory for saved simulations");
  };

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run a scene headlessly");
  add_run_flags(run_cmd, run);
  run_cmd->add_option("--steps", run.steps, "Number of ticks")->capture_default_str();

  ScriptOptions script;
  auto* script_cmd = app.add_subcommand("script", "Play a timed command script against a scene");
  add_run_flags(script_cmd, script.run);
  script_cmd->add_option("script", script.script, "Command script JSON file")->required();
  auto* script_steps = script_cmd->add_option("--steps", script.run.steps, "Number of ticks (default: until 1 s after the last command)");

  ReplayOptions replay;
  auto* replay_cmd = app.add_subcommand("replay", "Replay a saved state dump");
  replay_cmd->add_option("dump", replay.dump, "XML or CSV dump")->required();
  replay_cmd->add_flag("--check", replay.check, "Validate monotone time, finite values and bounds");
  replay_cmd->add_option("--scene", replay.scene, "Scene whose view space bounds --check enforces");

  AhpOptions ahp;
  auto* ahp_cmd = app.add_subcommand("ahp", "AHP priority vectors and cost-value points");
  ahp_cmd->add_option("value_matrix", ahp.value_matrix, "Pairwise value comparison CSV")->required();
  ahp_cmd->add_option("cost_matrix", ahp.cost_matrix, "Pairwise cost comparison CSV");
  ahp_cmd->add_option("--out", ahp.points_out, "Write cost-value points CSV here");
  ahp_cmd->add_option("--decimals", ahp.decimals, "Digits after the point in the points CSV")->capture_default_str();

  ServeOptions serve;
  auto* serve_cmd = app.add_subcommand("serve", "Serve a live session over web sockets");
  serve_cmd->add_option("scene", serve.scene, "Scene JSON file")->required();
  serve_cmd->add_option("--port", serve.port, "TCP port")->capture_default_str();
  serve_cmd->add_option("--address", serve.address, "Listen address")->capture_default_str();
  serve_cmd->add_option("--save-dir", serve.save_dir, "Default directory for saved simulations");
  serve_cmd->add_option("--capacity", serve.capacity, "Recorder capacity in frames");
  serve_cmd->add_option("--format", serve.format, "Save format")->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  if (*run_cmd) return cmd_run(run, std::cout, std::cerr);
  if (*script_cmd) {
    script.steps_given = script_steps->count() > 0;
    return cmd_script(script, std::cout, std::cerr);
  }
  if (*replay_cmd) return cmd_replay(replay, std::cout, std::cerr);
  if (*ahp_cmd) return cmd_ahp(ahp, std::cout, std::cerr);
  if (*serve_cmd) return cmd_serve(serve, std::cout, std::cerr);
  return kConfigError;
}
