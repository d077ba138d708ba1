#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "softbody/dynamics.hpp"
#include "softbody/recording.hpp"

namespace softbody::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kConfigError = 2,
  kBlowup = 3,
};

struct RunOptions {
  std::filesystem::path scene;
  long steps = 600;
  std::optional<std::filesystem::path> record;
  std::optional<DumpFormat> format;  // inferred from the record extension when unset
  std::optional<IntegratorKind> integrator;
  std::optional<double> dt;
  std::size_t capacity = RecorderConfig{}.capacity;
  std::filesystem::path save_dir = RecorderConfig{}.default_dir;
};

/// Runs `steps` ticks of a scene headlessly, optionally recording every frame.
int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);

struct ScriptOptions {
  RunOptions run;
  std::filesystem::path script;
  bool steps_given = false;  // otherwise run until one second after the last command
};

/// Plays a timed command script against a running session. Prints JSON lines: the initial
/// particle state, every session event, drag changes and releases, then the final state.
int cmd_script(const ScriptOptions& options, std::ostream& out, std::ostream& err);

struct ReplayOptions {
  std::filesystem::path dump;
  bool check = false;
  std::optional<std::filesystem::path> scene;  // bounds for --check
};

int cmd_replay(const ReplayOptions& options, std::ostream& out, std::ostream& err);

struct AhpOptions {
  std::filesystem::path value_matrix;
  std::optional<std::filesystem::path> cost_matrix;
  std::optional<std::filesystem::path> points_out;
  int decimals = 2;
};

int cmd_ahp(const AhpOptions& options, std::ostream& out, std::ostream& err);

struct ServeOptions {
  std::filesystem::path scene;
  std::string address = "0.0.0.0";
  unsigned short port = 8080;
  std::filesystem::path save_dir = RecorderConfig{}.default_dir;
  std::size_t capacity = RecorderConfig{}.capacity;
  std::optional<DumpFormat> format;
};

/// Serves the scene until SIGINT or SIGTERM.
int cmd_serve(const ServeOptions& options, std::ostream& out, std::ostream& err);

}  // namespace softbody::cli
