#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qtop/coldatom.hpp"
#include "qtop/emission.hpp"

namespace qtop {

/// Model description as ingested from a config file or inline JSON flag.
struct ModelInput {
  std::string family;  // qwz | ssh | table | coldatom | down
  double m = 0.0;
  double t_s = 2.0;
  double t_so = 1.0;
  double t1 = 0.0;
  double t2 = 1.0;
  double delta = 0.0;
  double a = 1.0;
  int n = 1;
  std::string path;  // d-vector table

  bool is_coldatom() const { return family == "coldatom"; }
  bool is_down() const { return family == "down"; }
  ColdAtomSpec coldatom_spec() const;
  /// Bloch model; cold-atom inputs resolve through effective_model.
  ModelSpec resolve() const;
  /// Known topological number: analytic when available, numerical winding
  /// for tabulated models.
  int known_topological_number(int grid_n) const;
};

/// One CLI invocation, fully validated before any computation.
struct RunConfig {
  std::string command;
  std::optional<ModelInput> model;
  std::optional<ModelInput> initial;
  std::optional<ModelInput> final_state;
  int grid_n = 4096;
  int bins = kDefaultBins;
  int shots = 1000;
  std::uint64_t seed = 1;
  PeakThresholds thresholds;
  bool allow_cross_plane = false;
  bool flag_false_cps = false;
  bool svg = false;
  std::string out_dir = "out";
  std::string in_path;  // `count` input profile

  // sweep harness
  std::vector<double> sweep_m{1.0, 5.0};
  std::vector<int> sweep_n{0, 1, 2, 3, 4};
  std::vector<double> sweep_t_so{0.5, 1.0, 3.0};
  double sweep_t_s = 2.0;
};

ModelInput parse_model_json(const std::string& text);
RunConfig load_config_file(const std::string& path);
void validate_config(const RunConfig& config);

// Exit codes: 0 success, 1 validation, 2 numerical failure, 3 io.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitIo = 3;

int cmd_model(const RunConfig& config);
int cmd_quench(const RunConfig& config);
int cmd_count(const RunConfig& config);
int cmd_emission(const RunConfig& config);
int cmd_coldatom(const RunConfig& config);
int cmd_sweep(const RunConfig& config);

/// Dispatches and maps thrown errors onto exit codes (messages to stderr).
int run_command(const RunConfig& config);

}  // namespace qtop
