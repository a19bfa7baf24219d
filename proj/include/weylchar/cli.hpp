#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "weylchar/dynamics.hpp"
#include "weylchar/phase_grid.hpp"
#include "weylchar/states.hpp"

namespace weylchar::cli {

enum ExitCode : int {
  kOk = 0,
  kValidation = 1,
  kNumerical = 2,
  kIo = 3,
};

const std::vector<std::string>& task_names();

/// Checks a job document (which must carry "task"). Each violation names the
/// offending field; an empty list means the job is runnable.
std::vector<std::string> validate(const nlohmann::json& config);

/// Builders shared by the tasks; they assume a validated document.
/// "extent": "auto" picks nct::fit_grid for `rho` (required in that case).
PhaseGrid grid_from(const nlohmann::json& grid, Axes axes, const states::DensityMatrix* rho = nullptr);
states::DensityMatrix state_from(const nlohmann::json& config, double hbar);
states::PMixtureSpec mixture_from(const nlohmann::json& state);
dyn::HamiltonianSpec hamiltonian_from(const nlohmann::json& spec);

struct RunResult {
  int exit_code = kOk;
  nlohmann::json summary;  ///< one-line summary on success, error document otherwise
  std::vector<std::string> files;
};

/// Runs a validated job, writing artifacts into out_dir (created if needed).
/// Never throws: library errors are mapped to exit codes and an error document.
RunResult run(const nlohmann::json& config, const std::string& out_dir, bool emit_plotscript);

/// Full command-line entry point:
///   weylchar <task> --config <path> [--out <dir>] [--seed <int>] [--emit-plotscript]
int main_entry(int argc, char** argv);

}  // namespace weylchar::cli
