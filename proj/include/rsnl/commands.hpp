#pragma once

#include <string>

#include "rsnl/config.hpp"

namespace rsnl {

// Exit codes shared by the CLI and the command implementations.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitQuadrature = 3;
inline constexpr int kExitBoundViolation = 4;
inline constexpr int kExitOrthogonality = 5;

/// Writes <out_dir>/kernel.csv with header lambda,t,B,est_error,dBdt over the
/// configured grid (dBdt is -inf on t = 0 rows, where the derivative is
/// singular).
int cmd_eval_kernel(const RunConfig& cfg, const std::string& out_dir, int threads);

/// Writes <out_dir>/bounds.json; returns kExitBoundViolation when a hard
/// bound fails.
int cmd_verify_bounds(const RunConfig& cfg, const std::string& out_dir, int threads);

/// Writes <out_dir>/solution.csv (t,k,u_k rows, mode-major) and
/// <out_dir>/residuals.json; returns kExitOrthogonality when the resonant
/// existence condition fails (payload lists the offending modes).
int cmd_solve(const RunConfig& cfg, const std::string& out_dir, int threads);

/// Writes <out_dir>/sweep.csv: conditioning tables for each beta in
/// beta_list, resonant rows flagged.
int cmd_sweep_beta(const RunConfig& cfg, const std::string& out_dir, int threads);

/// Writes <out_dir>/k0.json: resonant set, min gap, warnings.
int cmd_find_k0(const RunConfig& cfg, const std::string& out_dir, int threads);

/// Writes <out_dir>/oracle_compare.csv: kernel quadrature against the
/// step-halved time-stepping oracle on the configured grid.
int cmd_oracle_compare(const RunConfig& cfg, const std::string& out_dir, int threads);

/// Full CLI entry point; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace rsnl
