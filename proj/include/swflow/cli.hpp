#pragma once

#include <string>
#include <vector>

#include "swflow/config.hpp"

namespace swflow {

// Exit codes shared by the CLI commands (documented in the README):
//   0 success / criteria met      1 IO, parse, or usage error
//   2 blow-up ceiling triggered   3 step rejected
//   4 verification failed (check-grad / gauge-verify tolerance exceeded)
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitBlowup = 2;
inline constexpr int kExitStepRejected = 3;
inline constexpr int kExitVerifyFailed = 4;

/// Runs the configured flow; writes snapshots, diagnostics CSV, and a JSON
/// run manifest into out_dir.
int cmd_run(const std::string& config_path, const std::string& out_dir);

/// Gradient oracle for k in {0,1,2} on the configured grid; exit 0 iff all
/// relative errors < 1e-6.
int cmd_check_grad(const std::string& config_path);

/// Curvature concentration scan over the snapshots listed in a run manifest.
/// p defaults to k+2 read from the manifest; radii must be descending.
int cmd_scan(const std::string& manifest_path, double p, double epsilon,
             std::vector<double> radii);

/// Runs DeTurck + gauge reconstruction and the direct RK4 flow from identical
/// initial data; exit 0 iff the terminal relative discrepancy < 1e-4.
int cmd_gauge_verify(const std::string& config_path);

/// Diagnostics CSV column header (fixed, versioned in the manifest).
std::string diagnostics_csv_header();
std::string diagnostics_csv_row(const DiagnosticsRecord& d);

}  // namespace swflow
