#pragma once

#include "swflow/bump.hpp"
#include "swflow/flow.hpp"

namespace swflow {

enum class DimClass { subcritical, critical, supercritical };

std::string to_string(DimClass c);

/// n < 2(k+2) subcritical, n = 2(k+2) critical, else supercritical.
DimClass classify_dimension(int n, int k);

/// (2p - n) / (2k + 2); positive iff n < 2p.
double scaling_exponent(int n, double p, int k);

struct RescaleParams {
  double lambda = 1.0;
  std::vector<double> center;  // empty means origin
  double base_time = 0.0;
  int order = 0;  // k
};

/// Parabolic rescaling u^lambda(x, t) = lambda * u(lambda x + center,
/// lambda^{2(k+1)} t + base_time). Implemented as an exact geometric rescale:
/// the output lives on the grid with periods L/lambda and identical site
/// indexing, values scaled by lambda (curvature then scales by lambda^2
/// automatically). Off-lattice centers are handled by exact Fourier phase
/// shifts, so any lambda > 0 is admissible.
FlowState lambda_scale(const FlowState& state, const RescaleParams& params);

/// Max over interior entries of the defect of the lambda-scaled system
/// (potential coefficients lambda^{2k}/4 * (lambda^2 S0 + |phi|^2)), rates by
/// centered differences in the scaled time. Reduces bitwise to the base
/// trajectory residual at lambda = 1.
double scaled_residual(const Trajectory& traj, const RescaleParams& params, double s0);

struct ConcentrationEntry {
  double time = 0.0;
  int center_id = 0;
  std::vector<double> center;
  double radius = 0.0;
  double value = 0.0;  // ||F||_{L^p(B_radius(center))}
};

struct ConcentrationReport {
  double p = 2.0;
  double epsilon = 0.0;
  std::vector<ConcentrationEntry> entries;
  std::vector<int> flagged_center_ids;  // smallest-radius value at latest time > epsilon
};

/// Local L^p norms of curvature snapshots over a (center, radius, time) table.
/// radii must be strictly descending; entries are monotone nondecreasing in
/// radius by quadrature nesting.
ConcentrationReport concentration_scan(const std::vector<std::pair<double, Field>>& f_snapshots,
                                       double p, const std::vector<double>& radii,
                                       const std::vector<std::vector<double>>& centers,
                                       double epsilon);

/// Rescaled states at the times where sup|F| reaches a new running maximum,
/// recentered at the argmax site, Coulomb-projected, and normalized to
/// sup|F| = 1. Throws when the trajectory shows no curvature growth.
std::vector<FlowState> blowup_sequence(const Trajectory& traj, int count);

struct SpinorBoundRow {
  double time = 0.0;
  double sup_phi = 0.0;
  bool flagged = false;
};

struct SpinorBoundReport {
  double threshold = 0.0;  // sqrt(|min(S0,0)|) + eps_monitor
  bool armed = false;      // initial sup below threshold
  bool any_flag = false;
  std::vector<SpinorBoundRow> rows;
};

/// Time series of sup|phi| with upcrossing flags of
/// sqrt(|min(S0,0)|) + 1e-3 (1 + sqrt|S0|).
SpinorBoundReport spinor_bound_monitor(const Trajectory& traj, double s0);

/// ||gamma^{s/2} D_A^{(l)} phi||^2 + ||gamma^{s/2} nabla^{(l)} F_A||^2.
/// Requires w.s >= 2(k+l).
double weighted_local_energy(const FlowState& state, const BumpWeight& w, int l, int k,
                             bool dealias);

/// CSV exports: one row per (time, center, radius) for scans, one row per
/// time for monitors. Byte-stable layout (%.17g floats).
void write_concentration_csv(const ConcentrationReport& report, const std::string& path);
void write_spinor_monitor_csv(const SpinorBoundReport& report, const std::string& path);

}  // namespace swflow
