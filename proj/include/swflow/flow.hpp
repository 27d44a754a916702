#pragma once

#include <optional>
#include <string>
#include <vector>

#include "swflow/functional.hpp"

namespace swflow {

enum class Integrator { rk4_direct, imex_deturck };
enum class RhsKind { direct, deturck };
enum class Termination { completed, blowup_detected, step_rejected };

std::string to_string(Termination t);
std::string to_string(Integrator i);

struct FlowState {
  SpinorField phi;
  ConnectionForm a;
  double t = 0.0;
  std::optional<GaugePhase> theta;  // accumulated gauge for DeTurck runs
};

struct InitSpec {
  std::uint64_t seed = 0;
  int kmax = 2;
  double amp_phi = 0.1;
  double amp_a = 0.1;
  int spinor_rank = 1;
};

struct FlowConfig {
  TorusGrid grid;
  int k = 0;
  double s0 = 0.0;
  double dt = 0.0;
  double t_end = 0.0;
  Integrator integrator = Integrator::imex_deturck;
  bool dealias = true;
  InitSpec init;
  int record_every = 1;    // steps between retained diagnostics records
  int snapshot_every = 0;  // steps between snapshots; <= 0 keeps only the last
  double blowup_sup_f = 1e6;
  double fd_h = 1e-4;      // finite-difference step for check-grad
  int fd_directions = 20;
};

struct DiagnosticsRecord {
  double t = 0.0;
  EnergyBreakdown ek;
  double e_sw_total = 0.0;
  double sup_phi = 0.0;
  double l2_phi = 0.0;
  double sup_f = 0.0;
  double lp_f_kp2 = 0.0;          // ||F||_{L^{k+2}}
  double grad_phi_norm2 = 0.0;    // ||grad_spinor||_{L2}^2
  double grad_a_norm2 = 0.0;      // ||grad_connection||_{L2}^2
  double energy_identity_residual = 0.0;  // |dE/dt + 2(sum of the above)|
};

struct Rates {
  SpinorField phi_dot;
  ConnectionForm a_dot;
  std::optional<ScalarField> theta_dot;
};

/// Negated gradients of sw_energy_k (the gradient flow right-hand side).
Rates flow_rhs(const FlowState& state, int k, double s0, bool dealias);

/// flow_rhs plus the gauge-fixing terms. With chi = Delta^{(k)} d* A (a purely
/// imaginary scalar): phi gains +chi*phi, A gains -d(chi), and theta_dot is
/// Im(chi). Signs are the dissipative choice, making the combined system
/// parabolic of order 2k+2 for every k; the added pair is an infinitesimal
/// gauge motion, undone exactly by the reconstruction ODE.
Rates deturck_rhs(const FlowState& state, int k, double s0, bool dealias);

/// theta_dot = Im(Delta^{(k)} d* A), the gauge-reconstruction ODE rate.
ScalarField gauge_rate(const ConnectionForm& a, int k);

/// One explicit-Euler update of the gauge ODE; integrators accumulate theta
/// at their own order (RK4 carries theta as a state component, the IMEX
/// stepper uses a trapezoidal predictor-corrector).
GaugePhase gauge_ode_step(const GaugePhase& g, const ConnectionForm& a, double dt, int k);

struct StepResult {
  FlowState state;
  bool rejected = false;
};

/// Classical explicit RK4 step of either system. Rejects nonfinite results
/// and steps violating the heuristic stability bound
/// dt * |xi_max|^{2(k+1)} <= 2.8.
StepResult step_rk4(const FlowState& state, RhsKind kind, double dt, int k, double s0,
                    bool dealias);

/// ETDRK2 step of the DeTurck system with the integrating factor
/// exp(-|xi|^{2(k+1)} dt) applied to phi and A; unconditionally stable on the
/// linear part, exact on pure linear modes.
StepResult step_imex(const FlowState& state, double dt, int k, double s0, bool dealias);

struct TrajectoryEntry {
  FlowState state;
  DiagnosticsRecord diag;
  std::int64_t step = 0;
};

struct Trajectory {
  std::vector<TrajectoryEntry> entries;
  Termination termination = Termination::completed;
  int k = 0;
  double s0 = 0.0;
  bool dealias = true;
};

/// Integrates the configured system to t_end, a blow-up trigger, or a step
/// rejection. Deterministic for a fixed config. Retains records at
/// record_every cadence (plus the final state).
Trajectory run_flow(const FlowConfig& config);

/// Defect norm (||phi_dot + g_phi|| + ||a_dot + g_a||) / (sum of rate and
/// gradient norms); 0 for an exact stationary point.
double residual_flow(const FlowState& state, const SpinorField& phi_dot,
                     const ConnectionForm& a_dot, int k, double s0, bool dealias);

/// Per-interior-entry residual_flow with centered-difference rates.
std::vector<double> trajectory_residuals(const Trajectory& traj);
double max_trajectory_residual(const Trajectory& traj);

/// Applies the accumulated gauge to every retained state of a DeTurck run,
/// producing the corresponding gradient-flow trajectory. The initial state is
/// unchanged (theta(0) = 0).
Trajectory deturck_to_flow(const Trajectory& parabolic);

/// Diagnostics for one state (used by run_flow and by gauge-transformed
/// trajectories).
DiagnosticsRecord make_diagnostics(const FlowState& state, int k, double s0, bool dealias);

}  // namespace swflow
