#include "swflow/flow.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "swflow/random_fields.hpp"

namespace swflow {

std::string to_string(Termination t) {
  switch (t) {
    case Termination::completed: return "completed";
    case Termination::blowup_detected: return "blowup_detected";
    case Termination::step_rejected: return "step_rejected";
  }
  return "unknown";
}

std::string to_string(Integrator i) {
  return i == Integrator::rk4_direct ? "rk4_direct" : "imex_deturck";
}

namespace {

bool finite(const Field& f) { return f.data.isFinite().all(); }

// i * chi with chi = Delta^{(k)} d* A, projected exactly onto iR.
ScalarField deturck_scalar(const ConnectionForm& a, int k) {
  ScalarField chi = laplacian_pow(codifferential(a), k);
  chi.data.col(0) = chi.data.col(0).imag().cast<Complex>() * Complex(0.0, 1.0);
  return chi;
}

FlowState axpy_state(const FlowState& u, double c, const Rates& r) {
  FlowState out = u;
  out.phi.data += c * r.phi_dot.data;
  out.a.data += c * r.a_dot.data;
  if (out.theta && r.theta_dot) out.theta->theta.data += c * r.theta_dot->data;
  return out;
}

double max_mode_rate(const TorusGrid& g, int k, bool dealias) {
  double xi2 = 0.0;
  for (int a = 0; a < g.n; ++a) {
    int s = dealias ? dealias_kmax(g, a) : g.sizes[a] / 2 - 1;
    double f = kTwoPi * s / g.lengths[a];
    xi2 += f * f;
  }
  double r = 1.0;
  for (int j = 0; j <= k; ++j) r *= xi2;
  return r;
}

Eigen::ArrayXd mode_symbol(const TorusGrid& g, int k) {
  Eigen::ArrayXd lam(g.site_count());
  std::vector<int> idx(g.n, 0);
  const std::int64_t sites = g.site_count();
  for (std::int64_t row = 0; row < sites; ++row) {
    double xi2 = 0.0;
    for (int a = 0; a < g.n; ++a) {
      double f = deriv_freq(g, a, idx[a]);
      xi2 += f * f;
    }
    double m = 1.0;
    for (int j = 0; j <= k; ++j) m *= xi2;
    lam[row] = m;
    for (int a = g.n - 1; a >= 0; --a) {
      if (++idx[a] < g.sizes[a]) break;
      idx[a] = 0;
    }
  }
  return lam;
}

double phi1_of(double z) { return z == 0.0 ? 1.0 : std::expm1(z) / z; }
double phi2_of(double z) { return z == 0.0 ? 0.5 : (std::expm1(z) - z) / (z * z); }

}  // namespace

Rates flow_rhs(const FlowState& state, int k, double s0, bool dealias) {
  GradientPair g = grad_pair(state.a, state.phi, k, s0, dealias);
  g.g_phi.data = -g.g_phi.data;
  g.g_a.data = -g.g_a.data;
  return {std::move(g.g_phi), std::move(g.g_a), std::nullopt};
}

Rates deturck_rhs(const FlowState& state, int k, double s0, bool dealias) {
  Rates r = flow_rhs(state, k, s0, dealias);
  ScalarField chi = deturck_scalar(state.a, k);

  SpinorField extra = make_spinor(state.phi.grid, state.phi.spinor_rank);
  for (int s = 0; s < state.phi.spinor_rank; ++s)
    extra.data.col(s) = chi.data.col(0) * state.phi.data.col(s);
  if (dealias) dealias_inplace(extra);
  r.phi_dot.data += extra.data;

  Field dchi = exterior_d(chi);
  r.a_dot.data -= dchi.data;
  r.a_dot.data = r.a_dot.data.imag().cast<Complex>() * Complex(0.0, 1.0);

  ScalarField theta_dot = make_scalar(state.a.grid);
  theta_dot.data.col(0) = chi.data.col(0).imag().cast<Complex>();
  r.theta_dot = std::move(theta_dot);
  return r;
}

ScalarField gauge_rate(const ConnectionForm& a, int k) {
  ScalarField chi = deturck_scalar(a, k);
  ScalarField out = make_scalar(a.grid);
  out.data.col(0) = chi.data.col(0).imag().cast<Complex>();
  return out;
}

GaugePhase gauge_ode_step(const GaugePhase& g, const ConnectionForm& a, double dt, int k) {
  GaugePhase out = g;
  out.theta.data += dt * gauge_rate(a, k).data;
  return out;
}

StepResult step_rk4(const FlowState& state, RhsKind kind, double dt, int k, double s0,
                    bool dealias) {
  if (dt * max_mode_rate(state.a.grid, k, dealias) > 2.85)
    return {state, true};  // outside the explicit stability region

  auto rhs = [&](const FlowState& u) {
    return kind == RhsKind::direct ? flow_rhs(u, k, s0, dealias)
                                   : deturck_rhs(u, k, s0, dealias);
  };
  Rates k1 = rhs(state);
  FlowState u2 = axpy_state(state, 0.5 * dt, k1);
  u2.t = state.t + 0.5 * dt;
  Rates k2 = rhs(u2);
  FlowState u3 = axpy_state(state, 0.5 * dt, k2);
  u3.t = state.t + 0.5 * dt;
  Rates k3 = rhs(u3);
  FlowState u4 = axpy_state(state, dt, k3);
  u4.t = state.t + dt;
  Rates k4 = rhs(u4);

  FlowState out = state;
  out.phi.data += (dt / 6.0) * (k1.phi_dot.data + 2.0 * k2.phi_dot.data +
                                2.0 * k3.phi_dot.data + k4.phi_dot.data);
  out.a.data += (dt / 6.0) * (k1.a_dot.data + 2.0 * k2.a_dot.data + 2.0 * k3.a_dot.data +
                              k4.a_dot.data);
  out.a.data = out.a.data.imag().cast<Complex>() * Complex(0.0, 1.0);
  if (out.theta && k1.theta_dot)
    out.theta->theta.data += (dt / 6.0) * (k1.theta_dot->data + 2.0 * k2.theta_dot->data +
                                           2.0 * k3.theta_dot->data + k4.theta_dot->data);
  out.t = state.t + dt;
  if (!finite(out.phi) || !finite(out.a)) return {state, true};
  return {out, false};
}

StepResult step_imex(const FlowState& state, double dt, int k, double s0, bool dealias) {
  const TorusGrid& g = state.a.grid;
  Eigen::ArrayXd lam = mode_symbol(g, k);  // |xi|^{2(k+1)}
  Eigen::ArrayXcd decay(lam.size()), hp1(lam.size()), hp2(lam.size()), lamc(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    double z = -lam[i] * dt;
    decay[i] = std::exp(z);
    hp1[i] = dt * phi1_of(z);
    hp2[i] = dt * phi2_of(z);
    lamc[i] = lam[i];
  }

  auto spectral = [](const Field& f) { return to_spectral(f); };
  auto nonlin_spec = [&](const Field& rhs_s, const Field& u_s) {
    Eigen::ArrayXXcd n = rhs_s.data;
    for (Eigen::Index c = 0; c < n.cols(); ++c) n.col(c) += lamc * u_s.data.col(c);
    return n;  // N = RHS + |xi|^{2(k+1)} u in spectral space
  };

  Rates r1 = deturck_rhs(state, k, s0, dealias);
  Field phi_s = spectral(state.phi), a_s = spectral(state.a);
  Field r1p_s = spectral(r1.phi_dot), r1a_s = spectral(r1.a_dot);
  Eigen::ArrayXXcd n1p = nonlin_spec(r1p_s, phi_s);
  Eigen::ArrayXXcd n1a = nonlin_spec(r1a_s, a_s);

  auto advance = [&](const Field& u_s, const Eigen::ArrayXXcd& n) {
    Field out = u_s;
    for (Eigen::Index c = 0; c < out.data.cols(); ++c)
      out.data.col(c) = decay * u_s.data.col(c) + hp1 * n.col(c);
    return out;
  };
  Field pred_p_s = advance(phi_s, n1p);
  Field pred_a_s = advance(a_s, n1a);

  FlowState pred = state;
  pred.phi = to_physical(pred_p_s);
  pred.a = to_physical(pred_a_s);
  pred.a.data = pred.a.data.imag().cast<Complex>() * Complex(0.0, 1.0);
  pred.t = state.t + dt;
  if (pred.theta && r1.theta_dot) pred.theta->theta.data += dt * r1.theta_dot->data;

  Rates r2 = deturck_rhs(pred, k, s0, dealias);
  Eigen::ArrayXXcd n2p = nonlin_spec(spectral(r2.phi_dot), pred_p_s);
  Eigen::ArrayXXcd n2a = nonlin_spec(spectral(r2.a_dot), pred_a_s);

  FlowState out = state;
  Field out_p_s = pred_p_s, out_a_s = pred_a_s;
  for (Eigen::Index c = 0; c < out_p_s.data.cols(); ++c)
    out_p_s.data.col(c) += hp2 * (n2p.col(c) - n1p.col(c));
  for (Eigen::Index c = 0; c < out_a_s.data.cols(); ++c)
    out_a_s.data.col(c) += hp2 * (n2a.col(c) - n1a.col(c));
  out.phi = to_physical(out_p_s);
  out.a = to_physical(out_a_s);
  out.a.data = out.a.data.imag().cast<Complex>() * Complex(0.0, 1.0);
  out.t = state.t + dt;
  if (out.theta && r1.theta_dot && r2.theta_dot)
    out.theta->theta.data += (0.5 * dt) * (r1.theta_dot->data + r2.theta_dot->data);

  if (!finite(out.phi) || !finite(out.a)) return {state, true};
  return {out, false};
}

DiagnosticsRecord make_diagnostics(const FlowState& state, int k, double s0,
                                   bool dealias) {
  DiagnosticsRecord d;
  d.t = state.t;
  d.ek = sw_energy_k(state.a, state.phi, k, s0, dealias);
  d.e_sw_total = sw_energy(state.a, state.phi, s0, dealias).total;
  d.sup_phi = sup_norm(state.phi);
  d.l2_phi = l2_norm(state.phi);
  TwoForm f = curvature(state.a);
  d.sup_f = sup_norm(f);
  d.lp_f_kp2 = lp_norm(f, k + 2.0);
  GradientPair gp = grad_pair(state.a, state.phi, k, s0, dealias);
  d.grad_phi_norm2 = l2_norm2(gp.g_phi);
  d.grad_a_norm2 = l2_norm2(gp.g_a);
  return d;
}

Trajectory run_flow(const FlowConfig& config) {
  if (!(config.dt > 0.0)) throw std::invalid_argument("run_flow: dt must be positive");
  if (config.t_end < 0.0) throw std::invalid_argument("run_flow: t_end must be >= 0");
  if (config.k < 0) throw std::invalid_argument("run_flow: k must be >= 0");
  if (config.record_every < 1)
    throw std::invalid_argument("run_flow: record_every must be >= 1");

  const TorusGrid& g = config.grid;
  FlowState state;
  state.phi = random_band_limited(g, 0, config.init.spinor_rank, config.init.kmax,
                                  config.init.seed, config.init.amp_phi, false);
  state.a = random_band_limited(g, 1, 1, config.init.kmax, config.init.seed + 1,
                                config.init.amp_a, true);
  state.t = 0.0;
  if (config.integrator == Integrator::imex_deturck) state.theta = zero_gauge(g);

  Trajectory traj;
  traj.k = config.k;
  traj.s0 = config.s0;
  traj.dealias = config.dealias;

  auto record = [&](const FlowState& s, std::int64_t step) {
    traj.entries.push_back(
        {s, make_diagnostics(s, config.k, config.s0, config.dealias), step});
  };
  auto finalize = [&]() -> Trajectory& {
    auto& e = traj.entries;
    for (std::size_t j = 0; j < e.size(); ++j) {
      std::size_t lo = j > 0 ? j - 1 : j;
      std::size_t hi = j + 1 < e.size() ? j + 1 : j;
      if (hi == lo) continue;
      double de =
          (e[hi].diag.ek.total - e[lo].diag.ek.total) / (e[hi].diag.t - e[lo].diag.t);
      e[j].diag.energy_identity_residual =
          std::fabs(de + 2.0 * (e[j].diag.grad_phi_norm2 + e[j].diag.grad_a_norm2));
    }
    return traj;
  };

  record(state, 0);
  double sup_f0 = traj.entries.front().diag.sup_f;
  if (sup_f0 > config.blowup_sup_f) {
    traj.termination = Termination::blowup_detected;
    return finalize();
  }

  const std::int64_t nsteps =
      static_cast<std::int64_t>(std::ceil(config.t_end / config.dt - 1e-12));
  traj.termination = Termination::completed;
  for (std::int64_t i = 1; i <= nsteps; ++i) {
    double target = std::min(config.t_end, static_cast<double>(i) * config.dt);
    double dt_i = target - state.t;
    StepResult sr =
        config.integrator == Integrator::rk4_direct
            ? step_rk4(state, RhsKind::direct, dt_i, config.k, config.s0, config.dealias)
            : step_imex(state, dt_i, config.k, config.s0, config.dealias);
    if (sr.rejected) {
      traj.termination = Termination::step_rejected;
      if (traj.entries.back().step != i - 1) record(state, i - 1);
      return finalize();
    }
    state = std::move(sr.state);
    state.t = target;

    TwoForm f = curvature(state.a);
    if (sup_norm(f) > config.blowup_sup_f) {
      record(state, i);
      traj.termination = Termination::blowup_detected;
      return finalize();
    }
    if (i % config.record_every == 0 || i == nsteps) record(state, i);
  }
  return finalize();
}

double residual_flow(const FlowState& state, const SpinorField& phi_dot,
                     const ConnectionForm& a_dot, int k, double s0, bool dealias) {
  GradientPair gp = grad_pair(state.a, state.phi, k, s0, dealias);
  double num = l2_norm(phi_dot + gp.g_phi) + l2_norm(a_dot + gp.g_a);
  double den = l2_norm(phi_dot) + l2_norm(a_dot) + l2_norm(gp.g_phi) + l2_norm(gp.g_a);
  return den == 0.0 ? 0.0 : num / den;
}

std::vector<double> trajectory_residuals(const Trajectory& traj) {
  std::vector<double> out;
  const auto& e = traj.entries;
  for (std::size_t j = 1; j + 1 < e.size(); ++j) {
    double dt2 = e[j + 1].state.t - e[j - 1].state.t;
    SpinorField pd = e[j + 1].state.phi - e[j - 1].state.phi;
    pd.data /= dt2;
    ConnectionForm ad = e[j + 1].state.a - e[j - 1].state.a;
    ad.data /= dt2;
    out.push_back(residual_flow(e[j].state, pd, ad, traj.k, traj.s0, traj.dealias));
  }
  return out;
}

double max_trajectory_residual(const Trajectory& traj) {
  double m = 0.0;
  for (double r : trajectory_residuals(traj)) m = std::max(m, r);
  return m;
}

Trajectory deturck_to_flow(const Trajectory& parabolic) {
  Trajectory out;
  out.termination = parabolic.termination;
  out.k = parabolic.k;
  out.s0 = parabolic.s0;
  out.dealias = parabolic.dealias;
  out.entries.reserve(parabolic.entries.size());
  for (const auto& entry : parabolic.entries) {
    if (!entry.state.theta)
      throw std::invalid_argument("deturck_to_flow: trajectory carries no gauge");
    auto [a2, phi2] = gauge_transform(*entry.state.theta, entry.state.a, entry.state.phi);
    FlowState s;
    s.phi = std::move(phi2);
    s.a = std::move(a2);
    s.t = entry.state.t;
    TrajectoryEntry e2;
    e2.diag = make_diagnostics(s, out.k, out.s0, out.dealias);
    e2.state = std::move(s);
    e2.step = entry.step;
    out.entries.push_back(std::move(e2));
  }
  auto& e = out.entries;
  for (std::size_t j = 0; j < e.size(); ++j) {
    std::size_t lo = j > 0 ? j - 1 : j;
    std::size_t hi = j + 1 < e.size() ? j + 1 : j;
    if (hi == lo) continue;
    double de = (e[hi].diag.ek.total - e[lo].diag.ek.total) / (e[hi].diag.t - e[lo].diag.t);
    e[j].diag.energy_identity_residual =
        std::fabs(de + 2.0 * (e[j].diag.grad_phi_norm2 + e[j].diag.grad_a_norm2));
  }
  return out;
}

}  // namespace swflow
