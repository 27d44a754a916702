#include "swflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "swflow/util.hpp"

namespace swflow {

std::string to_string(DimClass c) {
  switch (c) {
    case DimClass::subcritical: return "subcritical";
    case DimClass::critical: return "critical";
    case DimClass::supercritical: return "supercritical";
  }
  return "unknown";
}

DimClass classify_dimension(int n, int k) {
  if (n < 1) throw std::invalid_argument("classify_dimension: n must be >= 1");
  if (k < 0) throw std::invalid_argument("classify_dimension: k must be >= 0");
  int crit = 2 * (k + 2);
  if (n < crit) return DimClass::subcritical;
  if (n == crit) return DimClass::critical;
  return DimClass::supercritical;
}

double scaling_exponent(int n, double p, int k) {
  if (p < 1.0) throw std::invalid_argument("scaling_exponent: p must be >= 1");
  return (2.0 * p - n) / (2.0 * k + 2.0);
}

namespace {

Field rescale_field(const Field& f, const TorusGrid& scaled_grid,
                    const RescaleParams& params) {
  bool shift = false;
  for (double c : params.center)
    if (c != 0.0) shift = true;
  Field out = shift ? shifted(f, params.center) : f;
  out.grid = scaled_grid;
  out.data *= params.lambda;
  return out;
}

double lambda_time_pow(const RescaleParams& params) {
  double m = 1.0;
  for (int j = 0; j < 2 * (params.order + 1); ++j) m *= params.lambda;
  return m;
}

}  // namespace

FlowState lambda_scale(const FlowState& state, const RescaleParams& params) {
  if (!(params.lambda > 0.0))
    throw std::invalid_argument("lambda_scale: lambda must be positive");
  if (!params.center.empty() &&
      static_cast<int>(params.center.size()) != state.a.grid.n)
    throw std::invalid_argument("lambda_scale: center must have one entry per axis");

  TorusGrid scaled = state.a.grid;
  for (double& l : scaled.lengths) l /= params.lambda;

  FlowState out;
  out.phi = rescale_field(state.phi, scaled, params);
  out.a = rescale_field(state.a, scaled, params);
  out.t = (state.t - params.base_time) / lambda_time_pow(params);
  return out;
}

double scaled_residual(const Trajectory& traj, const RescaleParams& params, double s0) {
  if (traj.entries.size() < 3)
    throw std::invalid_argument("scaled_residual: need at least three stored states");
  const double lam = params.lambda;
  double lam2k = 1.0;
  for (int j = 0; j < 2 * params.order; ++j) lam2k *= lam;
  const double c_quartic = 0.25 * lam2k;
  const double c_scalar = 0.25 * lam2k * lam * lam * s0;

  std::vector<FlowState> scaled;
  scaled.reserve(traj.entries.size());
  for (const auto& e : traj.entries) scaled.push_back(lambda_scale(e.state, params));

  double worst = 0.0;
  for (std::size_t j = 1; j + 1 < scaled.size(); ++j) {
    double dt2 = scaled[j + 1].t - scaled[j - 1].t;
    SpinorField pd = scaled[j + 1].phi - scaled[j - 1].phi;
    pd.data /= dt2;
    ConnectionForm ad = scaled[j + 1].a - scaled[j - 1].a;
    ad.data /= dt2;

    SpinorField gp = grad_spinor_with_potential(scaled[j].a, scaled[j].phi, params.order,
                                                c_scalar, c_quartic, traj.dealias);
    ConnectionForm ga =
        grad_connection(scaled[j].a, scaled[j].phi, params.order, traj.dealias);
    double num = l2_norm(pd + gp) + l2_norm(ad + ga);
    double den = l2_norm(pd) + l2_norm(ad) + l2_norm(gp) + l2_norm(ga);
    worst = std::max(worst, den == 0.0 ? 0.0 : num / den);
  }
  return worst;
}

ConcentrationReport concentration_scan(
    const std::vector<std::pair<double, Field>>& f_snapshots, double p,
    const std::vector<double>& radii, const std::vector<std::vector<double>>& centers,
    double epsilon) {
  if (f_snapshots.empty())
    throw std::invalid_argument("concentration_scan: no snapshots");
  if (radii.empty()) throw std::invalid_argument("concentration_scan: no radii");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] < radii[i - 1]))
      throw std::invalid_argument("concentration_scan: radii must be strictly descending");
  if (p < 1.0) throw std::invalid_argument("concentration_scan: p must be >= 1");
  if (centers.empty()) throw std::invalid_argument("concentration_scan: no centers");

  ConcentrationReport rep;
  rep.p = p;
  rep.epsilon = epsilon;
  const std::size_t nt = f_snapshots.size(), nc = centers.size(), nr = radii.size();
  rep.entries.resize(nt * nc * nr);
  parallel_for(static_cast<std::int64_t>(nt * nc), [&](std::int64_t tc) {
    std::size_t ti = static_cast<std::size_t>(tc) / nc;
    std::size_t ci = static_cast<std::size_t>(tc) % nc;
    for (std::size_t ri = 0; ri < nr; ++ri) {
      ConcentrationEntry e;
      e.time = f_snapshots[ti].first;
      e.center_id = static_cast<int>(ci);
      e.center = centers[ci];
      e.radius = radii[ri];
      e.value = ball_lp_norm(f_snapshots[ti].second, centers[ci], radii[ri], p);
      rep.entries[(ti * nc + ci) * nr + ri] = std::move(e);
    }
  });

  // A center is flagged when its smallest-radius value at the latest time
  // exceeds epsilon.
  const std::size_t latest = nt - 1;
  for (std::size_t ci = 0; ci < nc; ++ci) {
    double v = rep.entries[(latest * nc + ci) * nr + (nr - 1)].value;
    if (v > epsilon) rep.flagged_center_ids.push_back(static_cast<int>(ci));
  }
  return rep;
}

std::vector<FlowState> blowup_sequence(const Trajectory& traj, int count) {
  if (count < 1) throw std::invalid_argument("blowup_sequence: count must be >= 1");
  if (traj.entries.empty()) throw std::invalid_argument("blowup_sequence: empty trajectory");

  struct Peak {
    std::size_t entry;
    double sup;
    std::vector<double> argmax;
  };
  std::vector<Peak> peaks;
  double running = -1.0;
  for (std::size_t j = 0; j < traj.entries.size(); ++j) {
    const FlowState& s = traj.entries[j].state;
    TwoForm f = curvature(s.a);
    Eigen::ArrayXd pn2 = pointwise_norm2(f);
    Eigen::Index arg = 0;
    double sup2 = pn2.maxCoeff(&arg);
    double sup = std::sqrt(sup2);
    if (j == 0) {
      running = sup;
      continue;
    }
    if (sup > running) {
      running = sup;
      const TorusGrid& g = s.a.grid;
      std::vector<double> x(g.n);
      std::vector<int> idx(g.n);
      std::int64_t rem = arg;
      for (int a = g.n - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(rem % g.sizes[a]);
        rem /= g.sizes[a];
      }
      for (int a = 0; a < g.n; ++a) x[a] = g.coord(a, idx[a]);
      peaks.push_back({j, sup, std::move(x)});
    }
  }
  if (peaks.empty())
    throw std::invalid_argument("blowup_sequence: no curvature growth found");

  std::size_t take = std::min<std::size_t>(count, peaks.size());
  std::vector<FlowState> out;
  out.reserve(take);
  for (std::size_t i = peaks.size() - take; i < peaks.size(); ++i) {
    const Peak& pk = peaks[i];
    const FlowState& base = traj.entries[pk.entry].state;
    RescaleParams params;
    params.lambda = 1.0 / std::sqrt(pk.sup);
    params.center = pk.argmax;
    params.base_time = base.t;
    params.order = traj.k;
    FlowState scaled = lambda_scale(base, params);

    CoulombResult cr = coulomb_project(scaled.a);
    auto [a2, phi2] = gauge_transform(cr.gauge, scaled.a, scaled.phi);
    scaled.a = std::move(a2);
    scaled.phi = std::move(phi2);

    double sup_after = sup_norm(curvature(scaled.a));
    if (sup_after > 0.0) {
      scaled.a.data /= sup_after;
      scaled.phi.data /= sup_after;
    }
    out.push_back(std::move(scaled));
  }
  return out;
}

SpinorBoundReport spinor_bound_monitor(const Trajectory& traj, double s0) {
  SpinorBoundReport rep;
  double eps_monitor = 1e-3 * (1.0 + std::sqrt(std::fabs(s0)));
  rep.threshold = std::sqrt(std::fabs(std::min(s0, 0.0))) + eps_monitor;
  rep.rows.reserve(traj.entries.size());
  for (std::size_t j = 0; j < traj.entries.size(); ++j) {
    SpinorBoundRow row;
    row.time = traj.entries[j].state.t;
    row.sup_phi = sup_norm(traj.entries[j].state.phi);
    rep.rows.push_back(row);
  }
  if (rep.rows.empty()) return rep;
  rep.armed = rep.rows.front().sup_phi < rep.threshold;
  if (rep.armed) {
    for (auto& row : rep.rows) {
      if (row.sup_phi > rep.threshold) {
        row.flagged = true;
        rep.any_flag = true;
      }
    }
  }
  return rep;
}

double weighted_local_energy(const FlowState& state, const BumpWeight& w, int l, int k,
                             bool dealias) {
  if (l < 0 || k < 0)
    throw std::invalid_argument("weighted_local_energy: l and k must be >= 0");
  if (w.s < 2.0 * (k + l))
    throw std::invalid_argument("weighted_local_energy: need s >= 2(k+l)");
  Field dphi = iterated_cov_deriv(state.a, state.phi, l, dealias);
  Field df = curvature(state.a);
  for (int j = 0; j < l; ++j) df = partials_prepend(df);
  double wp = weighted_l2_norm(dphi, w);
  double wf = weighted_l2_norm(df, w);
  return wp * wp + wf * wf;
}

namespace {

std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_concentration_csv(const ConcentrationReport& report, const std::string& path) {
  std::ofstream csv(path, std::ios::trunc);
  if (!csv) throw std::runtime_error("write_concentration_csv: cannot open " + path);
  std::size_t dims = report.entries.empty() ? 0 : report.entries.front().center.size();
  csv << "time,center_id";
  for (std::size_t a = 0; a < dims; ++a) csv << ",c" << a;
  csv << ",radius,lp_value,flagged\n";
  for (const auto& e : report.entries) {
    bool fl = std::find(report.flagged_center_ids.begin(), report.flagged_center_ids.end(),
                        e.center_id) != report.flagged_center_ids.end();
    csv << csv_num(e.time) << "," << e.center_id;
    for (double c : e.center) csv << "," << csv_num(c);
    csv << "," << csv_num(e.radius) << "," << csv_num(e.value) << "," << (fl ? 1 : 0)
        << "\n";
  }
  if (!csv) throw std::runtime_error("write_concentration_csv: write failed");
}

void write_spinor_monitor_csv(const SpinorBoundReport& report, const std::string& path) {
  std::ofstream csv(path, std::ios::trunc);
  if (!csv) throw std::runtime_error("write_spinor_monitor_csv: cannot open " + path);
  csv << "t,sup_phi,threshold,flagged\n";
  for (const auto& row : report.rows) {
    csv << csv_num(row.time) << "," << csv_num(row.sup_phi) << ","
        << csv_num(report.threshold) << "," << (row.flagged ? 1 : 0) << "\n";
  }
  if (!csv) throw std::runtime_error("write_spinor_monitor_csv: write failed");
}

}  // namespace swflow
