#include "swflow/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <vector>

#include <json.hpp>

#include "swflow/diagnostics.hpp"
#include "swflow/random_fields.hpp"
#include "swflow/snapshot.hpp"
#include "swflow/util.hpp"

namespace swflow {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string diagnostics_csv_header() {
  return "t,E_k_total,E_k_curv,E_k_dirichlet,E_k_scalar,E_k_quartic,E_sw_total,"
         "sup_phi,l2_phi,sup_F,lp_F_(k+2),energy_identity_residual";
}

std::string diagnostics_csv_row(const DiagnosticsRecord& d) {
  std::string row = fmt(d.t);
  for (double v : {d.ek.total, d.ek.curvature_term, d.ek.dirichlet_term, d.ek.scalar_term,
                   d.ek.quartic_term, d.e_sw_total, d.sup_phi, d.l2_phi, d.sup_f,
                   d.lp_f_kp2, d.energy_identity_residual})
    row += "," + fmt(v);
  return row;
}

int cmd_run(const std::string& config_path, const std::string& out_dir) {
  FlowConfig config;
  try {
    config = parse_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitError;
  }

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    std::cerr << "run: cannot create output directory " << out_dir << "\n";
    return kExitError;
  }

  auto t0 = std::chrono::steady_clock::now();
  Trajectory traj = run_flow(config);
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  try {
    std::ofstream csv(fs::path(out_dir) / "diagnostics.csv", std::ios::trunc);
    csv << diagnostics_csv_header() << "\n";
    for (const auto& e : traj.entries) csv << diagnostics_csv_row(e.diag) << "\n";
    if (!csv) throw std::runtime_error("run: diagnostics write failed");

    nlohmann::json snaps = nlohmann::json::array();
    SnapshotMeta meta;
    meta.k = config.k;
    meta.s0 = config.s0;
    auto want_snapshot = [&](const TrajectoryEntry& e, bool last) {
      if (last) return true;
      return config.snapshot_every > 0 && e.step % config.snapshot_every == 0;
    };
    for (std::size_t j = 0; j < traj.entries.size(); ++j) {
      const auto& e = traj.entries[j];
      if (!want_snapshot(e, j + 1 == traj.entries.size())) continue;
      meta.time = e.state.t;
      char tag[32];
      std::snprintf(tag, sizeof(tag), "snap_%06lld", static_cast<long long>(e.step));
      std::string phi_base = (fs::path(out_dir) / (std::string(tag) + "_phi")).string();
      std::string a_base = (fs::path(out_dir) / (std::string(tag) + "_a")).string();
      write_snapshot(phi_base, e.state.phi, meta);
      write_snapshot(a_base, e.state.a, meta);
      snaps.push_back({{"step", e.step},
                       {"time", e.state.t},
                       {"phi", std::string(tag) + "_phi"},
                       {"a", std::string(tag) + "_a"}});
    }

    nlohmann::json manifest;
    manifest["artifact_version"] = kVersion;
    manifest["config"] = nlohmann::json::parse(config_to_json(config));
    manifest["termination"] = to_string(traj.termination);
    manifest["snapshots"] = snaps;
    manifest["diagnostics_csv"] = "diagnostics.csv";
    manifest["csv_columns"] = diagnostics_csv_header();
    manifest["wall_clock_seconds"] = wall;
    std::ofstream mf(fs::path(out_dir) / "manifest.json", std::ios::trunc);
    mf << manifest.dump(2) << "\n";
    if (!mf) throw std::runtime_error("run: manifest write failed");
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitError;
  }

  switch (traj.termination) {
    case Termination::completed: return kExitOk;
    case Termination::blowup_detected: return kExitBlowup;
    case Termination::step_rejected: return kExitStepRejected;
  }
  return kExitError;
}

int cmd_check_grad(const std::string& config_path) {
  FlowConfig config;
  try {
    config = parse_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitError;
  }
  bool sabotage = std::getenv("SWFLOW_CHECKGRAD_NEGATE") != nullptr;

  SpinorField phi = random_band_limited(config.grid, 0, config.init.spinor_rank,
                                        config.init.kmax, config.init.seed,
                                        config.init.amp_phi, false);
  ConnectionForm a = random_band_limited(config.grid, 1, 1, config.init.kmax,
                                         config.init.seed + 1, config.init.amp_a, true);
  double worst_phi = 0.0, worst_a = 0.0;
  for (int k = 0; k <= 2; ++k) {
    FdCheckResult r = fd_gradient_check(a, phi, k, config.s0, config.fd_h,
                                        config.fd_directions, config.init.seed,
                                        config.dealias, sabotage);
    std::cout << "k=" << k << " rel_err_phi=" << r.rel_err_phi
              << " rel_err_A=" << r.rel_err_a << "\n";
    worst_phi = std::max(worst_phi, r.rel_err_phi);
    worst_a = std::max(worst_a, r.rel_err_a);
  }
  std::cout << "worst rel_err_phi=" << worst_phi << " worst rel_err_A=" << worst_a << "\n";
  return (worst_phi < 1e-6 && worst_a < 1e-6) ? kExitOk : kExitVerifyFailed;
}

int cmd_scan(const std::string& manifest_path, double p, double epsilon,
             std::vector<double> radii) {
  namespace fs = std::filesystem;
  nlohmann::json manifest;
  try {
    std::ifstream in(manifest_path);
    if (!in) throw std::runtime_error("scan: cannot open " + manifest_path);
    manifest = nlohmann::json::parse(in);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitError;
  }

  try {
    int k = manifest.at("config").at("k").get<int>();
    if (p <= 0.0) p = k + 2.0;
    if (radii.empty()) throw std::invalid_argument("scan: no radii given");
    for (std::size_t i = 1; i < radii.size(); ++i)
      if (!(radii[i] < radii[i - 1]))
        throw std::invalid_argument("scan: radii must be strictly descending");

    const auto& snaps = manifest.at("snapshots");
    if (snaps.empty()) throw std::invalid_argument("scan: manifest lists no snapshots");
    fs::path dir = fs::path(manifest_path).parent_path();

    std::vector<std::pair<double, Field>> fsnaps;
    std::vector<std::vector<double>> argmax_centers;
    double running = -1.0;
    for (const auto& s : snaps) {
      LoadedSnapshot snap = read_snapshot((dir / s.at("a").get<std::string>()).string());
      TwoForm f = curvature(snap.field);
      Eigen::ArrayXd pn2 = pointwise_norm2(f);
      Eigen::Index arg = 0;
      double sup = std::sqrt(pn2.maxCoeff(&arg));
      if (sup > running) {
        running = sup;
        const TorusGrid& g = f.grid;
        std::vector<double> x(g.n);
        std::int64_t rem = arg;
        for (int a2 = g.n - 1; a2 >= 0; --a2) {
          x[a2] = g.coord(a2, static_cast<int>(rem % g.sizes[a2]));
          rem /= g.sizes[a2];
        }
        argmax_centers.push_back(std::move(x));
      }
      fsnaps.emplace_back(s.at("time").get<double>(), std::move(f));
    }

    // Coarse sublattice of centers plus the running sup|F| argmax points.
    const TorusGrid& g = fsnaps.front().second.grid;
    std::vector<std::vector<double>> centers;
    std::vector<int> steps(g.n);
    for (int a2 = 0; a2 < g.n; ++a2) steps[a2] = std::max(1, g.sizes[a2] / 4);
    std::vector<int> idx(g.n, 0);
    bool done = false;
    while (!done) {
      std::vector<double> x(g.n);
      for (int a2 = 0; a2 < g.n; ++a2) x[a2] = g.coord(a2, idx[a2]);
      centers.push_back(std::move(x));
      done = true;
      for (int a2 = g.n - 1; a2 >= 0; --a2) {
        idx[a2] += steps[a2];
        if (idx[a2] < g.sizes[a2]) {
          done = false;
          break;
        }
        idx[a2] = 0;
      }
    }
    centers.insert(centers.end(), argmax_centers.begin(), argmax_centers.end());

    ConcentrationReport rep = concentration_scan(fsnaps, p, radii, centers, epsilon);
    write_concentration_csv(rep, (dir / "scan.csv").string());

    if (rep.flagged_center_ids.empty()) {
      std::cout << "no concentration flags\n";
    } else {
      for (int id : rep.flagged_center_ids) {
        std::cout << "flagged center " << id << " at (";
        for (int a2 = 0; a2 < g.n; ++a2)
          std::cout << (a2 ? ", " : "") << centers[id][a2];
        std::cout << ")\n";
      }
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitError;
  }
}

int cmd_gauge_verify(const std::string& config_path) {
  FlowConfig config;
  try {
    config = parse_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitError;
  }

  FlowConfig deturck = config;
  deturck.integrator = Integrator::imex_deturck;
  FlowConfig direct = config;
  direct.integrator = Integrator::rk4_direct;

  Trajectory traj_p = run_flow(deturck);
  Trajectory traj_d = run_flow(direct);
  if (traj_p.termination == Termination::step_rejected ||
      traj_d.termination == Termination::step_rejected) {
    std::cerr << "gauge-verify: step rejected\n";
    return kExitStepRejected;
  }

  Trajectory reconstructed = deturck_to_flow(traj_p);
  const FlowState& u = reconstructed.entries.back().state;
  const FlowState& v = traj_d.entries.back().state;
  double num = l2_norm(u.phi - v.phi) + l2_norm(u.a - v.a);
  double den = l2_norm(v.phi) + l2_norm(v.a);
  double disc = den == 0.0 ? num : num / den;

  double res_p = max_trajectory_residual(reconstructed);
  double res_d = max_trajectory_residual(traj_d);
  std::cout << "terminal relative discrepancy = " << disc << "\n";
  std::cout << "reconstructed DeTurck residual = " << res_p << "\n";
  std::cout << "direct residual = " << res_d << "\n";
  return disc < 1e-4 ? kExitOk : kExitVerifyFailed;
}

}  // namespace swflow
