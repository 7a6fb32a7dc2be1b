// visco-emc: finite-deformation incompressible viscoelastodynamics with
// energy-momentum consistent time integration.
//
//   visco-emc run <config>             time-march a configured problem
//   visco-emc converge <config>        temporal convergence study vs overkill
//   visco-emc material-point           constitutive-level convergence rates
//   visco-emc verify-tangent           FD checks of the algorithmic tangents
//
// Exit codes: 0 ok, 2 configuration error, 3 non-convergence,
// 4 verification failure.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <random>

#include "visco/config.hpp"
#include "visco/driver.hpp"
#include "visco/material_point.hpp"

namespace fs = std::filesystem;
using namespace visco;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNonConvergence = 3;
constexpr int kExitVerification = 4;

struct Overrides {
  std::string out_dir;
  std::string scheme;
  double gamma = -1.0;
  double dt = -1.0;
};

void add_common_flags(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--out", ov.out_dir, "output directory (created if missing)");
  cmd->add_option("--scheme", ov.scheme, "override the time scheme (1 | 2 | mp)")
      ->check(CLI::IsMember({"1", "2", "mp"}));
  cmd->add_option("--gamma", ov.gamma, "override the grad-div parameter");
  cmd->add_option("--dt", ov.dt, "override the time step size");
}

void apply_overrides(RunConfig& cfg, const Overrides& ov) {
  if (!ov.scheme.empty()) {
    cfg.solver.scheme = ov.scheme == "1"   ? SchemeKind::Scheme1
                        : ov.scheme == "2" ? SchemeKind::Scheme2
                                           : SchemeKind::Midpoint;
  }
  if (ov.gamma >= 0.0) cfg.solver.gamma = ov.gamma;
  if (ov.dt > 0.0) cfg.solver.dt = ov.dt;
}

std::string in_out_dir(const std::string& dir, const std::string& path) {
  if (dir.empty() || path.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(dir) / path).string();
}

std::vector<double> parse_dt_list(const std::string& csv) {
  std::vector<double> out;
  std::string item;
  std::istringstream ss(csv);
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

int cmd_run(const std::string& config_path, const Overrides& ov) {
  RunConfig cfg = parse_config_file(config_path);
  apply_overrides(cfg, ov);
  const RunSummary summary = run_configured(cfg, ov.out_dir);
  std::cout << "completed " << summary.steps << " steps to t = " << summary.t_end << " ("
            << summary.total_iterations << " corrector solves)\n";
  return 0;
}

int cmd_converge(const std::string& config_path, const Overrides& ov,
                 const std::string& dts_csv, double overkill, double t_probe) {
  RunConfig cfg = parse_config_file(config_path);
  apply_overrides(cfg, ov);
  const auto dts = parse_dt_list(dts_csv);
  if (dts.empty()) throw ConfigError("--dts: at least one step size required");
  if (!(overkill > 0.0) || overkill > *std::min_element(dts.begin(), dts.end())) {
    throw ConfigError("--overkill must be positive and below every entry of --dts");
  }

  const auto table = convergence_study(cfg, dts, overkill, t_probe);
  std::cout << "# dt err_U err_V err_P\n";
  for (const auto& row : table.rows) {
    if (!row.converged) {
      std::cout << row.dt << " non-convergent (excluded)\n";
      continue;
    }
    std::cout << row.dt << ' ' << row.err_u << ' ' << row.err_v << ' ' << row.err_p << '\n';
  }
  std::cout << "slopes: U " << table.slope_u << "  V " << table.slope_v << "  P "
            << table.slope_p << '\n';
  if (!ov.out_dir.empty()) {
    fs::create_directories(ov.out_dir);
    std::ofstream out(fs::path(ov.out_dir) / "convergence.csv");
    out << "dt,err_u,err_v,err_p,converged\n";
    out.precision(17);
    for (const auto& row : table.rows) {
      out << row.dt << ',' << row.err_u << ',' << row.err_v << ',' << row.err_p << ','
          << row.converged << '\n';
    }
  }
  return 0;
}

int cmd_material_point(const Overrides& ov, const std::string& dts_csv, double overkill,
                       double t_end, double amplitude, double omega,
                       const std::string& kind) {
  const auto dts = parse_dt_list(dts_csv);
  if (dts.empty()) throw ConfigError("--dts: at least one step size required");

  MaterialParams mat;
  mat.rho0 = 1000.0;
  mat.equilibrium = {25000.0 / 6.0, 25000.0 / 6.0};
  ViscoBranch b;
  b.kind = kind == "mipc" ? BranchKind::MIPC : BranchKind::HS;
  b.mu = mat.equilibrium.c1;
  b.eta = 0.1 * b.mu;
  mat.branches = {b};
  mat.initialize_branch_offsets(SymTensor2::identity());

  const SchemeKind scheme = ov.scheme == "1" ? SchemeKind::Scheme1 : SchemeKind::Scheme2;
  const auto rows = material_point_errors(isochoric_uniaxial_path(amplitude, omega), dts,
                                          overkill, t_end, scheme, mat);
  std::vector<double> dv, eg, eq;
  std::cout << "# dt err_Gamma1 err_Q1\n";
  for (const auto& r : rows) {
    std::cout << r.dt << ' ' << r.err_gamma << ' ' << r.err_q << '\n';
    dv.push_back(r.dt);
    eg.push_back(r.err_gamma);
    eq.push_back(r.err_q);
  }
  std::cout << "slopes: Gamma1 " << fit_rate(dv, eg) << "  Q1 " << fit_rate(dv, eq) << '\n';
  if (!ov.out_dir.empty()) {
    fs::create_directories(ov.out_dir);
    std::ofstream out(fs::path(ov.out_dir) / "material_point.csv");
    out << "dt,err_gamma,err_q\n";
    out.precision(17);
    for (const auto& r : rows) out << r.dt << ',' << r.err_gamma << ',' << r.err_q << '\n';
  }
  return 0;
}

int cmd_verify_tangent(int samples) {
  std::mt19937 rng(2024);
  auto rand_mat = [&](double s) {
    std::uniform_real_distribution<double> d(-s, s);
    Tensor2 m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = d(rng);
    return m;
  };
  auto rand_spd = [&] {
    const Tensor2 f = Tensor2::Identity() + rand_mat(0.3);
    return SymTensor2::from_matrix(f.transpose() * f);
  };

  bool ok = true;
  const double h = 1e-7;
  auto check = [&](SchemeKind sch, BranchKind kind, const char* label) {
    MaterialParams mat;
    mat.rho0 = 1000.0;
    mat.equilibrium = {25000.0 / 6.0, 25000.0 / 6.0};
    ViscoBranch b;
    b.kind = kind;
    b.mu = mat.equilibrium.c1;
    b.eta = 0.1 * b.mu;
    b.beta_inf = 1.0;
    mat.branches = {b};
    mat.initialize_branch_offsets(SymTensor2::identity());

    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
      const double dt = std::pow(10.0, -1.0 - (s % 3));
      const SymTensor2 c_n = rand_spd();
      const SymTensor2 c_np1 = rand_spd();
      const StepPair pair = step_pair(c_n, c_np1, Tensor2::Identity(), dt);
      const std::vector<SymTensor2> gn{SymTensor2::identity() +
                                       SymTensor2::from_matrix(rand_mat(0.2))};
      const SymTensor4 cc = algorithmic_tangent(sch, pair, gn, dt, mat, 1e-10);
      Mat6 fd;
      for (int slot = 0; slot < 6; ++slot) {
        SymTensor2 cp = c_np1, cm = c_np1;
        cp.component(slot) += h;
        cm.component(slot) -= h;
        const SymTensor2 sp =
            algorithmic_stress(sch, step_pair(c_n, cp, Tensor2::Identity(), dt), gn, dt,
                               mat, 1e-10)
                .S_alg;
        const SymTensor2 sm =
            algorithmic_stress(sch, step_pair(c_n, cm, Tensor2::Identity(), dt), gn, dt,
                               mat, 1e-10)
                .S_alg;
        const double w = slot < 3 ? 2.0 : std::sqrt(2.0);
        fd.col(slot) = (sp - sm).mandel() * (w / (2.0 * h));
      }
      worst = std::max(worst, (cc.mandel() - fd).norm() / fd.norm());
    }
    const bool pass = worst < 1e-6;
    ok = ok && pass;
    std::cout << (pass ? "PASS" : "FAIL") << ' ' << label << ": max relative FD mismatch "
              << worst << " (tol 1e-6, " << samples << " samples)\n";
  };

  check(SchemeKind::Scheme1, BranchKind::HS, "Scheme-1");
  check(SchemeKind::Scheme2, BranchKind::HS, "Scheme-2 HS");
  check(SchemeKind::Scheme2, BranchKind::MIPC, "Scheme-2 MIPC");

  // global block Jacobian on a one-element mesh
  {
    const auto mesh = generate_box_mesh({1, 1, 1}, {1, 1, 1});
    TaylorHoodSpace space(mesh);
    space.constrain_face_set("zmin", {true, true, true});
    MaterialParams mat;
    mat.rho0 = 1000.0;
    mat.equilibrium = {25000.0 / 6.0, 25000.0 / 6.0};
    ViscoBranch b;
    b.kind = BranchKind::HS;
    b.mu = mat.equilibrium.c1;
    b.eta = 0.1 * b.mu;
    mat.branches = {b};
    mat.initialize_branch_offsets(SymTensor2::identity());
    InternalStateField state(1, space.n_qp_per_element(), 1);
    LoadSpec loads;
    const double dt = 0.01;
    AssemblyControls ctl{dt, 0.005, 0.0, 1e-10, SchemeKind::Scheme2};

    SolutionVector y_old = SolutionVector::zeros(space);
    SolutionVector y_base = SolutionVector::zeros(space);
    for (int n = 0; n < space.n_vel_nodes(); ++n) {
      y_old.U.segment<3>(3 * n) = 0.03 * Vector3(rand_mat(1.0).col(0));
      y_old.V.segment<3>(3 * n) = 0.5 * Vector3(rand_mat(1.0).col(1));
      y_base.V.segment<3>(3 * n) = 0.5 * Vector3(rand_mat(1.0).col(2));
    }
    for (int d = 0; d < space.n_vel_dofs(); ++d) {
      if (space.is_constrained(d)) y_old.U[d] = y_old.V[d] = y_base.V[d] = 0.0;
    }
    for (int n = 0; n < space.n_p_nodes(); ++n) {
      y_old.P[n] = 40.0 * rand_mat(1.0)(0, 0);
      y_base.P[n] = 40.0 * rand_mat(1.0)(0, 0);
    }
    auto complete = [&](SolutionVector y) {
      y.U = y_old.U + 0.5 * dt * (y.V + y_old.V);
      return y;
    };
    const auto blocks =
        assemble_tangent(space, complete(y_base), y_old, state, mat, loads, ctl);
    const int nv = space.n_vel_dofs(), np = space.n_p_nodes();
    auto residual_at = [&](const SolutionVector& y) {
      const auto r = assemble_residuals(space, y, y_old, state, mat, loads, ctl);
      Vector full(nv + np);
      full.head(nv) = r.Rm;
      full.tail(np) = r.Rp;
      return full;
    };
    Eigen::MatrixXd fd(nv + np, nv + np);
    for (int d = 0; d < nv + np; ++d) {
      SolutionVector yp = y_base, ym = y_base;
      if (d < nv) {
        if (space.is_constrained(d)) {
          fd.col(d).setZero();
          fd(d, d) = 1.0;
          continue;
        }
        yp.V[d] += h;
        ym.V[d] -= h;
      } else {
        yp.P[d - nv] += h;
        ym.P[d - nv] -= h;
      }
      fd.col(d) = (residual_at(complete(yp)) - residual_at(complete(ym))) / (2.0 * h);
    }
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nv + np, nv + np);
    K.topLeftCorner(nv, nv) = Eigen::MatrixXd(blocks.A);
    K.topRightCorner(nv, np) = Eigen::MatrixXd(blocks.B);
    K.bottomLeftCorner(np, nv) = Eigen::MatrixXd(blocks.Cb);
    const double err = (K - fd).norm() / fd.norm();
    const bool pass = err < 1e-5;
    ok = ok && pass;
    std::cout << (pass ? "PASS" : "FAIL")
              << " global block Jacobian (1-element mesh): relative mismatch " << err
              << " (tol 1e-5)\n";
  }
  return ok ? 0 : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"energy-momentum consistent incompressible viscoelastodynamics"};
  app.require_subcommand(1);

  Overrides ov;
  std::string config_path, dts_csv = "4e-3,2e-3,1e-3,5e-4,2.5e-4";
  double overkill = 1e-5, t_probe = 0.1, t_end = 0.1, amplitude = 0.2, omega = 4.0;
  std::string mp_kind = "hs";
  int samples = 100;

  auto* run = app.add_subcommand("run", "time-march a configured problem");
  run->add_option("config", config_path, "configuration file")->required();
  add_common_flags(run, ov);

  auto* conv = app.add_subcommand("converge", "temporal convergence study");
  conv->add_option("config", config_path, "configuration file")->required();
  conv->add_option("--dts", dts_csv, "comma-separated step sizes");
  conv->add_option("--overkill", overkill, "overkill step size");
  conv->add_option("--probe-time", t_probe, "comparison time");
  add_common_flags(conv, ov);

  auto* mp = app.add_subcommand("material-point", "constitutive convergence rates");
  mp->add_option("--dts", dts_csv, "comma-separated step sizes");
  mp->add_option("--overkill", overkill, "overkill step size");
  mp->add_option("--tend", t_end, "probe time");
  mp->add_option("--amplitude", amplitude, "path stretch amplitude");
  mp->add_option("--omega", omega, "path angular frequency");
  mp->add_option("--kind", mp_kind, "branch kind (hs | mipc)")
      ->check(CLI::IsMember({"hs", "mipc"}));
  add_common_flags(mp, ov);

  auto* vt = app.add_subcommand("verify-tangent", "finite-difference tangent checks");
  vt->add_option("--samples", samples, "random states per check");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, ov);
    if (conv->parsed()) return cmd_converge(config_path, ov, dts_csv, overkill, t_probe);
    if (mp->parsed())
      return cmd_material_point(ov, dts_csv, overkill, t_end, amplitude, omega, mp_kind);
    if (vt->parsed()) return cmd_verify_tangent(samples);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  } catch (const NonConvergenceError& e) {
    std::cerr << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  return 0;
}
