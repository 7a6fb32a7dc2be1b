// Acceptance suite: one pass/fail line per criterion, grouped so expensive
// simulations are shared. Groups (run all when no arguments are given):
//   energy       criteria 1-3: L-block energy balance, momenta, kinematic residual
//   convergence  criterion 4: temporal orders (material point + 1-element FEM)
//   identities   criteria 5-6: enhancement orders and directionality identities
//   tangents     criterion 7: FD checks of the algorithmic tangents
//   midpoint     criterion 8: Scheme-2 vs mid-point energy-balance contrast
//   graddiv      criterion 9: grad-div efficacy and momentum neutrality
//   relaxation   criterion 10: frozen-strain relaxation oracle
//   hysteresis   qualitative shear-test loops

#include <algorithm>
#include <cmath>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "visco/config.hpp"
#include "visco/material_point.hpp"
#include "visco/output.hpp"

using namespace visco;

namespace {

int g_failures = 0;

void report(const std::string& criterion, bool pass, const std::string& detail) {
  std::cout << (pass ? "PASS " : "FAIL ") << criterion << ": " << detail << std::endl;
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(3);
  ss << std::scientific << v;
  return ss.str();
}

MaterialParams lblock_material(BranchKind kind) {
  MaterialParams mat;
  mat.rho0 = 1000.0;
  const double E = 25000.0;
  mat.equilibrium = {E / 6.0, E / 6.0};
  ViscoBranch b;
  b.kind = kind;
  b.mu = E / 6.0;
  b.eta = 0.1 * b.mu;
  b.beta_inf = 1.0;
  mat.branches = {b};
  mat.initialize_branch_offsets(SymTensor2::identity());
  return mat;
}

MaterialParams shear_material() {
  MaterialParams mat;
  mat.rho0 = 1000.0;
  const double E = 625.72e3;
  mat.equilibrium = {E / 6.0, E / 6.0};
  ViscoBranch b;
  b.kind = BranchKind::HS;
  b.mu = 536.224e3;
  b.eta = 0.5 * b.mu;
  mat.branches = {b};
  mat.initialize_branch_offsets(SymTensor2::identity());
  return mat;
}

LoadSpec lblock_loads() {
  LoadSpec loads;
  loads.tractions.push_back({"h1", Vector3(-250, 100, -300), TimeFunction::hat(2.5, 5.0)});
  loads.tractions.push_back({"h2", Vector3(150, -250, 350), TimeFunction::hat(2.5, 5.0)});
  return loads;
}

struct LBlockRun {
  std::vector<StepDiagnostics> series;
  double v_inf = 0.0;  // velocity scale of the run
};

LBlockRun run_lblock(SchemeKind scheme, double gamma, int n_steps) {
  // 48-element variant of the 180-element default: same geometry, desk scale
  const HexMesh mesh = generate_lblock_mesh({1.0, 3.0, 1.0, 2, 3, 3});
  TaylorHoodSpace space(mesh);
  auto mat = lblock_material(BranchKind::HS);
  InternalStateField state(mesh.n_elements(), space.n_qp_per_element(), 1);
  SolverConfig cfg;
  cfg.dt = 0.1;
  cfg.T = 0.1 * n_steps;
  cfg.scheme = scheme;
  cfg.gamma = gamma;

  LBlockRun out;
  auto result = run_simulation(space, state, mat, lblock_loads(), cfg);
  out.series = std::move(result.series);
  out.v_inf = result.Y.V.lpNorm<Eigen::Infinity>();
  for (const auto& d : out.series) {
    out.v_inf = std::max(out.v_inf, d.probe_v.lpNorm<Eigen::Infinity>());
  }
  return out;
}

void check_momentum(const std::string& label, const std::vector<StepDiagnostics>& series) {
  Vector3 l_ref = Vector3::Zero(), j_ref = Vector3::Zero();
  double l_peak = 0.0, j_peak = 0.0, l_drift = 0.0, j_drift = 0.0;
  bool have_ref = false;
  for (const auto& d : series) {
    l_peak = std::max(l_peak, d.mom.L.lpNorm<Eigen::Infinity>());
    j_peak = std::max(j_peak, d.mom.Jm.lpNorm<Eigen::Infinity>());
    if (d.t < 5.0 - 1e-9) continue;
    if (!have_ref) {
      l_ref = d.mom.L;
      j_ref = d.mom.Jm;
      have_ref = true;
      continue;
    }
    l_drift = std::max(l_drift, (d.mom.L - l_ref).lpNorm<Eigen::Infinity>());
    j_drift = std::max(j_drift, (d.mom.Jm - j_ref).lpNorm<Eigen::Infinity>());
  }
  const bool pass = l_drift <= 1e-9 * l_peak && j_drift <= 1e-9 * j_peak;
  report("criterion 2 (momentum conservation, " + label + ")", pass,
         "|L-L_ref| " + fmt(l_drift) + " vs " + fmt(1e-9 * l_peak) + ", |J-J_ref| " +
             fmt(j_drift) + " vs " + fmt(1e-9 * j_peak));
}

void group_energy() {
  for (SchemeKind scheme : {SchemeKind::Scheme1, SchemeKind::Scheme2}) {
    const std::string label = scheme == SchemeKind::Scheme1 ? "Scheme-1" : "Scheme-2";
    const auto run = run_lblock(scheme, 0.0, 200);

    double scale = 0.0, worst = 0.0, worst_rk = 0.0;
    for (const auto& d : run.series) scale = std::max(scale, std::abs(d.budget.H));
    for (const auto& d : run.series) {
      worst = std::max(worst, std::abs(d.budget.balance_residual));
      worst_rk = std::max(worst_rk, d.report.rk_inf);
    }
    report("criterion 1 (energy consistency, " + label + ")", worst <= 1e-9 * scale,
           "max |H_jump + (D_phy - P_ext) dt| " + fmt(worst) + " vs " + fmt(1e-9 * scale));
    check_momentum(label, run.series);
    report("criterion 3 (kinematic residual, " + label + ")",
           worst_rk <= 1e-14 * run.v_inf,
           "max |R^k|_inf " + fmt(worst_rk) + " vs " + fmt(1e-14 * run.v_inf));
  }
}

RunConfig one_element_problem() {
  RunConfig cfg;
  cfg.mesh.type = MeshConfig::Type::Box;
  cfg.mesh.lengths = {1, 1, 1};
  cfg.mesh.divisions = {1, 1, 1};
  cfg.material = lblock_material(BranchKind::HS);
  // a stiff relaxation branch keeps the viscous first-order error visible
  // above the curvature terms, so Scheme-1's asymptotic range opens by
  // dt ~ 2e-4 (as on the tumbling-block problem)
  cfg.material.branches[0].mu = 10.0 * cfg.material.equilibrium.c1;
  cfg.material.branches[0].eta = 0.1 * cfg.material.branches[0].mu;
  cfg.loads.tractions.push_back(
      {"xmax", Vector3(-5000, 2000, -6000), TimeFunction::hat(2.5, 5.0)});
  cfg.solver.scheme = SchemeKind::Scheme2;
  return cfg;
}

void group_convergence() {
  const auto mat = lblock_material(BranchKind::HS);
  const auto path = isochoric_uniaxial_path(0.2, 4.0);
  const std::vector<double> dts{4e-3, 2e-3, 1e-3, 5e-4, 2.5e-4};
  const double t_probe = 0.1;

  auto slopes = [&](SchemeKind sch) {
    const auto rows = material_point_errors(path, dts, 1e-5, t_probe, sch, mat);
    std::vector<double> dv, eg, eq;
    for (const auto& r : rows) {
      dv.push_back(r.dt);
      eg.push_back(r.err_gamma);
      eq.push_back(r.err_q);
    }
    return std::pair{fit_rate(dv, eg), fit_rate(dv, eq)};
  };

  const auto [g2, q2] = slopes(SchemeKind::Scheme2);
  const auto [g1, q1] = slopes(SchemeKind::Scheme1);

  RunConfig base = one_element_problem();
  const auto fem2 = convergence_study(base, dts, 1e-5, t_probe);
  base.solver.scheme = SchemeKind::Scheme1;
  // Scheme-1's U, V, P orders only emerge below dt ~ 2e-4
  const auto fem1 = convergence_study(base, {2e-4, 1e-4, 5e-5}, 1e-5, t_probe);

  auto within = [](double slope, double want, double tol) {
    return std::abs(slope - want) <= tol;
  };
  const bool pass2 = within(g2, 2.0, 0.15) && within(q2, 2.0, 0.15) &&
                     within(fem2.slope_u, 2.0, 0.15) && within(fem2.slope_v, 2.0, 0.15) &&
                     within(fem2.slope_p, 2.0, 0.15);
  report("criterion 4 (temporal convergence, Scheme-2)", pass2,
         "slopes Gamma " + fmt(g2) + ", Q " + fmt(q2) + ", U " + fmt(fem2.slope_u) +
             ", V " + fmt(fem2.slope_v) + ", P " + fmt(fem2.slope_p) + " (want 2.0 +- 0.15)");
  const bool pass1 = within(g1, 1.0, 0.15) && within(q1, 1.0, 0.15) &&
                     within(fem1.slope_u, 1.0, 0.15) && within(fem1.slope_v, 1.0, 0.15) &&
                     within(fem1.slope_p, 1.0, 0.15);
  report("criterion 4 (temporal convergence, Scheme-1)", pass1,
         "slopes Gamma " + fmt(g1) + ", Q " + fmt(q1) + ", U " + fmt(fem1.slope_u) +
             ", V " + fmt(fem1.slope_v) + ", P " + fmt(fem1.slope_p) +
             " (want 1.0 +- 0.15; U,V,P on dt <= 2e-4)");
}

void group_identities() {
  // criterion 5: local truncation orders of the two stress enhancements
  {
    auto mat = lblock_material(BranchKind::HS);
    auto path = [](double t) {
      const double lam = 1.0 + 0.3 * std::sin(1.7 * t);
      const double sh = 0.2 * std::sin(2.3 * t);
      Tensor2 f = Tensor2::Identity();
      f(0, 0) = lam;
      f(1, 1) = 1.0 / std::sqrt(lam);
      f(2, 2) = 1.0 / std::sqrt(lam);
      f(0, 1) = sh;
      return SymTensor2::from_matrix(f.transpose() * f);
    };
    const double t_star = 0.4;
    SymTensor2 g_ref = SymTensor2::identity();
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      g_ref = update_gamma_s2(unimodular(path(i * (t_star / n))),
                              unimodular(path((i + 1) * (t_star / n))), g_ref, t_star / n,
                              mat.branches[0], mat.equilibrium);
    }
    std::vector<double> dts, e1, e2;
    for (int k = 0; k < 6; ++k) dts.push_back(1e-2 / std::pow(2.0, k));
    for (double dt : dts) {
      const StepPair p =
          step_pair(path(t_star), path(t_star + dt), Tensor2::Identity(), dt);
      const std::vector<SymTensor2> gn{g_ref};
      const auto r1 = algorithmic_stress(SchemeKind::Scheme1, p, gn, dt, mat, 1e-10);
      const auto r2 = algorithmic_stress(SchemeKind::Scheme2, p, gn, dt, mat, 1e-10);
      e1.push_back((r1.S_alg - r1.S_mid_config).norm());
      e2.push_back((r2.S_alg - r2.S_mid_config).norm());
    }
    const double s1 = fit_rate(dts, e1), s2 = fit_rate(dts, e2);
    report("criterion 5 (stress-enhancement orders)",
           std::abs(s1 - 1.0) <= 0.15 && std::abs(s2 - 2.0) <= 0.15,
           "|S_enh1| slope " + fmt(s1) + " (want 1 +- 0.15), |S_enh2| slope " + fmt(s2) +
               " (want 2 +- 0.15)");
  }

  // criterion 6: directionality identities on 1000 random states per scheme
  {
    std::mt19937 rng(7);
    auto rand_mat = [&](double s) {
      std::uniform_real_distribution<double> d(-s, s);
      Tensor2 m;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = d(rng);
      return m;
    };
    auto rand_spd = [&] {
      const Tensor2 f = Tensor2::Identity() + rand_mat(0.35);
      return SymTensor2::from_matrix(f.transpose() * f);
    };
    auto mat = lblock_material(BranchKind::MIPC);
    mat.branches.push_back(lblock_material(BranchKind::HS).branches[0]);

    double worst38 = 0.0, worst44 = 0.0, worst_l3 = 0.0, worst_l4 = 0.0;
    for (int s = 0; s < 1000; ++s) {
      const double dt = std::pow(10.0, -1.0 - (s % 3));
      const StepPair p = step_pair(rand_spd(), rand_spd(), Tensor2::Identity(), dt);
      const std::vector<SymTensor2> gn{
          SymTensor2::identity() + SymTensor2::from_matrix(rand_mat(0.2)),
          SymTensor2::identity() + SymTensor2::from_matrix(rand_mat(0.2))};

      for (SchemeKind sch : {SchemeKind::Scheme1, SchemeKind::Scheme2}) {
        const auto res = algorithmic_stress(sch, p, gn, dt, mat, 1e-10);
        const auto chk = directionality_check(p, gn, res, dt, mat);
        worst38 = std::max(worst38, std::abs(chk.residual()) / chk.scale());
      }

      // per-branch conjugate identities
      double dissip = 0.0;
      std::vector<SymTensor2> g1(gn.size()), gh(gn.size());
      for (std::size_t a = 0; a < gn.size(); ++a) {
        const auto& b = mat.branches[a];
        // Scheme-1 (Eq. 44 mechanism)
        const SymTensor2 gs1 = update_gamma_s1(p.Ctilde_n, gn[a], dt, b, mat.equilibrium);
        const SymTensor2 qs1 =
            q_alg(SchemeKind::Scheme1, p.Ctilde_n, p.Ctilde_np1, gn[a], gs1, b,
                  mat.equilibrium);
        const double lhs1 = ddot(qs1, gs1 - gn[a]);
        const double rhs1 = -2.0 * (upsilon(p.Ctilde_n, gs1, b, mat.equilibrium) -
                                    upsilon(p.Ctilde_n, gn[a], b, mat.equilibrium));
        worst44 = std::max(worst44, std::abs(lhs1 - rhs1) /
                                        (std::abs(lhs1) + std::abs(rhs1) + b.mu));

        // Scheme-2 (Lemma 3)
        g1[a] = update_gamma_s2(p.Ctilde_n, p.Ctilde_np1, gn[a], dt, b, mat.equilibrium);
        gh[a] = (gn[a] + g1[a]) * 0.5;
        const SymTensor2 qs2 = q_alg(SchemeKind::Scheme2, p.Ctilde_n, p.Ctilde_np1, gn[a],
                                     g1[a], b, mat.equilibrium);
        const double lhs3 =
            upsilon(p.Ctilde_np1, g1[a], b, mat.equilibrium) -
            upsilon(p.Ctilde_np1, gh[a], b, mat.equilibrium) +
            upsilon(p.Ctilde_n, gh[a], b, mat.equilibrium) -
            upsilon(p.Ctilde_n, gn[a], b, mat.equilibrium);
        const double rhs3 = -0.5 * ddot(qs2, g1[a] - gn[a]);
        worst_l3 = std::max(worst_l3, std::abs(lhs3 - rhs3) /
                                          (std::abs(lhs3) + std::abs(rhs3) + b.mu));
        const SymTensor2 rate = (g1[a] - gn[a]) * (1.0 / dt);
        dissip += b.eta * ddot(rate, rate);
      }
      // Lemma 4: summed four-point energy identity with the Scheme-2 update
      const double lhs4 = gibbs_iso(p.Ctilde_np1, g1, mat) - gibbs_iso(p.Ctilde_np1, gh, mat) +
                          gibbs_iso(p.Ctilde_n, gh, mat) - gibbs_iso(p.Ctilde_n, gn, mat);
      const double rhs4 = -0.5 * dt * dissip;
      worst_l4 = std::max(worst_l4, std::abs(lhs4 - rhs4) /
                                        (std::abs(lhs4) + std::abs(rhs4) +
                                         mat.equilibrium.c1));
    }
    const bool pass = worst38 <= 1e-11 && worst44 <= 1e-11 && worst_l3 <= 1e-11 &&
                      worst_l4 <= 1e-11;
    report("criterion 6 (directionality identities)", pass,
           "relative residuals: stress " + fmt(worst38) + ", conjugate-1 " + fmt(worst44) +
               ", conjugate-2 " + fmt(worst_l3) + ", summed " + fmt(worst_l4) +
               " (tol 1e-11, 1000 states)");
  }
}

void group_tangents() {
  std::mt19937 rng(2024);
  auto rand_mat = [&](double s) {
    std::uniform_real_distribution<double> d(-s, s);
    Tensor2 m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = d(rng);
    return m;
  };
  const double h = 1e-7;
  auto fd_worst = [&](SchemeKind sch, BranchKind kind) {
    auto mat = lblock_material(kind);
    double worst = 0.0;
    for (int s = 0; s < 100; ++s) {
      const double dt = std::pow(10.0, -1.0 - (s % 3));
      const Tensor2 f1 = Tensor2::Identity() + rand_mat(0.3);
      const Tensor2 f2 = Tensor2::Identity() + rand_mat(0.3);
      const SymTensor2 c_n = SymTensor2::from_matrix(f1.transpose() * f1);
      const SymTensor2 c_np1 = SymTensor2::from_matrix(f2.transpose() * f2);
      const StepPair pair = step_pair(c_n, c_np1, Tensor2::Identity(), dt);
      const std::vector<SymTensor2> gn{SymTensor2::identity() +
                                       SymTensor2::from_matrix(rand_mat(0.2))};
      const SymTensor4 cc = algorithmic_tangent(sch, pair, gn, dt, mat, 1e-10);
      Mat6 fd;
      for (int slot = 0; slot < 6; ++slot) {
        SymTensor2 cp = c_np1, cm = c_np1;
        cp.component(slot) += h;
        cm.component(slot) -= h;
        const auto sp = algorithmic_stress(sch, step_pair(c_n, cp, Tensor2::Identity(), dt),
                                           gn, dt, mat, 1e-10);
        const auto sm = algorithmic_stress(sch, step_pair(c_n, cm, Tensor2::Identity(), dt),
                                           gn, dt, mat, 1e-10);
        const double w = slot < 3 ? 2.0 : std::sqrt(2.0);
        fd.col(slot) = (sp.S_alg - sm.S_alg).mandel() * (w / (2.0 * h));
      }
      worst = std::max(worst, (cc.mandel() - fd).norm() / fd.norm());
    }
    return worst;
  };

  const double w1 = fd_worst(SchemeKind::Scheme1, BranchKind::HS);
  const double w2h = fd_worst(SchemeKind::Scheme2, BranchKind::HS);
  const double w2m = fd_worst(SchemeKind::Scheme2, BranchKind::MIPC);

  // global FD block check on a one-element mesh
  const auto mesh = generate_box_mesh({1, 1, 1}, {1, 1, 1});
  TaylorHoodSpace space(mesh);
  space.constrain_face_set("zmin", {true, true, true});
  auto mat = lblock_material(BranchKind::HS);
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
  const auto blocks = assemble_tangent(space, complete(y_base), y_old, state, mat, loads, ctl);
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
  const double global_err = (K - fd).norm() / fd.norm();

  const bool pass = w1 <= 1e-6 && w2h <= 1e-6 && w2m <= 1e-6 && global_err <= 1e-5;
  report("criterion 7 (algorithmic tangents)", pass,
         "FD mismatch: Scheme-1 " + fmt(w1) + ", Scheme-2 HS " + fmt(w2h) +
             ", Scheme-2 MIPC " + fmt(w2m) + " (tol 1e-6); global block " + fmt(global_err) +
             " (tol 1e-5)");
}

std::vector<StepDiagnostics> run_shear(SchemeKind scheme, double omega, double gamma,
                                       double dt, double T, double tol) {
  const HexMesh mesh = generate_box_mesh({0.05, 0.05, 0.05}, {2, 2, 2});
  TaylorHoodSpace space(mesh);
  space.constrain_face_set("zmin", {true, true, true});
  space.constrain_face_set("zmax", {false, true, true});
  auto mat = shear_material();
  InternalStateField state(mesh.n_elements(), space.n_qp_per_element(), 1);
  LoadSpec loads;
  loads.tractions.push_back({"zmax", Vector3(6.895e3, 0, 0), TimeFunction::sine(1.0, omega)});
  loads.dirichlet.push_back({"zmin", {true, true, true}});
  loads.dirichlet.push_back({"zmax", {false, true, true}});
  SolverConfig cfg;
  cfg.dt = dt;
  cfg.T = T;
  cfg.scheme = scheme;
  cfg.gamma = gamma;
  cfg.tol_R = tol;
  cfg.tol_A = tol;
  SimulationOptions opts;
  opts.probe = Vector3(0.025, 0.025, 0.05);
  return run_simulation(space, state, mat, loads, cfg, opts).series;
}

void group_midpoint() {
  // Scheme-2's balance residual sits at the solver floor; drive Newton well
  // below the criterion threshold. The mid-point error is scheme-intrinsic
  // and indifferent to the tolerance.
  const double tol = 1e-13;
  for (double omega : {0.1, 0.5}) {
    const auto s2 = run_shear(SchemeKind::Scheme2, omega, 0.0, 0.01, 20.0, tol);
    const auto mp = run_shear(SchemeKind::Midpoint, omega, 0.0, 0.01, 20.0, tol);

    double scale = 0.0;
    for (const auto& d : s2) scale = std::max(scale, std::abs(d.budget.H));
    auto median_abs_balance = [](const std::vector<StepDiagnostics>& series) {
      std::vector<double> v;
      for (const auto& d : series) v.push_back(std::abs(d.budget.balance_residual));
      std::sort(v.begin(), v.end());
      return v[v.size() / 2];
    };
    const double med2 = median_abs_balance(s2);
    const double medmp = median_abs_balance(mp);
    double worst2 = 0.0;
    for (const auto& d : s2) worst2 = std::max(worst2, std::abs(d.budget.balance_residual));

    const bool pass = worst2 <= 1e-12 * scale && medmp >= 100.0 * med2;
    std::ostringstream detail;
    detail << "w = " << omega << ": Scheme-2 max " << fmt(worst2) << " vs "
           << fmt(1e-12 * scale) << ", mid-point median " << fmt(medmp) << " vs 100 x "
           << fmt(med2);
    report("criterion 8 (mid-point contrast)", pass, detail.str());
  }
}

void group_graddiv() {
  // time-averaged divergence norm strictly decreasing in gamma on the shear test
  std::vector<double> avg;
  for (double g : {0.0, 1e2, 1e4, 1e6}) {
    const auto series = run_shear(SchemeKind::Scheme2, 0.5, g, 0.01, 5.0, 1e-10);
    double acc = 0.0;
    for (const auto& d : series) acc += d.divnorm;
    avg.push_back(acc / static_cast<double>(series.size()));
  }
  const bool monotone = avg[0] > avg[1] && avg[1] > avg[2] && avg[2] > avg[3];
  report("criterion 9 (grad-div efficacy)", monotone,
         "time-averaged |div v| over gamma {0, 1e2, 1e4, 1e6}: " + fmt(avg[0]) + ", " +
             fmt(avg[1]) + ", " + fmt(avg[2]) + ", " + fmt(avg[3]));

  // momentum conservation undisturbed by the stabilization
  const auto run = run_lblock(SchemeKind::Scheme2, 1e4, 200);
  check_momentum("gamma = 1e4", run.series);
}

void group_relaxation() {
  std::mt19937 rng(11);
  Tensor2 fr = Tensor2::Identity();
  fr(0, 0) = 1.25;
  fr(1, 1) = 1.0 / std::sqrt(1.25);
  fr(2, 2) = 1.0 / std::sqrt(1.25);
  fr(0, 1) = 0.15;
  const SymTensor2 c_frozen = SymTensor2::from_matrix(fr.transpose() * fr);

  bool pass = true;
  std::string detail;
  for (BranchKind kind : {BranchKind::HS, BranchKind::MIPC}) {
    auto mat = lblock_material(kind);
    const auto& b = mat.branches[0];
    const double dt = 0.02;
    const int n_steps = 400;
    const auto traj = material_point_run([&](double) { return c_frozen; }, dt,
                                         dt * n_steps, SchemeKind::Scheme2, mat);

    // exact per-step Crank-Nicolson amplification of the linear ODE
    const SymTensor2 ct = unimodular(c_frozen);
    const SymTensor2 gamma_eq =
        SymTensor2::identity() +
        (branch_fictitious_stress(ct, b, mat.equilibrium) - b.S_hat0) * (1.0 / b.mu);
    const double rho = (1.0 - 0.5 * b.mu * dt / b.eta) / (1.0 + 0.5 * b.mu * dt / b.eta);
    SymTensor2 dev = SymTensor2::identity() - gamma_eq;
    double worst = 0.0;
    for (const auto& s : traj.steps) {
      dev *= rho;
      worst = std::max(worst, (s.gammas[0] - (gamma_eq + dev)).norm());
    }
    const double q_final =
        conjugate_Q(ct, traj.back().gammas[0], b, mat.equilibrium).norm();
    const double q0 = conjugate_Q(ct, SymTensor2::identity(), b, mat.equilibrium).norm();
    pass = pass && worst <= 1e-12 * (1.0 + gamma_eq.norm()) && q_final <= 1e-10 * q0;
    detail += std::string(kind == BranchKind::HS ? "HS" : "MIPC") + ": CN mismatch " +
              fmt(worst) + ", |Q_final|/|Q_0| " + fmt(q_final / q0) + "  ";
  }
  report("criterion 10 (relaxation oracle)", pass, detail);
}

struct Loop {
  double area = 0.0;
  double gap = 0.0;    // endpoint mismatch, normalized by the loop extent
  double span_u = 0.0;
};

Loop loop_of_cycle(const std::vector<StepDiagnostics>& series, double t0, double t1) {
  std::vector<std::pair<double, double>> pts;  // (u_x at probe, applied load value)
  for (const auto& d : series) {
    if (d.t >= t0 - 1e-9 && d.t <= t1 + 1e-9) pts.emplace_back(d.probe_u[0], d.load_value);
  }
  Loop loop;
  if (pts.size() < 3) return loop;
  double a = 0.0, umin = pts[0].first, umax = pts[0].first, hmin = pts[0].second,
         hmax = pts[0].second;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& p = pts[i];
    const auto& q = pts[(i + 1) % pts.size()];  // shoelace closes the polygon
    a += p.first * q.second - q.first * p.second;
    umin = std::min(umin, p.first);
    umax = std::max(umax, p.first);
    hmin = std::min(hmin, p.second);
    hmax = std::max(hmax, p.second);
  }
  loop.area = 0.5 * std::abs(a);
  const double du = (pts.front().first - pts.back().first) / std::max(umax - umin, 1e-300);
  const double dh = (pts.front().second - pts.back().second) / std::max(hmax - hmin, 1e-300);
  loop.gap = std::hypot(du, dh);
  loop.span_u = umax - umin;
  return loop;
}

void group_hysteresis() {
  // two full cycles each; the last cycle must close and the two frequencies
  // must produce clearly different loops
  const double w_fast = 0.5, w_slow = 0.1;
  const double period_fast = 2.0 * M_PI / w_fast, period_slow = 2.0 * M_PI / w_slow;
  const auto fast = run_shear(SchemeKind::Scheme2, w_fast, 0.0, 0.01,
                              2.0 * period_fast, 1e-10);
  const auto slow = run_shear(SchemeKind::Scheme2, w_slow, 0.0, 0.05,
                              2.0 * period_slow, 1e-10);

  const Loop lf = loop_of_cycle(fast, period_fast, 2.0 * period_fast);
  const Loop lf_prev = loop_of_cycle(fast, 0.0, period_fast);
  const Loop ls = loop_of_cycle(slow, period_slow, 2.0 * period_slow);

  const bool closed = std::abs(lf.area - lf_prev.area) <= 0.01 * lf.area && lf.gap < 0.02 &&
                      ls.gap < 0.02;
  // normalized loop areas (dissipation per cycle over the swept rectangle)
  const double shape_f = lf.area / (lf.span_u * 2.0 * 6.895e3);
  const double shape_s = ls.area / (ls.span_u * 2.0 * 6.895e3);
  const bool distinct = std::abs(shape_f - shape_s) >= 0.1 * std::max(shape_f, shape_s);
  report("hysteresis loops (qualitative)", closed && distinct,
         "final-cycle area drift " + fmt(std::abs(lf.area - lf_prev.area) / lf.area) +
             " (tol 1e-2), loop shapes w=0.5: " + fmt(shape_f) + " vs w=0.1: " +
             fmt(shape_s));
}

}  // namespace

int main(int argc, char** argv) {
  std::set<std::string> groups;
  for (int i = 1; i < argc; ++i) groups.insert(argv[i]);
  auto want = [&](const char* g) { return groups.empty() || groups.count(g) > 0; };

  if (want("energy")) group_energy();
  if (want("convergence")) group_convergence();
  if (want("identities")) group_identities();
  if (want("tangents")) group_tangents();
  if (want("midpoint")) group_midpoint();
  if (want("graddiv")) group_graddiv();
  if (want("relaxation")) group_relaxation();
  if (want("hysteresis")) group_hysteresis();

  if (g_failures > 0) {
    std::cout << g_failures << " acceptance check(s) failed" << std::endl;
    return 1;
  }
  return 0;
}
