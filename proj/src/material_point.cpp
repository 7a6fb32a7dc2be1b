#include "visco/material_point.hpp"

#include <cmath>

namespace visco {

StrainPath isochoric_uniaxial_path(double amplitude, double omega) {
  return [=](double t) {
    const double l = 1.0 + amplitude * std::sin(omega * t);
    return SymTensor2::diag(l * l, 1.0 / l, 1.0 / l);
  };
}

namespace {

/// Symmetric square root, used to synthesize an F_half for the driver.
Tensor2 sym_sqrt(const SymTensor2& c) {
  Eigen::SelfAdjointEigenSolver<Tensor2> es(c.matrix());
  return es.operatorSqrt();
}

}  // namespace

MaterialPointTrajectory material_point_run(const StrainPath& path, double dt,
                                           double t_end, SchemeKind scheme,
                                           const MaterialParams& mat, double z_cut) {
  MaterialPointTrajectory traj;
  const int n_steps = static_cast<int>(std::llround(t_end / dt));
  std::vector<SymTensor2> gammas(mat.branches.size(), SymTensor2::identity());

  SymTensor2 c_n = path(0.0);
  if (!(c_n.det() > 0.0)) throw Error("material_point_run: path sample not SPD at t=0");
  Tensor2 f_n = sym_sqrt(c_n);

  for (int n = 0; n < n_steps; ++n) {
    const double t_np1 = (n + 1) * dt;
    const SymTensor2 c_np1 = path(t_np1);
    if (!(c_np1.det() > 0.0)) {
      throw Error("material_point_run: path sample not SPD at t=" + std::to_string(t_np1));
    }
    const Tensor2 f_np1 = sym_sqrt(c_np1);
    const StepPair pair = step_pair(c_n, c_np1, (f_n + f_np1) * 0.5, dt);

    const auto res = algorithmic_stress(scheme, pair, gammas, dt, mat, z_cut);
    const auto chk = directionality_check(pair, gammas, res, dt, mat);

    MaterialPointStep step;
    step.t_np1 = t_np1;
    step.gammas = res.Gammas_np1;
    step.S_alg = res.S_alg;
    step.delta_G = chk.delta_G;
    step.dissipation = chk.dissip;
    step.directionality = chk.residual();
    if (scheme != SchemeKind::Midpoint) {
      step.qs.resize(mat.branches.size());
      for (std::size_t a = 0; a < mat.branches.size(); ++a) {
        step.qs[a] = q_alg(scheme, pair.Ctilde_n, pair.Ctilde_np1, gammas[a],
                           res.Gammas_np1[a], mat.branches[a], mat.equilibrium);
      }
    }
    for (std::size_t a = 0; a < mat.branches.size(); ++a) {
      step.upsilon_total +=
          upsilon(pair.Ctilde_np1, res.Gammas_np1[a], mat.branches[a], mat.equilibrium);
    }
    traj.steps.push_back(std::move(step));

    gammas = traj.steps.back().gammas;
    c_n = c_np1;
    f_n = f_np1;
  }
  return traj;
}

std::vector<RateRow> material_point_errors(const StrainPath& path,
                                           const std::vector<double>& dt_list,
                                           double dt_overkill, double t_end,
                                           SchemeKind scheme, const MaterialParams& mat) {
  // Q at the probe time is the state quantity Q(Ctilde(t), Gamma(t)) of the
  // continuum relation; the interval-algorithmic Q lives at the half point
  // and would alias a first-order offset into the comparison.
  const SymTensor2 ct_end = unimodular(path(t_end));
  auto q_state = [&](const SymTensor2& gamma) {
    return conjugate_Q(ct_end, gamma, mat.branches.at(0), mat.equilibrium);
  };

  const auto ref = material_point_run(path, dt_overkill, t_end, scheme, mat);
  const SymTensor2 g_ref = ref.back().gammas.at(0);
  const SymTensor2 q_ref = q_state(g_ref);

  std::vector<RateRow> rows;
  for (double dt : dt_list) {
    const auto run = material_point_run(path, dt, t_end, scheme, mat);
    RateRow row;
    row.dt = dt;
    row.err_gamma = (run.back().gammas.at(0) - g_ref).norm();
    row.err_q = (q_state(run.back().gammas.at(0)) - q_ref).norm();
    rows.push_back(row);
  }
  return rows;
}

double fit_rate(const std::vector<double>& dts, const std::vector<double>& errs) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = static_cast<int>(dts.size());
  for (int i = 0; i < n; ++i) {
    const double x = std::log(dts[i]);
    const double y = std::log(std::max(errs[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace visco
