#pragma once

// Material-point driver: integrates the constitutive equations along a
// prescribed C(t) path, recording internal state, stresses and the per-step
// directionality residuals. Backs the temporal convergence and relaxation
// studies without any spatial discretization.

#include <functional>
#include <vector>

#include "visco/constitutive.hpp"

namespace visco {

/// Prescribed deformation path. Must return an SPD tensor with positive
/// determinant at every sample.
using StrainPath = std::function<SymTensor2(double)>;

/// Smooth isochoric uniaxial path C(t) = diag(l^2, 1/l, 1/l) with
/// l = 1 + amplitude sin(omega t).
StrainPath isochoric_uniaxial_path(double amplitude, double omega);

struct MaterialPointStep {
  double t_np1 = 0.0;
  std::vector<SymTensor2> gammas;
  std::vector<SymTensor2> qs;  // algorithmic conjugate variables (empty for Midpoint)
  SymTensor2 S_alg;
  double upsilon_total = 0.0;
  double delta_G = 0.0;          // G_iso jump over the step
  double dissipation = 0.0;      // (dt/2) sum_a eta |dGamma/dt|^2
  double directionality = 0.0;   // Z:S_alg - delta_G - dissipation
};

struct MaterialPointTrajectory {
  std::vector<MaterialPointStep> steps;
  const MaterialPointStep& back() const { return steps.back(); }
};

/// Marches the path with a uniform step size over [0, t_end]. gamma0 seeds
/// every branch (identity when empty).
MaterialPointTrajectory material_point_run(const StrainPath& path, double dt,
                                           double t_end, SchemeKind scheme,
                                           const MaterialParams& mat,
                                           double z_cut = 1e-10);

/// Errors of Gamma^1 and Q^1 at t_end against an overkill run, one row per
/// entry of dt_list.
struct RateRow {
  double dt = 0.0;
  double err_gamma = 0.0;
  double err_q = 0.0;
};
std::vector<RateRow> material_point_errors(const StrainPath& path,
                                           const std::vector<double>& dt_list,
                                           double dt_overkill, double t_end,
                                           SchemeKind scheme, const MaterialParams& mat);

/// Least-squares slope of log(err) vs log(dt).
double fit_rate(const std::vector<double>& dts, const std::vector<double>& errs);

}  // namespace visco
