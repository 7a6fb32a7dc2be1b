#pragma once

// Discrete energy budgets, momenta and velocity-divergence norms, evaluated
// with the exact quadrature and algorithmic quantities of assembly so the
// per-step balance identities are testable at solver precision.

#include "visco/assembly.hpp"

namespace visco {

struct EnergyBudget {
  double H = 0.0;        // rho0 |V|^2/2 + G_iso at t_np1          [J]
  double H_prev = 0.0;   // the same at t_n                         [J]
  double K = 0.0;        // kinetic part of H                       [J]
  double Pot = 0.0;      // potential part of H                     [J]
  double D_phy = 0.0;    // (1/2) sum_a int eta |dGamma/dt|^2       [W]
  double D_num = 0.0;    // grad-div dissipation                    [W]
  double P_ext = 0.0;    // external power at the mid-point         [W]
  /// H_np1 - H_n + (D_phy + D_num - P_ext) dt
  double balance_residual = 0.0;
};

/// Budget of one completed step: y_old/state committed at t_n, y_new and the
/// trial state at t_np1.
EnergyBudget energy_budget(const TaylorHoodSpace& space, const SolutionVector& y_old,
                           const SolutionVector& y_new, const InternalStateField& state,
                           const MaterialParams& mat, const LoadSpec& loads,
                           const AssemblyControls& ctl);

/// Kinetic + isochoric Gibbs energy of one state (uses the committed field
/// when `trial` is false).
double total_energy(const TaylorHoodSpace& space, const SolutionVector& y,
                    const InternalStateField& state, const MaterialParams& mat, bool trial,
                    double* kinetic = nullptr, double* potential = nullptr);

struct MomentumRecord {
  Vector3 L = Vector3::Zero();   // int rho0 V
  Vector3 Jm = Vector3::Zero();  // int rho0 (X + U) x V
};
MomentumRecord momenta(const TaylorHoodSpace& space, const SolutionVector& y,
                       const MaterialParams& mat);

/// L2 norm of the spatial velocity divergence over the current configuration,
/// (int (grad V : F^-t)^2 J dOmega)^(1/2).
double div_velocity_norm(const TaylorHoodSpace& space, const SolutionVector& y);

/// Temporal convergence study against an overkill run; one row per dt with
/// relative l2 errors of the dof vectors at the probe time.
struct ConvergenceRow {
  double dt = 0.0;
  double err_u = 0.0, err_v = 0.0, err_p = 0.0;
  bool converged = true;
};
struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  double slope_u = 0.0, slope_v = 0.0, slope_p = 0.0;
};

struct RunConfig;  // defined in config.hpp
ConvergenceTable convergence_study(const RunConfig& base, const std::vector<double>& dt_list,
                                   double dt_overkill, double t_probe);

}  // namespace visco
