#pragma once

// Time stepping with the segregated predictor multi-corrector Newton method
// and a direct sparse solve of the velocity/pressure block system. The
// displacement increment is slaved to the velocity increment, keeping the
// kinematic residual at round-off for every iterate.

#include <functional>
#include <optional>

#include "visco/diagnostics.hpp"

namespace visco {

struct SolverConfig {
  double dt = 0.1;
  double T = 1.0;
  double tol_R = 1e-10;  // relative residual tolerance
  double tol_A = 1e-10;  // absolute residual tolerance
  int l_max = 10;
  double gamma = 0.0;
  SchemeKind scheme = SchemeKind::Scheme2;
  double z_cut = 1e-10;
};

struct StepReport {
  int iterations = 0;      // corrector solves performed
  double res_norm0 = 0.0;  // stacked l2 norm at l = 0
  double res_norm = 0.0;   // at acceptance
  bool converged = false;
  double wall_time = 0.0;
  double rk_inf = 0.0;  // max |R^k|_inf over the iterates
};

/// Prop.-5 predictor {U_n + dt V_n, P_n, V_n}; makes R^k vanish identically.
SolutionVector predictor(const SolutionVector& y_n, double dt);

/// Advances one step from t_n; commits the internal state on success and
/// throws NonConvergenceError (no dt cut) otherwise.
SolutionVector advance_step(const TaylorHoodSpace& space, const SolutionVector& y_n,
                            InternalStateField& state, const MaterialParams& mat,
                            const LoadSpec& loads, const SolverConfig& cfg, double t_n,
                            StepReport* report = nullptr);

struct StepDiagnostics {
  double t = 0.0;  // t_np1
  EnergyBudget budget;
  MomentumRecord mom;
  double divnorm = 0.0;
  StepReport report;
  Vector3 probe_u = Vector3::Zero();
  Vector3 probe_v = Vector3::Zero();
  double load_value = 0.0;  // first traction profile at t_np1
};

struct SimulationResult {
  SolutionVector Y;
  double t_end = 0.0;
  std::vector<StepDiagnostics> series;
};

using SnapshotHook = std::function<void(double t, const SolutionVector&)>;

struct SimulationOptions {
  std::vector<double> snapshot_times;
  SnapshotHook on_snapshot;
  std::optional<Vector3> probe;
  /// Continue from a previous state instead of rest initial data.
  std::optional<SolutionVector> initial_y;
  /// Step times are t_origin + n dt with n counted from zero at t_origin; a
  /// restart that restores (t_origin, step_offset) therefore recomputes the
  /// exact same time values as the original run.
  double t_origin = 0.0;
  long step_offset = 0;
  bool collect_series = true;
};

/// Marches from rest (or the supplied state) to T, emitting per-step
/// diagnostics and snapshots. Deterministic for identical inputs.
SimulationResult run_simulation(const TaylorHoodSpace& space, InternalStateField& state,
                                const MaterialParams& mat, const LoadSpec& loads,
                                const SolverConfig& cfg,
                                const SimulationOptions& opts = {});

}  // namespace visco
