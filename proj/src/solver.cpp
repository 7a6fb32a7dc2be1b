#include "visco/solver.hpp"

#include <Eigen/SparseLU>
#include <chrono>
#include <sstream>
#include <cmath>

namespace visco {

SolutionVector predictor(const SolutionVector& y_n, double dt) {
  SolutionVector y = y_n;
  y.U += dt * y_n.V;
  return y;
}

namespace {

double rk_inf_norm(const Vector& du, const Vector& v_n, const Vector& v_np1, double dt) {
  double m = 0.0;
  for (int i = 0; i < du.size(); ++i) {
    m = std::max(m, std::abs(du[i] / dt - 0.5 * (v_n[i] + v_np1[i])));
  }
  return m;
}

}  // namespace

SolutionVector advance_step(const TaylorHoodSpace& space, const SolutionVector& y_n,
                            InternalStateField& state, const MaterialParams& mat,
                            const LoadSpec& loads, const SolverConfig& cfg, double t_n,
                            StepReport* report) {
  const auto t0 = std::chrono::steady_clock::now();
  const double dt = cfg.dt;
  AssemblyControls ctl{dt, t_n + 0.5 * dt, cfg.gamma, cfg.z_cut, cfg.scheme};

  // DU carries U_np1 - U_n so the kinematic residual stays at the round-off
  // of the velocity scale regardless of |U|.
  Vector du = dt * y_n.V;
  SolutionVector y = y_n;
  y.U = y_n.U + du;

  StepReport rep;
  rep.rk_inf = rk_inf_norm(du, y_n.V, y.V, dt);

  Eigen::SparseLU<SparseMat> lu;
  const int nv = space.n_vel_dofs();
  double norm0 = 0.0;

  for (int l = 0;; ++l) {
    // the convergence check costs only a residual sweep; the tangent is
    // assembled just for the iterations that actually solve
    const Residuals res = assemble_residuals(space, y, y_n, state, mat, loads, ctl, &du);
    const double norm = res.norm();
    if (l == 0) {
      norm0 = norm;
      rep.res_norm0 = norm;
    }
    rep.res_norm = norm;
    if (norm <= cfg.tol_A || (norm0 > 0.0 && norm / norm0 <= cfg.tol_R)) {
      rep.converged = true;
      break;
    }
    if (l >= cfg.l_max) {
      std::ostringstream msg;
      msg << "Newton loop exceeded l_max = " << cfg.l_max << " (|R| = " << norm
          << ", |R_0| = " << norm0 << ")";
      throw NonConvergenceError(msg.str(), -1, l);
    }

    const AssembledSystem sys = assemble_system(space, y, y_n, state, mat, loads, ctl, &du);
    Vector rhs(space.n_dofs());
    rhs.head(nv) = -sys.R.Rm;
    rhs.tail(space.n_p_nodes()) = -sys.R.Rp;
    lu.compute(sys.K);
    if (lu.info() != Eigen::Success) {
      throw Error("sparse LU factorization failed (singular tangent at iteration " +
                  std::to_string(l) + ")");
    }
    const Vector delta = lu.solve(rhs);

    y.V += delta.head(nv);
    y.P += delta.tail(space.n_p_nodes());
    du += (0.5 * dt) * delta.head(nv);
    y.U = y_n.U + du;
    ++rep.iterations;
    rep.rk_inf = std::max(rep.rk_inf, rk_inf_norm(du, y_n.V, y.V, dt));
  }

  state.commit();
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (report) *report = rep;
  return y;
}

SimulationResult run_simulation(const TaylorHoodSpace& space, InternalStateField& state,
                                const MaterialParams& mat, const LoadSpec& loads,
                                const SolverConfig& cfg, const SimulationOptions& opts) {
  SimulationResult result;
  result.Y = opts.initial_y ? *opts.initial_y : SolutionVector::zeros(space);
  auto t_at = [&](double steps) { return opts.t_origin + steps * cfg.dt; };
  double t = t_at(static_cast<double>(opts.step_offset));

  auto maybe_snapshot = [&](double time) {
    if (!opts.on_snapshot) return;
    for (double ts : opts.snapshot_times) {
      if (std::abs(ts - time) <= 0.5 * cfg.dt * (1.0 + 1e-12)) {
        opts.on_snapshot(time, result.Y);
        return;
      }
    }
  };
  maybe_snapshot(t);

  const int probe_node =
      opts.probe ? space.nearest_vel_node(*opts.probe) : -1;

  std::vector<SymTensor2> gamma_prev;
  const long n_total = std::llround((cfg.T - opts.t_origin) / cfg.dt);
  for (long n = opts.step_offset; n < n_total; ++n) {
    t = t_at(static_cast<double>(n));
    StepReport rep;
    SolutionVector y_old = result.Y;
    if (opts.collect_series) gamma_prev = state.committed_raw();
    SolutionVector y_new;
    try {
      y_new = advance_step(space, y_old, state, mat, loads, cfg, t, &rep);
    } catch (const NonConvergenceError& e) {
      throw NonConvergenceError(std::string(e.what()) + " at step " + std::to_string(n),
                                static_cast<int>(n), e.iterations);
    }

    if (opts.collect_series) {
      StepDiagnostics d;
      d.t = t_at(static_cast<double>(n) + 1.0);
      AssemblyControls ctl{cfg.dt, t_at(static_cast<double>(n) + 0.5), cfg.gamma,
                           cfg.z_cut, cfg.scheme};
      // the budget pairs Gamma_n with Gamma_np1; restore the pre-step history
      // view for its evaluation (trial still holds Gamma_np1 after commit)
      std::swap(state.committed_raw(), gamma_prev);
      d.budget = energy_budget(space, y_old, y_new, state, mat, loads, ctl);
      std::swap(state.committed_raw(), gamma_prev);
      d.mom = momenta(space, y_new, mat);
      d.divnorm = div_velocity_norm(space, y_new);
      d.report = rep;
      if (probe_node >= 0) {
        d.probe_u = y_new.U.segment<3>(3 * probe_node);
        d.probe_v = y_new.V.segment<3>(3 * probe_node);
      }
      if (!loads.tractions.empty()) {
        d.load_value = loads.tractions.front().profile(t + cfg.dt);
      }
      result.series.push_back(d);
    }

    result.Y = y_new;
    t = t_at(static_cast<double>(n) + 1.0);
    maybe_snapshot(t);
  }
  result.t_end = t;
  return result;
}

}  // namespace visco
