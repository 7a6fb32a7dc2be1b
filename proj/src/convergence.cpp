#include "visco/config.hpp"
#include "visco/diagnostics.hpp"
#include "visco/material_point.hpp"

namespace visco {

ConvergenceTable convergence_study(const RunConfig& base, const std::vector<double>& dt_list,
                                   double dt_overkill, double t_probe) {
  const HexMesh mesh = make_mesh(base.mesh);
  TaylorHoodSpace space(mesh);
  for (const auto& d : base.loads.dirichlet) {
    space.constrain_face_set(d.face_set, d.components);
  }

  auto solve_at = [&](double dt) {
    SolverConfig cfg = base.solver;
    cfg.dt = dt;
    cfg.T = t_probe;
    InternalStateField state(mesh.n_elements(), space.n_qp_per_element(),
                             static_cast<int>(base.material.branches.size()));
    SimulationOptions opts;
    opts.collect_series = false;
    return run_simulation(space, state, base.material, base.loads, cfg, opts).Y;
  };

  const SolutionVector ref = solve_at(dt_overkill);
  ConvergenceTable table;
  std::vector<double> dts_ok, eu, ev, ep;
  for (double dt : dt_list) {
    ConvergenceRow row;
    row.dt = dt;
    try {
      const SolutionVector y = solve_at(dt);
      row.err_u = (y.U - ref.U).norm() / ref.U.norm();
      row.err_v = (y.V - ref.V).norm() / ref.V.norm();
      row.err_p = (y.P - ref.P).norm() / ref.P.norm();
      dts_ok.push_back(dt);
      eu.push_back(row.err_u);
      ev.push_back(row.err_v);
      ep.push_back(row.err_p);
    } catch (const NonConvergenceError&) {
      row.converged = false;
    }
    table.rows.push_back(row);
  }
  if (dts_ok.size() >= 2) {
    table.slope_u = fit_rate(dts_ok, eu);
    table.slope_v = fit_rate(dts_ok, ev);
    table.slope_p = fit_rate(dts_ok, ep);
  }
  return table;
}

}  // namespace visco
