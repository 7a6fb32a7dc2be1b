#include "visco/driver.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>

#include "visco/output.hpp"

namespace visco {

namespace fs = std::filesystem;

namespace {

std::string in_out_dir(const std::string& dir, const std::string& path) {
  if (dir.empty() || path.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(dir) / path).string();
}

}  // namespace

RunSummary run_configured(const RunConfig& cfg, const std::string& out_dir) {
  if (!out_dir.empty()) fs::create_directories(out_dir);

  const HexMesh mesh = make_mesh(cfg.mesh);
  TaylorHoodSpace space(mesh);
  for (const auto& d : cfg.loads.dirichlet) space.constrain_face_set(d.face_set, d.components);
  InternalStateField state(mesh.n_elements(), space.n_qp_per_element(),
                           static_cast<int>(cfg.material.branches.size()));

  SimulationOptions opts;
  opts.snapshot_times = cfg.output.snapshot_times;
  opts.probe = cfg.output.probe;
  if (!cfg.output.snapshot_prefix.empty()) {
    const std::string prefix = in_out_dir(out_dir, cfg.output.snapshot_prefix);
    opts.on_snapshot = [&space, prefix](double t, const SolutionVector& y) {
      std::ostringstream name;
      name << prefix << "_t" << t << ".vtk";
      write_vtk(space, y, name.str());
    };
  }
  if (!cfg.restart.empty()) {
    const SavedState saved = load_state(cfg.restart);
    opts.initial_y = saved.Y;
    opts.t_origin = saved.t_origin;
    opts.step_offset = saved.steps_done;
    state.committed_raw() = saved.gammas;
    state.commit();  // trial mirrors the committed history
  }

  const auto result = run_simulation(space, state, cfg.material, cfg.loads, cfg.solver, opts);

  RunSummary summary;
  if (!cfg.output.csv.empty()) {
    summary.csv_path = in_out_dir(out_dir, cfg.output.csv);
    write_series_csv(result.series, summary.csv_path);
    if (cfg.output.probe) {
      const fs::path p(summary.csv_path);
      write_probe_csv(result.series,
                      (p.parent_path() / (p.stem().string() + "_probe.csv")).string());
    }
  }
  if (!cfg.output.state_out.empty()) {
    SavedState s;
    s.t_origin = opts.t_origin;
    s.steps_done = std::llround((result.t_end - opts.t_origin) / cfg.solver.dt);
    s.Y = result.Y;
    s.gammas = state.committed_raw();
    save_state(s, in_out_dir(out_dir, cfg.output.state_out));
  }

  summary.steps = static_cast<long>(result.series.size());
  summary.t_end = result.t_end;
  for (const auto& d : result.series) summary.total_iterations += d.report.iterations;
  return summary;
}

}  // namespace visco
