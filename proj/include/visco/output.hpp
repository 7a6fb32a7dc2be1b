#pragma once

// Writers: per-step diagnostics CSV, legacy ASCII VTK snapshots on the
// triquadratic mesh, probe time series, and the binary state file used for
// bit-exact restarts.

#include <iosfwd>
#include <string>

#include "visco/solver.hpp"

namespace visco {

/// One row per step: t, K, Pot, H, D_phy, D_num, P_ext, balance_residual,
/// Lx..Lz, Jx..Jz, divnorm, newton_iters.
void write_series_csv(const std::vector<StepDiagnostics>& series, std::ostream& out);
void write_series_csv(const std::vector<StepDiagnostics>& series, const std::string& path);

/// Probe series: t, ux, uy, uz, vx, vy, vz, load.
void write_probe_csv(const std::vector<StepDiagnostics>& series, const std::string& path);

/// Legacy ASCII VTK unstructured grid: every Q2 node is a point, cells are
/// 27-node triquadratic hexahedra, with point vectors U, V and the pressure
/// interpolated from the Q1 field.
void write_vtk(const TaylorHoodSpace& space, const SolutionVector& y, std::ostream& out);
void write_vtk(const TaylorHoodSpace& space, const SolutionVector& y,
               const std::string& path);

/// Binary state for restarts; raw doubles, bit-exact round trip.
struct SavedState {
  double t_origin = 0.0;
  long steps_done = 0;
  SolutionVector Y;
  std::vector<SymTensor2> gammas;  // committed history
};
void save_state(const SavedState& s, const std::string& path);
SavedState load_state(const std::string& path);

}  // namespace visco
