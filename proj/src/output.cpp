#include "visco/output.hpp"

#include <cstdint>
#include <fstream>
#include <ostream>

namespace visco {

namespace {

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

void write_series_csv(const std::vector<StepDiagnostics>& series, std::ostream& out) {
  out << "t,K,Pot,H,D_phy,D_num,P_ext,balance_residual,"
         "Lx,Ly,Lz,Jx,Jy,Jz,divnorm,newton_iters\n";
  out.precision(17);
  for (const auto& d : series) {
    out << d.t << ',' << d.budget.K << ',' << d.budget.Pot << ',' << d.budget.H << ','
        << d.budget.D_phy << ',' << d.budget.D_num << ',' << d.budget.P_ext << ','
        << d.budget.balance_residual << ',' << d.mom.L[0] << ',' << d.mom.L[1] << ','
        << d.mom.L[2] << ',' << d.mom.Jm[0] << ',' << d.mom.Jm[1] << ',' << d.mom.Jm[2]
        << ',' << d.divnorm << ',' << d.report.iterations << '\n';
  }
}

void write_series_csv(const std::vector<StepDiagnostics>& series, const std::string& path) {
  auto out = open_or_throw(path);
  write_series_csv(series, out);
}

void write_probe_csv(const std::vector<StepDiagnostics>& series, const std::string& path) {
  auto out = open_or_throw(path);
  out << "t,ux,uy,uz,vx,vy,vz,load\n";
  out.precision(17);
  for (const auto& d : series) {
    out << d.t << ',' << d.probe_u[0] << ',' << d.probe_u[1] << ',' << d.probe_u[2] << ','
        << d.probe_v[0] << ',' << d.probe_v[1] << ',' << d.probe_v[2] << ',' << d.load_value
        << '\n';
  }
}

void write_vtk(const TaylorHoodSpace& space, const SolutionVector& y, std::ostream& out) {
  const int np = space.n_vel_nodes();
  const int ne = space.mesh().n_elements();

  // VTK triquadratic hexahedron (cell type 29) node order: 8 corners, 12
  // edges, 6 face centers (-x +x -y +y -z +z), volume center; expressed in
  // our lexicographic (ix, iy, iz) local indexing ix + 3 iy + 9 iz.
  static constexpr int kVtkOrder[27] = {
      0,  2,  8,  6,  18, 20, 26, 24,         // corners
      1,  5,  7,  3,  19, 23, 25, 21,         // bottom + top edge midpoints
      9,  11, 17, 15,                          // vertical edge midpoints
      12, 14, 10, 16, 4,  22,                  // face centers
      13};                                     // center

  out << "# vtk DataFile Version 3.0\n";
  out << "visco-emc snapshot\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out.precision(17);
  out << "POINTS " << np << " double\n";
  for (int n = 0; n < np; ++n) {
    const Vector3& x = space.vel_coords()[n];
    out << x[0] << ' ' << x[1] << ' ' << x[2] << '\n';
  }
  out << "CELLS " << ne << ' ' << ne * 28 << '\n';
  for (int e = 0; e < ne; ++e) {
    out << 27;
    for (int a = 0; a < 27; ++a) out << ' ' << space.element_vel_nodes(e)[kVtkOrder[a]];
    out << '\n';
  }
  out << "CELL_TYPES " << ne << '\n';
  for (int e = 0; e < ne; ++e) out << 29 << '\n';

  // pressure interpolated from the Q1 field at the Q2 node positions
  Vector p_at_nodes = Vector::Zero(np);
  for (int e = 0; e < ne; ++e) {
    const auto& pn = space.element_p_nodes(e);
    for (int iz = 0; iz < 3; ++iz)
      for (int iy = 0; iy < 3; ++iy)
        for (int ix = 0; ix < 3; ++ix) {
          const Vector3 xi(ix - 1.0, iy - 1.0, iz - 1.0);
          const auto m = q1_eval(xi);
          double p = 0.0;
          for (int c = 0; c < 8; ++c) p += m[c] * y.P[pn[c]];
          p_at_nodes[space.element_vel_nodes(e)[ix + 3 * iy + 9 * iz]] = p;
        }
  }

  out << "POINT_DATA " << np << '\n';
  out << "VECTORS U double\n";
  for (int n = 0; n < np; ++n) {
    out << y.U[3 * n] << ' ' << y.U[3 * n + 1] << ' ' << y.U[3 * n + 2] << '\n';
  }
  out << "VECTORS V double\n";
  for (int n = 0; n < np; ++n) {
    out << y.V[3 * n] << ' ' << y.V[3 * n + 1] << ' ' << y.V[3 * n + 2] << '\n';
  }
  out << "SCALARS P double 1\n";
  out << "LOOKUP_TABLE default\n";
  for (int n = 0; n < np; ++n) out << p_at_nodes[n] << '\n';
}

void write_vtk(const TaylorHoodSpace& space, const SolutionVector& y,
               const std::string& path) {
  auto out = open_or_throw(path);
  write_vtk(space, y, out);
}

void save_state(const SavedState& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open state file '" + path + "' for writing");
  const char magic[8] = {'V', 'E', 'M', 'C', 'S', 'T', '0', '1'};
  out.write(magic, 8);
  auto put = [&](const void* p, std::size_t n) {
    out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
  };
  const std::int64_t nu = s.Y.U.size(), np = s.Y.P.size(), ng = s.gammas.size();
  put(&s.t_origin, 8);
  put(&s.steps_done, 8);
  put(&nu, 8);
  put(&np, 8);
  put(&ng, 8);
  put(s.Y.U.data(), nu * 8);
  put(s.Y.P.data(), np * 8);
  put(s.Y.V.data(), nu * 8);
  for (const auto& g : s.gammas) put(g.components().data(), 6 * 8);
  if (!out) throw Error("short write on state file '" + path + "'");
}

SavedState load_state(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open state file '" + path + "'");
  char magic[8];
  in.read(magic, 8);
  if (std::string(magic, 8) != "VEMCST01") {
    throw Error("'" + path + "' is not a visco-emc state file");
  }
  auto get = [&](void* p, std::size_t n) {
    in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  };
  SavedState s;
  std::int64_t nu = 0, np = 0, ng = 0;
  get(&s.t_origin, 8);
  get(&s.steps_done, 8);
  get(&nu, 8);
  get(&np, 8);
  get(&ng, 8);
  s.Y.U.resize(nu);
  s.Y.P.resize(np);
  s.Y.V.resize(nu);
  get(s.Y.U.data(), nu * 8);
  get(s.Y.P.data(), np * 8);
  get(s.Y.V.data(), nu * 8);
  s.gammas.resize(ng);
  for (auto& g : s.gammas) {
    Vec6 v;
    get(v.data(), 6 * 8);
    g = SymTensor2(v);
  }
  if (!in) throw Error("truncated state file '" + path + "'");
  return s;
}

}  // namespace visco
