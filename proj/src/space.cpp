#include "visco/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "visco/error.hpp"

namespace visco {

QuadratureRule gauss_legendre(int n) {
  // Newton on Legendre polynomials from Chebyshev initial guesses.
  QuadratureRule r;
  r.points.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.points[n - 1 - i] = x;
    r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

namespace {

inline void lagrange_q2(double xi, double n[3], double d[3]) {
  n[0] = 0.5 * xi * (xi - 1.0);
  n[1] = 1.0 - xi * xi;
  n[2] = 0.5 * xi * (xi + 1.0);
  d[0] = xi - 0.5;
  d[1] = -2.0 * xi;
  d[2] = xi + 0.5;
}

}  // namespace

Q2Eval q2_eval(const Vector3& xi) {
  double nx[3], dx[3], ny[3], dy[3], nz[3], dz[3];
  lagrange_q2(xi[0], nx, dx);
  lagrange_q2(xi[1], ny, dy);
  lagrange_q2(xi[2], nz, dz);
  Q2Eval out;
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) {
        const int a = i + 3 * j + 9 * k;
        out.N[a] = nx[i] * ny[j] * nz[k];
        out.dN[a] = Vector3(dx[i] * ny[j] * nz[k], nx[i] * dy[j] * nz[k],
                            nx[i] * ny[j] * dz[k]);
      }
  return out;
}

std::array<double, 8> q1_eval(const Vector3& xi) {
  std::array<double, 8> n;
  for (int c = 0; c < 8; ++c) {
    const double vx = 0.5 * (1.0 + ((c & 1) ? xi[0] : -xi[0]));
    const double vy = 0.5 * (1.0 + ((c & 2) ? xi[1] : -xi[1]));
    const double vz = 0.5 * (1.0 + ((c & 4) ? xi[2] : -xi[2]));
    n[c] = vx * vy * vz;
  }
  return n;
}

TaylorHoodSpace::TaylorHoodSpace(const HexMesh& mesh, int n_gauss)
    : mesh_(&mesh), rule_(gauss_legendre(n_gauss)) {
  // Q2 node numbering: mesh vertices first, then edge / face / interior
  // nodes allocated on first encounter in element order.
  vel_coords_ = mesh.vertices;
  std::map<std::array<int, 2>, int> edge_nodes;
  std::map<std::array<int, 4>, int> face_nodes;
  elem_nodes_.resize(mesh.n_elements());

  for (int e = 0; e < mesh.n_elements(); ++e) {
    const auto& conn = mesh.elements[e];
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) {
          const int a = i + 3 * j + 9 * k;
          const int odd = (i == 1) + (j == 1) + (k == 1);
          // corners adjacent to this node: round each odd coordinate both ways
          std::vector<int> corners;
          for (int ci = (i == 1 ? 0 : i / 2); ci <= (i == 1 ? 1 : i / 2); ++ci)
            for (int cj = (j == 1 ? 0 : j / 2); cj <= (j == 1 ? 1 : j / 2); ++cj)
              for (int ck = (k == 1 ? 0 : k / 2); ck <= (k == 1 ? 1 : k / 2); ++ck)
                corners.push_back(conn[ci + 2 * cj + 4 * ck]);

          int id = -1;
          if (odd == 0) {
            id = corners[0];
          } else {
            Vector3 x = Vector3::Zero();
            for (int c : corners) x += mesh.vertices[c];
            x /= static_cast<double>(corners.size());
            std::sort(corners.begin(), corners.end());
            if (odd == 1) {
              auto [it, ins] = edge_nodes.try_emplace({corners[0], corners[1]},
                                                      static_cast<int>(vel_coords_.size()));
              if (ins) vel_coords_.push_back(x);
              id = it->second;
            } else if (odd == 2) {
              auto [it, ins] =
                  face_nodes.try_emplace({corners[0], corners[1], corners[2], corners[3]},
                                         static_cast<int>(vel_coords_.size()));
              if (ins) vel_coords_.push_back(x);
              id = it->second;
            } else {
              id = static_cast<int>(vel_coords_.size());
              Vector3 xc = Vector3::Zero();
              for (int c : corners) xc += mesh.vertices[c];
              vel_coords_.push_back(xc / 8.0);
            }
          }
          elem_nodes_[e][a] = id;
        }
  }
  constrained_.assign(n_vel_dofs(), 0);

  // volume quadrature cache
  const int ng = static_cast<int>(rule_.points.size());
  n_qp_ = ng * ng * ng;
  volume_cache_.resize(mesh.n_elements());
  for (int e = 0; e < mesh.n_elements(); ++e) {
    volume_cache_[e].reserve(n_qp_);
    for (int qz = 0; qz < ng; ++qz)
      for (int qy = 0; qy < ng; ++qy)
        for (int qx = 0; qx < ng; ++qx) {
          const Vector3 xi(rule_.points[qx], rule_.points[qy], rule_.points[qz]);
          const Q2Eval ev = q2_eval(xi);
          Tensor2 jac = Tensor2::Zero();
          Vector3 X = Vector3::Zero();
          for (int a = 0; a < 27; ++a) {
            const Vector3& xa = vel_coords_[elem_nodes_[e][a]];
            jac += xa * ev.dN[a].transpose();
            X += ev.N[a] * xa;
          }
          const double detj = jac.determinant();
          if (!(detj > 0.0)) {
            throw ConfigError("mesh element " + std::to_string(e) +
                              " has a non-positive geometric Jacobian");
          }
          QuadPoint qp;
          qp.w_detJ = rule_.weights[qx] * rule_.weights[qy] * rule_.weights[qz] * detj;
          qp.N = ev.N;
          const Tensor2 jinv_t = jac.inverse().transpose();
          for (int a = 0; a < 27; ++a) qp.dNdX[a] = jinv_t * ev.dN[a];
          qp.M = q1_eval(xi);
          qp.X = X;
          volume_cache_[e].push_back(qp);
        }
  }
}

std::vector<FacePatch> TaylorHoodSpace::face_patches(const std::string& set_name) const {
  const auto it = mesh_->face_sets.find(set_name);
  if (it == mesh_->face_sets.end()) {
    throw ConfigError("unknown face set '" + set_name + "'");
  }
  const int ng = static_cast<int>(rule_.points.size());
  std::vector<FacePatch> patches;
  for (auto [e, f] : it->second) {
    FacePatch patch;
    patch.element = e;
    const int axis = f / 2;
    const int side = f % 2;  // 0 -> xi_axis = -1, 1 -> +1
    const int u = (axis + 1) % 3, v = (axis + 2) % 3;

    // the 9 face nodes in (iu, iv) lexicographic order
    auto local_index = [&](int iu, int iv) {
      int idx[3];
      idx[axis] = side ? 2 : 0;
      idx[u] = iu;
      idx[v] = iv;
      return idx[0] + 3 * idx[1] + 9 * idx[2];
    };
    for (int iv = 0; iv < 3; ++iv)
      for (int iu = 0; iu < 3; ++iu)
        patch.nodes[iu + 3 * iv] = elem_nodes_[e][local_index(iu, iv)];

    for (int qv = 0; qv < ng; ++qv)
      for (int qu = 0; qu < ng; ++qu) {
        Vector3 xi = Vector3::Zero();
        xi[axis] = side ? 1.0 : -1.0;
        xi[u] = rule_.points[qu];
        xi[v] = rule_.points[qv];
        double nu[3], du[3], nv[3], dv[3];
        lagrange_q2(xi[u], nu, du);
        lagrange_q2(xi[v], nv, dv);
        FaceQuad fq;
        Vector3 tu = Vector3::Zero(), tv = Vector3::Zero(), X = Vector3::Zero();
        for (int iv2 = 0; iv2 < 3; ++iv2)
          for (int iu2 = 0; iu2 < 3; ++iu2) {
            const int a = iu2 + 3 * iv2;
            const Vector3& xa = vel_coords_[patch.nodes[a]];
            fq.N[a] = nu[iu2] * nv[iv2];
            tu += du[iu2] * nv[iv2] * xa;
            tv += nu[iu2] * dv[iv2] * xa;
            X += fq.N[a] * xa;
          }
        fq.w_dA = rule_.weights[qu] * rule_.weights[qv] * tu.cross(tv).norm();
        fq.X = X;
        patch.qps.push_back(fq);
      }
    patches.push_back(std::move(patch));
  }
  return patches;
}

void TaylorHoodSpace::constrain_face_set(const std::string& set_name,
                                         const std::array<bool, 3>& comps) {
  for (const auto& patch : face_patches(set_name)) {
    for (int node : patch.nodes) {
      for (int c = 0; c < 3; ++c) {
        if (comps[c]) constrained_[3 * node + c] = 1;
      }
    }
  }
}

int TaylorHoodSpace::nearest_vel_node(const Vector3& x) const {
  int best = 0;
  double bd = std::numeric_limits<double>::max();
  for (int n = 0; n < n_vel_nodes(); ++n) {
    const double d = (vel_coords_[n] - x).squaredNorm();
    if (d < bd) {
      bd = d;
      best = n;
    }
  }
  return best;
}

}  // namespace visco
