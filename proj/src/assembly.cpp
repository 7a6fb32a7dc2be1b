#include "visco/assembly.hpp"

#include <cmath>

namespace visco {

SolutionVector SolutionVector::zeros(const TaylorHoodSpace& space) {
  SolutionVector y;
  y.U = Vector::Zero(space.n_vel_dofs());
  y.P = Vector::Zero(space.n_p_nodes());
  y.V = Vector::Zero(space.n_vel_dofs());
  return y;
}

InternalStateField::InternalStateField(int n_elements, int n_qp, int n_branches)
    : n_qp_(n_qp), n_branches_(n_branches) {
  committed_.assign(static_cast<std::size_t>(n_elements) * n_qp * n_branches,
                    SymTensor2::identity());
  trial_ = committed_;
}

namespace {

using Mat6x81 = Eigen::Matrix<double, 6, 81>;
using Mat81 = Eigen::Matrix<double, 81, 81>;
using Vec81 = Eigen::Matrix<double, 81, 1>;

/// Columns mandel(sym(F^t (e_j (x) dN_A))); pairing matrix of stress work.
void fill_b_matrix(const Tensor2& f, const std::array<Vector3, 27>& dndx, Mat6x81& b) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int a = 0; a < 27; ++a) {
    const Vector3& g = dndx[a];
    for (int j = 0; j < 3; ++j) {
      const int col = 3 * a + j;
      b(0, col) = f(j, 0) * g[0];
      b(1, col) = f(j, 1) * g[1];
      b(2, col) = f(j, 2) * g[2];
      b(3, col) = (f(j, 0) * g[1] + f(j, 1) * g[0]) * inv_sqrt2;
      b(4, col) = (f(j, 1) * g[2] + f(j, 2) * g[1]) * inv_sqrt2;
      b(5, col) = (f(j, 0) * g[2] + f(j, 2) * g[0]) * inv_sqrt2;
    }
  }
}

struct ElementWork {
  Vec81 rm = Vec81::Zero();
  Eigen::Matrix<double, 8, 1> rp = Eigen::Matrix<double, 8, 1>::Zero();
  Mat81 ka = Mat81::Zero();                      // K^m_V + (dt/2) K^m_U
  Eigen::Matrix<double, 81, 8> kb = Eigen::Matrix<double, 81, 8>::Zero();  // K^m_P
  Eigen::Matrix<double, 8, 81> kc = Eigen::Matrix<double, 8, 81>::Zero();  // K^p_*
};

/// Volume contributions of one element at the current Newton iterate.
void element_kernel(const TaylorHoodSpace& space, int e, const SolutionVector& y_new,
                    const SolutionVector& y_old, InternalStateField& state,
                    const MaterialParams& mat, const LoadSpec& loads,
                    const AssemblyControls& ctl, const Vector* du_vec, bool with_tangent,
                    ElementWork& out) {
  const auto& nodes = space.element_vel_nodes(e);
  const auto& pnodes = space.element_p_nodes(e);
  const int nb = static_cast<int>(mat.branches.size());

  Eigen::Matrix<double, 3, 27> u_n, du, v_n, v_np1;
  for (int a = 0; a < 27; ++a) {
    u_n.col(a) = y_old.U.segment<3>(3 * nodes[a]);
    du.col(a) = du_vec ? Vector3(du_vec->segment<3>(3 * nodes[a]))
                       : Vector3(y_new.U.segment<3>(3 * nodes[a]) -
                                 y_old.U.segment<3>(3 * nodes[a]));
    v_n.col(a) = y_old.V.segment<3>(3 * nodes[a]);
    v_np1.col(a) = y_new.V.segment<3>(3 * nodes[a]);
  }
  const Eigen::Matrix<double, 3, 27> v_half = 0.5 * (v_n + v_np1);
  Eigen::Matrix<double, 8, 1> p_half;
  for (int a = 0; a < 8; ++a) {
    p_half[a] = 0.5 * (y_old.P[pnodes[a]] + y_new.P[pnodes[a]]);
  }
  const Vector3 body = loads.body_at(ctl.t_mid);

  const double dt = ctl.dt;
  Mat6x81 b_half, b_np1;
  std::vector<SymTensor2> gammas_n(nb);

  const auto& qps = space.element_quadrature(e);
  for (int q = 0; q < static_cast<int>(qps.size()); ++q) {
    const QuadPoint& qp = qps[q];
    const double w = qp.w_detJ;

    Tensor2 grad_un = Tensor2::Zero(), grad_du = Tensor2::Zero(), grad_vh = Tensor2::Zero();
    for (int a = 0; a < 27; ++a) {
      grad_un += u_n.col(a) * qp.dNdX[a].transpose();
      grad_du += du.col(a) * qp.dNdX[a].transpose();
      grad_vh += v_half.col(a) * qp.dNdX[a].transpose();
    }

    DeformationState st_n;
    try {
      st_n = deformation_from_grad(grad_un);
    } catch (const InvertedElementError&) {
      throw InvertedElementError("element " + std::to_string(e) +
                                 " inverted at a quadrature point");
    }
    const Tensor2 f_np1 = st_n.F + grad_du;
    if (!(f_np1.determinant() > 0.0)) {
      throw InvertedElementError("element " + std::to_string(e) +
                                 " inverted at a quadrature point");
    }
    const Tensor2 f_half = st_n.F + 0.5 * grad_du;
    const double j_half = f_half.determinant();
    if (!(j_half > 0.0)) {
      throw InvertedElementError("element " + std::to_string(e) +
                                 " inverted at the mid-point configuration");
    }
    StepPair pair;
    try {
      pair = step_pair_from_increment(st_n, grad_du, f_half, dt);
    } catch (const InvertedElementError&) {
      throw InvertedElementError("element " + std::to_string(e) +
                                 " inverted at a quadrature point");
    }

    for (int a = 0; a < nb; ++a) gammas_n[a] = state.committed(e, q, a);
    const AlgStressResult cres =
        algorithmic_stress(ctl.scheme, pair, gammas_n, dt, mat, ctl.z_cut);
    for (int a = 0; a < nb; ++a) state.trial(e, q, a) = cres.Gammas_np1[a];

    const Tensor2 finv_t_half = f_half.inverse().transpose();
    std::array<Vector3, 27> gv;  // F_half^-T dN_A
    for (int a = 0; a < 27; ++a) gv[a] = finv_t_half * qp.dNdX[a];
    double div_vh = 0.0;  // grad V_half : F_half^-T
    for (int a = 0; a < 27; ++a) div_vh += v_half.col(a).dot(gv[a]);

    fill_b_matrix(f_half, qp.dNdX, b_half);
    const Vec6 s_mandel = cres.S_alg.mandel();
    double p_h = 0.0;
    for (int a = 0; a < 8; ++a) p_h += qp.M[a] * p_half[a];

    // ---- momentum residual rows
    out.rm += w * (b_half.transpose() * s_mandel);
    Vector3 dv_dt = Vector3::Zero();  // (V_np1 - V_n)/dt interpolated at the qp
    for (int a = 0; a < 27; ++a) dv_dt += qp.N[a] * (v_np1.col(a) - v_n.col(a));
    dv_dt /= dt;
    for (int a = 0; a < 27; ++a) {
      Vector3 r = qp.N[a] * mat.rho0 * (dv_dt - body);
      r -= j_half * p_h * gv[a];
      if (ctl.gamma != 0.0) r += ctl.gamma * j_half * div_vh * gv[a];
      out.rm.segment<3>(3 * a) += w * r;
    }

    // ---- mass residual rows
    for (int a = 0; a < 8; ++a) out.rp[a] += w * qp.M[a] * j_half * div_vh;

    if (!with_tangent) continue;

    fill_b_matrix(f_np1, qp.dNdX, b_np1);
    const SymTensor4 cc_a =
        algorithmic_tangent(ctl.scheme, pair, gammas_n, dt, mat, ctl.z_cut);

    // material stiffness: B(F_half)^t CC_A B(F_np1), plus the F_half-route
    // block of the mid-point baseline
    Mat81 km_u = b_half.transpose() * cc_a.mandel() * b_np1;
    if (ctl.scheme == SchemeKind::Midpoint) {
      const SymTensor4 cc_b = midpoint_config_tangent(pair, gammas_n, dt, mat);
      km_u += 0.5 * (b_half.transpose() * cc_b.mandel() * b_half);
    }

    // geometric stiffness (1/2 from dF_half = grad(dU)/2)
    const Tensor2 s_mat = cres.S_alg.matrix();
    for (int a = 0; a < 27; ++a) {
      for (int b = 0; b < 27; ++b) {
        const double g = 0.5 * qp.dNdX[a].dot(s_mat * qp.dNdX[b]);
        km_u(3 * a, 3 * b) += g;
        km_u(3 * a + 1, 3 * b + 1) += g;
        km_u(3 * a + 2, 3 * b + 2) += g;
      }
    }

    // pressure-term geometry: -P J/2 (gv_Ai gv_Bj - gv_Bi gv_Aj)
    // grad-div geometry and velocity coupling
    Eigen::Matrix<double, 3, 27> kvec;  // k_B = F^-T (grad V_half)^t gv_B
    if (ctl.gamma != 0.0) {
      for (int b = 0; b < 27; ++b) kvec.col(b) = finv_t_half * (grad_vh.transpose() * gv[b]);
    }
    for (int a = 0; a < 27; ++a) {
      for (int b = 0; b < 27; ++b) {
        for (int i = 0; i < 3; ++i) {
          for (int j = 0; j < 3; ++j) {
            double v = -p_h * j_half * 0.5 * (gv[a][i] * gv[b][j] - gv[b][i] * gv[a][j]);
            if (ctl.gamma != 0.0) {
              v += ctl.gamma * j_half * 0.5 *
                   (gv[b][j] * div_vh * gv[a][i] - kvec.col(b)[j] * gv[a][i] -
                    div_vh * gv[b][i] * gv[a][j]);
            }
            km_u(3 * a + i, 3 * b + j) += v;
          }
        }
      }
    }

    out.ka += (w * 0.5 * dt) * km_u;

    // K^m_V: mass matrix and grad-div velocity derivative
    for (int a = 0; a < 27; ++a) {
      for (int b = 0; b < 27; ++b) {
        const double m = mat.rho0 / dt * qp.N[a] * qp.N[b];
        for (int i = 0; i < 3; ++i) out.ka(3 * a + i, 3 * b + i) += w * m;
        if (ctl.gamma != 0.0) {
          for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
              out.ka(3 * a + i, 3 * b + j) +=
                  w * ctl.gamma * j_half * 0.5 * gv[a][i] * gv[b][j];
        }
      }
    }

    // K^m_P: pressure coupling with the 1/2 from P_half
    for (int a = 0; a < 27; ++a)
      for (int b = 0; b < 8; ++b)
        out.kb.block<3, 1>(3 * a, b) -= w * 0.5 * j_half * qp.M[b] * gv[a];

    // K^p_V + (dt/2) K^p_U
    for (int b = 0; b < 27; ++b) {
      const Vector3 kb2 = ctl.gamma != 0.0
                              ? Vector3(kvec.col(b))
                              : Vector3(finv_t_half * (grad_vh.transpose() * gv[b]));
      const Vector3 row =
          0.5 * j_half * (gv[b] + (0.5 * dt) * (div_vh * gv[b] - kb2));
      for (int a = 0; a < 8; ++a) {
        out.kc.block<1, 3>(a, 3 * b) += (w * qp.M[a]) * row.transpose();
      }
    }
  }
}

void scatter(const TaylorHoodSpace& space, int e, const ElementWork& work, bool with_tangent,
             Vector& rm, Vector& rp, std::vector<Eigen::Triplet<double>>* trips_a,
             std::vector<Eigen::Triplet<double>>* trips_b,
             std::vector<Eigen::Triplet<double>>* trips_c) {
  const auto& nodes = space.element_vel_nodes(e);
  const auto& pnodes = space.element_p_nodes(e);
  std::array<int, 81> vdof;
  for (int a = 0; a < 27; ++a)
    for (int i = 0; i < 3; ++i) vdof[3 * a + i] = 3 * nodes[a] + i;

  for (int r = 0; r < 81; ++r) {
    if (!space.is_constrained(vdof[r])) rm[vdof[r]] += work.rm[r];
  }
  for (int r = 0; r < 8; ++r) rp[pnodes[r]] += work.rp[r];

  if (!with_tangent) return;
  for (int r = 0; r < 81; ++r) {
    if (space.is_constrained(vdof[r])) continue;
    for (int c = 0; c < 81; ++c) {
      if (space.is_constrained(vdof[c])) continue;
      if (work.ka(r, c) != 0.0) trips_a->emplace_back(vdof[r], vdof[c], work.ka(r, c));
    }
    for (int c = 0; c < 8; ++c) {
      if (work.kb(r, c) != 0.0) trips_b->emplace_back(vdof[r], pnodes[c], work.kb(r, c));
    }
  }
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 81; ++c) {
      if (space.is_constrained(vdof[c])) continue;
      if (work.kc(r, c) != 0.0) trips_c->emplace_back(pnodes[r], vdof[c], work.kc(r, c));
    }
  }
}

}  // namespace

Vector surface_traction_vector(const TaylorHoodSpace& space, const LoadSpec& loads,
                               double t_mid) {
  Vector f = Vector::Zero(space.n_vel_dofs());
  for (const auto& load : loads.tractions) {
    const Vector3 h = load.eval(t_mid);
    for (const auto& patch : space.face_patches(load.face_set)) {
      for (const auto& fq : patch.qps) {
        for (int a = 0; a < 9; ++a) {
          f.segment<3>(3 * patch.nodes[a]) += fq.w_dA * fq.N[a] * h;
        }
      }
    }
  }
  return f;
}

namespace {

struct AssembleOutput {
  Residuals res;
  std::vector<Eigen::Triplet<double>> trips_a, trips_b, trips_c;
};

AssembleOutput run_assembly(const TaylorHoodSpace& space, const SolutionVector& y_new,
                            const SolutionVector& y_old, InternalStateField& state,
                            const MaterialParams& mat, const LoadSpec& loads,
                            const AssemblyControls& ctl, const Vector* du,
                            bool with_tangent) {
  AssembleOutput out;
  out.res.Rm = Vector::Zero(space.n_vel_dofs());
  out.res.Rp = Vector::Zero(space.n_p_nodes());

  // Element work is computed independently (possibly in parallel), then
  // scattered serially in index order: results are bit-identical for any
  // thread count.
  const int ne = space.mesh().n_elements();
  std::vector<ElementWork> works(ne);
  std::string failure;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int e = 0; e < ne; ++e) {
    try {
      element_kernel(space, e, y_new, y_old, state, mat, loads, ctl, du, with_tangent,
                     works[e]);
    } catch (const Error& err) {
#ifdef _OPENMP
#pragma omp critical
#endif
      if (failure.empty()) failure = err.what();
    }
  }
  if (!failure.empty()) throw InvertedElementError(failure);

  for (int e = 0; e < ne; ++e) {
    scatter(space, e, works[e], with_tangent, out.res.Rm, out.res.Rp,
            &out.trips_a, &out.trips_b, &out.trips_c);
  }

  const Vector traction = surface_traction_vector(space, loads, ctl.t_mid);
  for (int d = 0; d < space.n_vel_dofs(); ++d) {
    if (!space.is_constrained(d)) out.res.Rm[d] -= traction[d];
  }
  return out;
}

}  // namespace

Residuals assemble_residuals(const TaylorHoodSpace& space, const SolutionVector& y_new,
                             const SolutionVector& y_old, InternalStateField& state,
                             const MaterialParams& mat, const LoadSpec& loads,
                             const AssemblyControls& ctl, const Vector* du) {
  return run_assembly(space, y_new, y_old, state, mat, loads, ctl, du, false).res;
}

TangentBlocks assemble_tangent(const TaylorHoodSpace& space, const SolutionVector& y_new,
                               const SolutionVector& y_old, InternalStateField& state,
                               const MaterialParams& mat, const LoadSpec& loads,
                               const AssemblyControls& ctl, const Vector* du) {
  auto out = run_assembly(space, y_new, y_old, state, mat, loads, ctl, du, true);
  TangentBlocks blocks;
  const int nv = space.n_vel_dofs(), np = space.n_p_nodes();
  for (int d = 0; d < nv; ++d) {
    if (space.is_constrained(d)) out.trips_a.emplace_back(d, d, 1.0);
  }
  blocks.A.resize(nv, nv);
  blocks.A.setFromTriplets(out.trips_a.begin(), out.trips_a.end());
  blocks.B.resize(nv, np);
  blocks.B.setFromTriplets(out.trips_b.begin(), out.trips_b.end());
  blocks.Cb.resize(np, nv);
  blocks.Cb.setFromTriplets(out.trips_c.begin(), out.trips_c.end());
  return blocks;
}

AssembledSystem assemble_system(const TaylorHoodSpace& space, const SolutionVector& y_new,
                                const SolutionVector& y_old, InternalStateField& state,
                                const MaterialParams& mat, const LoadSpec& loads,
                                const AssemblyControls& ctl, const Vector* du) {
  auto out = run_assembly(space, y_new, y_old, state, mat, loads, ctl, du, true);
  const int nv = space.n_vel_dofs();
  std::vector<Eigen::Triplet<double>> trips(std::move(out.trips_a));
  trips.reserve(trips.size() + out.trips_b.size() + out.trips_c.size() + nv);
  for (const auto& t : out.trips_b) trips.emplace_back(t.row(), nv + t.col(), t.value());
  for (const auto& t : out.trips_c) trips.emplace_back(nv + t.row(), t.col(), t.value());
  for (int d = 0; d < nv; ++d) {
    if (space.is_constrained(d)) trips.emplace_back(d, d, 1.0);
  }
  AssembledSystem sys;
  sys.K.resize(space.n_dofs(), space.n_dofs());
  sys.K.setFromTriplets(trips.begin(), trips.end());
  sys.R = std::move(out.res);
  return sys;
}

}  // namespace visco
