#include "visco/diagnostics.hpp"

#include <cmath>

namespace visco {

namespace {

struct QpFields {
  Tensor2 grad_u = Tensor2::Zero();
  Vector3 v = Vector3::Zero();
  Vector3 x = Vector3::Zero();
  Vector3 u = Vector3::Zero();
};

QpFields interpolate(const TaylorHoodSpace& space, int e, const QuadPoint& qp,
                     const SolutionVector& y) {
  QpFields f;
  const auto& nodes = space.element_vel_nodes(e);
  for (int a = 0; a < 27; ++a) {
    const Vector3 ua = y.U.segment<3>(3 * nodes[a]);
    const Vector3 va = y.V.segment<3>(3 * nodes[a]);
    f.grad_u += ua * qp.dNdX[a].transpose();
    f.v += qp.N[a] * va;
    f.u += qp.N[a] * ua;
  }
  f.x = qp.X;
  return f;
}

}  // namespace

double total_energy(const TaylorHoodSpace& space, const SolutionVector& y,
                    const InternalStateField& state, const MaterialParams& mat, bool trial,
                    double* kinetic, double* potential) {
  const int nb = static_cast<int>(mat.branches.size());
  std::vector<SymTensor2> gammas(nb);
  double kin = 0.0, pot = 0.0;
  for (int e = 0; e < space.mesh().n_elements(); ++e) {
    const auto& qps = space.element_quadrature(e);
    for (int q = 0; q < static_cast<int>(qps.size()); ++q) {
      const auto f = interpolate(space, e, qps[q], y);
      const auto st = deformation_from_grad(f.grad_u);
      for (int a = 0; a < nb; ++a)
        gammas[a] = trial ? state.trial(e, q, a) : state.committed(e, q, a);
      kin += qps[q].w_detJ * 0.5 * mat.rho0 * f.v.squaredNorm();
      pot += qps[q].w_detJ * gibbs_iso(st.Ctilde, gammas, mat);
    }
  }
  if (kinetic) *kinetic = kin;
  if (potential) *potential = pot;
  return kin + pot;
}

EnergyBudget energy_budget(const TaylorHoodSpace& space, const SolutionVector& y_old,
                           const SolutionVector& y_new, const InternalStateField& state,
                           const MaterialParams& mat, const LoadSpec& loads,
                           const AssemblyControls& ctl) {
  EnergyBudget b;
  b.H_prev = total_energy(space, y_old, state, mat, /*trial=*/false);
  b.H = total_energy(space, y_new, state, mat, /*trial=*/true, &b.K, &b.Pot);

  SolutionVector y_half;
  y_half.U = 0.5 * (y_old.U + y_new.U);
  y_half.P = 0.5 * (y_old.P + y_new.P);
  y_half.V = 0.5 * (y_old.V + y_new.V);

  const int nb = static_cast<int>(mat.branches.size());
  const Vector3 body = loads.body_at(ctl.t_mid);
  for (int e = 0; e < space.mesh().n_elements(); ++e) {
    const auto& qps = space.element_quadrature(e);
    for (int q = 0; q < static_cast<int>(qps.size()); ++q) {
      const double w = qps[q].w_detJ;
      for (int a = 0; a < nb; ++a) {
        const SymTensor2 rate =
            (state.trial(e, q, a) - state.committed(e, q, a)) * (1.0 / ctl.dt);
        b.D_phy += w * 0.5 * mat.branches[a].eta * ddot(rate, rate);
      }
      const auto fh = interpolate(space, e, qps[q], y_half);
      b.P_ext += w * mat.rho0 * fh.v.dot(body);
      if (ctl.gamma != 0.0) {
        const Tensor2 f_half = Tensor2::Identity() + fh.grad_u;
        Tensor2 grad_vh = Tensor2::Zero();
        const auto& nodes = space.element_vel_nodes(e);
        for (int a = 0; a < 27; ++a)
          grad_vh += Vector3(y_half.V.segment<3>(3 * nodes[a])) * qps[q].dNdX[a].transpose();
        const double div = (grad_vh * f_half.inverse()).trace();
        b.D_num += w * ctl.gamma * f_half.determinant() * div * div;
      }
    }
  }
  // traction power: reference-configuration dead load dotted with V_half
  const Vector traction = surface_traction_vector(space, loads, ctl.t_mid);
  b.P_ext += traction.dot(y_half.V);

  b.balance_residual = b.H - b.H_prev + (b.D_phy + b.D_num - b.P_ext) * ctl.dt;
  return b;
}

MomentumRecord momenta(const TaylorHoodSpace& space, const SolutionVector& y,
                       const MaterialParams& mat) {
  MomentumRecord m;
  for (int e = 0; e < space.mesh().n_elements(); ++e) {
    for (const auto& qp : space.element_quadrature(e)) {
      const auto f = interpolate(space, e, qp, y);
      m.L += qp.w_detJ * mat.rho0 * f.v;
      m.Jm += qp.w_detJ * mat.rho0 * (f.x + f.u).cross(f.v);
    }
  }
  return m;
}

double div_velocity_norm(const TaylorHoodSpace& space, const SolutionVector& y) {
  double acc = 0.0;
  for (int e = 0; e < space.mesh().n_elements(); ++e) {
    for (const auto& qp : space.element_quadrature(e)) {
      Tensor2 grad_u = Tensor2::Zero(), grad_v = Tensor2::Zero();
      const auto& nodes = space.element_vel_nodes(e);
      for (int a = 0; a < 27; ++a) {
        grad_u += Vector3(y.U.segment<3>(3 * nodes[a])) * qp.dNdX[a].transpose();
        grad_v += Vector3(y.V.segment<3>(3 * nodes[a])) * qp.dNdX[a].transpose();
      }
      const Tensor2 f = Tensor2::Identity() + grad_u;
      const double div = (grad_v * f.inverse()).trace();
      acc += qp.w_detJ * f.determinant() * div * div;
    }
  }
  return std::sqrt(acc);
}

}  // namespace visco
