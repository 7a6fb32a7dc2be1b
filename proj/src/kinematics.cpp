#include "visco/kinematics.hpp"

#include <cmath>

namespace visco {

SymTensor2 unimodular(const SymTensor2& c) {
  return c * std::pow(c.det(), -1.0 / 3.0);
}

DeformationState deformation_from_grad(const Tensor2& grad_u) {
  DeformationState s;
  s.F = Tensor2::Identity() + grad_u;
  s.J = s.F.determinant();
  if (!(s.J > 0.0)) {
    throw InvertedElementError("deformation_from_grad: det(F) = " + std::to_string(s.J) +
                               " <= 0 (element inversion)");
  }
  s.C = SymTensor2::from_matrix(s.F.transpose() * s.F);
  s.Cinv = sym_inverse(s.C);
  s.Ctilde = s.C * std::pow(s.J, -2.0 / 3.0);
  return s;
}

SymTensor2 adjugate(const SymTensor2& a) {
  const Tensor2 m = a.matrix();
  Tensor2 adj;
  adj(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  adj(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
  adj(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  adj(0, 1) = m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2);
  adj(1, 2) = m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2);
  adj(0, 2) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
  adj(1, 0) = adj(0, 1);
  adj(2, 1) = adj(1, 2);
  adj(2, 0) = adj(0, 2);
  return SymTensor2::from_matrix(adj);
}

namespace {

/// Fills everything downstream of (C_n, dC = C_np1 - C_n). The determinant
/// increment uses the exact trilinear expansion
///   det(A + B) - det(A) = det(B) + adj(A):B + adj(B):A,
/// and the scale increment uses expm1/log1p, so all differences inherit the
/// relative accuracy of dC.
StepPair complete_step_pair(const SymTensor2& c_n, const SymTensor2& d_c,
                            const Tensor2& f_half, double dt) {
  StepPair p;
  p.C_n = c_n;
  p.Z_n = d_c * 0.5;
  p.C_np1 = c_n + d_c;
  p.C_half = c_n + p.Z_n;
  p.Ctilde_half = unimodular(p.C_half);

  const double det_n = c_n.det();
  const double d_det = d_c.det() + ddot(adjugate(c_n), d_c) + ddot(adjugate(d_c), c_n);
  if (!(det_n > 0.0) || !(1.0 + d_det / det_n > 0.0)) {
    throw InvertedElementError("step_pair: non-positive det(C) across the step");
  }
  const double s_n = std::pow(det_n, -1.0 / 3.0);
  const double d_s = s_n * std::expm1(-std::log1p(d_det / det_n) / 3.0);

  p.Ctilde_n = c_n * s_n;
  p.Ctilde_np1 = p.C_np1 * (s_n + d_s);
  p.dCtilde = d_c * (s_n + 0.5 * d_s) + p.C_half * d_s;
  p.F_half = f_half;
  p.J_half = f_half.determinant();
  p.dt = dt;
  return p;
}

}  // namespace

StepPair step_pair(const SymTensor2& c_n, const SymTensor2& c_np1, const Tensor2& f_half,
                   double dt) {
  return complete_step_pair(c_n, c_np1 - c_n, f_half, dt);
}

StepPair step_pair(const DeformationState& state_n, const DeformationState& state_np1,
                   const Tensor2& f_half, double dt) {
  return complete_step_pair(state_n.C, state_np1.C - state_n.C, f_half, dt);
}

StepPair step_pair_from_increment(const DeformationState& state_n, const Tensor2& d_f,
                                  const Tensor2& f_half, double dt) {
  // C_np1 - C_n = F_n^t dF + dF^t F_n + dF^t dF, assembled symmetrically
  const Tensor2 m = state_n.F.transpose() * d_f + 0.5 * d_f.transpose() * d_f;
  return complete_step_pair(state_n.C, SymTensor2::from_matrix(m) * 2.0, f_half, dt);
}

SymTensor4 projection_tensor(const SymTensor2& c) {
  return SymTensor4::identity() - SymTensor4::dyad(sym_inverse(c), c) * (1.0 / 3.0);
}

}  // namespace visco
