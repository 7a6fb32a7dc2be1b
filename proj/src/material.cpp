#include "visco/material.hpp"

#include <cmath>

namespace visco {

void MaterialParams::initialize_branch_offsets(const SymTensor2& ctilde0) {
  for (auto& b : branches) {
    b.S_hat0 = branch_fictitious_stress(ctilde0, b, equilibrium);
  }
}

IsochoricInvariants isochoric_invariants(const SymTensor2& ctilde) {
  IsochoricInvariants inv;
  inv.I1t = ctilde.trace();
  inv.I2t = 0.5 * (inv.I1t * inv.I1t - ddot(ctilde, ctilde));
  return inv;
}

EquilibriumEval equilibrium_eval(const SymTensor2& ctilde, const EquilibriumModel& eq) {
  const auto inv = isochoric_invariants(ctilde);
  EquilibriumEval out;
  out.G_inf = 0.5 * eq.c1 * (inv.I1t - 3.0) + 0.5 * eq.c2 * (inv.I2t - 3.0);
  out.S_inf_fict =
      SymTensor2::identity() * (eq.c1 + eq.c2 * inv.I1t) - ctilde * eq.c2;
  return out;
}

SymTensor4 equilibrium_fictitious_tangent(const EquilibriumModel& eq) {
  const SymTensor2 id = SymTensor2::identity();
  return (SymTensor4::dyad(id, id) - SymTensor4::identity()) * (2.0 * eq.c2);
}

SymTensor2 branch_fictitious_stress(const SymTensor2& ctilde, const ViscoBranch& b,
                                    const EquilibriumModel& eq) {
  if (b.kind == BranchKind::HS) {
    return (ctilde - SymTensor2::identity()) * b.mu;
  }
  return equilibrium_eval(ctilde, eq).S_inf_fict * b.beta_inf;
}

BranchEval branch_eval(const SymTensor2& ctilde, const ViscoBranch& b,
                       const EquilibriumModel& eq) {
  BranchEval out;
  if (b.kind == BranchKind::HS) {
    const SymTensor2 e = (ctilde - SymTensor2::identity()) * 0.5;
    out.G_alpha = b.mu * ddot(e, e);
    out.S_alpha_fict = (ctilde - SymTensor2::identity()) * b.mu;
    out.dS_dCtilde = SymTensor4::identity() * b.mu;
  } else {
    const auto eqv = equilibrium_eval(ctilde, eq);
    out.G_alpha = b.beta_inf * eqv.G_inf;
    out.S_alpha_fict = eqv.S_inf_fict * b.beta_inf;
    out.dS_dCtilde = equilibrium_fictitious_tangent(eq) * (0.5 * b.beta_inf);
  }
  return out;
}

SymTensor2 conjugate_Q(const SymTensor2& ctilde, const SymTensor2& gamma,
                       const ViscoBranch& b, const EquilibriumModel& eq) {
  return branch_fictitious_stress(ctilde, b, eq) - b.S_hat0 -
         (gamma - SymTensor2::identity()) * b.mu;
}

double upsilon(const SymTensor2& ctilde, const SymTensor2& gamma, const ViscoBranch& b,
               const EquilibriumModel& eq) {
  const SymTensor2 q = conjugate_Q(ctilde, gamma, b, eq);
  return ddot(q, q) / (4.0 * b.mu);
}

SymTensor2 noneq_fictitious_stress(const SymTensor2& ctilde, const SymTensor2& gamma,
                                   const ViscoBranch& b, const EquilibriumModel& eq) {
  const SymTensor2 q = conjugate_Q(ctilde, gamma, b, eq);
  if (b.kind == BranchKind::HS) {
    return q;  // dS/dCtilde = mu II, the 1/mu cancels
  }
  return rank4_apply(branch_eval(ctilde, b, eq).dS_dCtilde, q) * (1.0 / b.mu);
}

SymTensor2 total_fictitious_stress(const SymTensor2& ctilde,
                                   const std::vector<SymTensor2>& gammas,
                                   const MaterialParams& mat) {
  SymTensor2 s = equilibrium_eval(ctilde, mat.equilibrium).S_inf_fict;
  for (std::size_t a = 0; a < mat.branches.size(); ++a) {
    s += noneq_fictitious_stress(ctilde, gammas[a], mat.branches[a], mat.equilibrium);
  }
  return s;
}

SymTensor2 iso_pk2(const SymTensor2& c, const std::vector<SymTensor2>& gammas,
                   const MaterialParams& mat) {
  const double scale = std::pow(c.det(), -1.0 / 3.0);
  const SymTensor2 ctilde = c * scale;
  const SymTensor2 s_tilde = total_fictitious_stress(ctilde, gammas, mat);
  // P : S_tilde = S_tilde - (1/3)(C : S_tilde) C^-1
  return (s_tilde - sym_inverse(c) * (ddot(c, s_tilde) / 3.0)) * scale;
}

double gibbs_iso(const SymTensor2& ctilde, const std::vector<SymTensor2>& gammas,
                 const MaterialParams& mat) {
  double g = equilibrium_eval(ctilde, mat.equilibrium).G_inf;
  for (std::size_t a = 0; a < mat.branches.size(); ++a) {
    g += upsilon(ctilde, gammas[a], mat.branches[a], mat.equilibrium);
  }
  return g;
}

double gibbs_iso_jump(const SymTensor2& ct_n, const SymTensor2& ct_np1,
                      const SymTensor2& d_ct, const std::vector<SymTensor2>& gammas,
                      const MaterialParams& mat) {
  const SymTensor2 sum = ct_n + ct_np1;
  // I1 and I2 jumps: tr(B) - tr(A) = tr(D), tr(B^2) - tr(A^2) = D : (A + B)
  const double d_i1 = d_ct.trace();
  const double d_i2 = 0.5 * (d_i1 * sum.trace() - ddot(d_ct, sum));
  double jump = 0.5 * (mat.equilibrium.c1 * d_i1 + mat.equilibrium.c2 * d_i2);

  for (std::size_t a = 0; a < mat.branches.size(); ++a) {
    const auto& b = mat.branches[a];
    // Upsilon = |Q|^2/(4 mu): the jump factors into (Q_B - Q_A):(Q_B + Q_A),
    // and Q_B - Q_A = S_tilde_a(B) - S_tilde_a(A) is linear in d_ct.
    SymTensor2 d_s;
    if (b.kind == BranchKind::HS) {
      d_s = d_ct * b.mu;
    } else {
      d_s = (SymTensor2::identity() * d_i1 - d_ct) * (b.beta_inf * mat.equilibrium.c2);
    }
    const SymTensor2 q_sum = conjugate_Q(ct_n, gammas[a], b, mat.equilibrium) +
                             conjugate_Q(ct_np1, gammas[a], b, mat.equilibrium);
    jump += ddot(d_s, q_sum) / (4.0 * b.mu);
  }
  return jump;
}

namespace {

/// dS_tilde/dCtilde of the total fictitious stress at fixed internal state.
/// The non-equilibrium part of the MIPC branch is linear in Ctilde through
/// both S_tilde_a(Ctilde) inside Q and the constant rank-4 prefactor, so
///   d(S_neq_a)/dCtilde = (1/mu) A_a dQ/dCtilde = (1/mu) A_a A_a
/// with A_a = dS_tilde_a/dCtilde (constant for both models).
SymTensor4 total_fictitious_tangent(const SymTensor2& ctilde, const MaterialParams& mat) {
  SymTensor4 t = equilibrium_fictitious_tangent(mat.equilibrium) * 0.5;
  for (const auto& b : mat.branches) {
    const SymTensor4 a = branch_eval(ctilde, b, mat.equilibrium).dS_dCtilde;
    t += (a * a) * (1.0 / b.mu);
  }
  return t;
}

}  // namespace

SymTensor4 iso_elasticity(const SymTensor2& c, const std::vector<SymTensor2>& gammas,
                          const MaterialParams& mat) {
  const double scale = std::pow(c.det(), -1.0 / 3.0);  // d^(-1/3) = J^(-2/3)
  const SymTensor2 ctilde = c * scale;
  const SymTensor2 cinv = sym_inverse(c);
  const SymTensor2 s_tilde = total_fictitious_stress(ctilde, gammas, mat);
  const SymTensor2 s_iso = (s_tilde - cinv * (ddot(c, s_tilde) / 3.0)) * scale;

  const SymTensor4 proj = projection_tensor(c);
  const SymTensor4 a_tot = total_fictitious_tangent(ctilde, mat);

  SymTensor4 cc = (proj * a_tot * proj.transpose()) * (2.0 * scale * scale);
  cc += (SymTensor4::dyad(s_iso, cinv) + SymTensor4::dyad(cinv, s_iso)) * (-2.0 / 3.0);
  const double trs = ddot(s_tilde, c) * scale;
  cc += (SymTensor4::sym_product(cinv, cinv) -
         SymTensor4::dyad(cinv, cinv) * (1.0 / 3.0)) *
        (2.0 / 3.0 * trs);
  return cc;
}

}  // namespace visco
