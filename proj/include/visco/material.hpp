#pragma once

// Gibbs-energy pieces, fictitious and projected stresses, configurational
// free energy and conjugate variables for a Mooney-Rivlin equilibrium model
// with HS / MIPC viscoelastic branches. All functions are pure; the
// incompressible limit is assumed throughout (no volumetric energy).

#include <vector>

#include "visco/kinematics.hpp"
#include "visco/tensor.hpp"

namespace visco {

/// Isochoric Mooney-Rivlin equilibrium energy,
///   G_inf = c1/2 (I1t - 3) + c2/2 (I2t - 3).
struct EquilibriumModel {
  double c1 = 0.0;  // Pa
  double c2 = 0.0;  // Pa
};

enum class BranchKind { HS, MIPC };

/// One viscoelastic relaxation branch. tau = eta/mu is the relaxation time.
struct ViscoBranch {
  BranchKind kind = BranchKind::HS;
  double mu = 0.0;        // Pa
  double eta = 0.0;       // Pa s
  double beta_inf = 1.0;  // dimensionless strain-energy factor, MIPC only
  SymTensor2 S_hat0;      // constant stress offset fixed by the initial data
};

struct MaterialParams {
  double rho0 = 0.0;  // kg/m^3
  EquilibriumModel equilibrium;
  std::vector<ViscoBranch> branches;

  /// Fixes S_hat0 on every branch from the initial unimodular strain,
  /// assuming the initial conjugate variables vanish (start from
  /// thermodynamic equilibrium): S_hat0 = S_tilde^a(Ctilde_0).
  void initialize_branch_offsets(const SymTensor2& ctilde0);
};

/// First and second isochoric invariants of a unimodular tensor.
struct IsochoricInvariants {
  double I1t = 3.0;
  double I2t = 3.0;
};
IsochoricInvariants isochoric_invariants(const SymTensor2& ctilde);

/// Equilibrium energy and fictitious stress S_tilde_inf = 2 dG_inf/dCtilde.
struct EquilibriumEval {
  double G_inf = 0.0;
  SymTensor2 S_inf_fict;  // c1 I + c2 (I1t I - Ctilde)
};
EquilibriumEval equilibrium_eval(const SymTensor2& ctilde, const EquilibriumModel& eq);

/// Equilibrium fictitious tangent 2 d(S_tilde_inf)/dCtilde = 2 c2 (I(x)I - II).
SymTensor4 equilibrium_fictitious_tangent(const EquilibriumModel& eq);

/// Branch energy G_a, fictitious stress S_tilde_a = 2 dG_a/dCtilde and its
/// tangent dS_tilde_a/dCtilde.
struct BranchEval {
  double G_alpha = 0.0;
  SymTensor2 S_alpha_fict;
  SymTensor4 dS_dCtilde;
};
BranchEval branch_eval(const SymTensor2& ctilde, const ViscoBranch& b,
                       const EquilibriumModel& eq);

/// Branch fictitious stress only (no tangent).
SymTensor2 branch_fictitious_stress(const SymTensor2& ctilde, const ViscoBranch& b,
                                    const EquilibriumModel& eq);

/// Configurational free energy of one branch,
///   Upsilon = |S_tilde_a - S_hat0 - mu (Gamma - I)|^2 / (4 mu) >= 0.
double upsilon(const SymTensor2& ctilde, const SymTensor2& gamma, const ViscoBranch& b,
               const EquilibriumModel& eq);

/// Conjugate variable Q = S_tilde_a(Ctilde) - S_hat0 - mu (Gamma - I)
/// = -2 dUpsilon/dGamma.
SymTensor2 conjugate_Q(const SymTensor2& ctilde, const SymTensor2& gamma,
                       const ViscoBranch& b, const EquilibriumModel& eq);

/// Non-equilibrium fictitious stress (1/mu) dS_tilde_a/dCtilde : Q.
/// Vanishes with Q; reduces to Q itself for the HS branch.
SymTensor2 noneq_fictitious_stress(const SymTensor2& ctilde, const SymTensor2& gamma,
                                   const ViscoBranch& b, const EquilibriumModel& eq);

/// Total fictitious stress S_tilde = S_tilde_inf + sum_a S_tilde_neq_a,
/// all evaluated at the unimodular part of c.
SymTensor2 total_fictitious_stress(const SymTensor2& ctilde,
                                   const std::vector<SymTensor2>& gammas,
                                   const MaterialParams& mat);

/// Isochoric second Piola-Kirchhoff stress
///   S_iso = det(C)^(-1/3) P(C) : S_tilde(det(C)^(-1/3) C, Gammas),
/// deviatoric in the convected sense: S_iso : C = 0.
SymTensor2 iso_pk2(const SymTensor2& c, const std::vector<SymTensor2>& gammas,
                   const MaterialParams& mat);

/// Isochoric Gibbs energy G_iso = G_inf + sum_a Upsilon_a.
double gibbs_iso(const SymTensor2& ctilde, const std::vector<SymTensor2>& gammas,
                 const MaterialParams& mat);

/// G_iso(ct_np1, gammas) - G_iso(ct_n, gammas) at a fixed internal state,
/// evaluated in difference form: every term is proportional to the supplied
/// d_ct = ct_np1 - ct_n, so the result keeps relative accuracy when the two
/// states nearly coincide. The stress-enhancement quotient divides this jump
/// by |Z_n|^2 and is unusable without it.
double gibbs_iso_jump(const SymTensor2& ct_n, const SymTensor2& ct_np1,
                      const SymTensor2& d_ct, const std::vector<SymTensor2>& gammas,
                      const MaterialParams& mat);

/// Elasticity tensor 2 dS_iso/dC at fixed internal state,
///   C_iso = 2 d^(-2/3) P A P^t - 2/3 (S_iso (x) Cinv + Cinv (x) S_iso)
///           + 2/3 d^(-1/3) (S_tilde : C) (Cinv (.) Cinv - 1/3 Cinv (x) Cinv),
/// with d = det(C) and A = dS_tilde/dCtilde. Major-symmetric.
SymTensor4 iso_elasticity(const SymTensor2& c, const std::vector<SymTensor2>& gammas,
                          const MaterialParams& mat);

}  // namespace visco
