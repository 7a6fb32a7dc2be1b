#pragma once

// Time-discrete constitutive integration: internal-state updates, the two
// energy-momentum consistent algorithmic stresses plus the mid-point
// baseline, and their consistent tangents.

#include <vector>

#include "visco/kinematics.hpp"
#include "visco/material.hpp"

namespace visco {

enum class SchemeKind { Scheme1, Scheme2, Midpoint };

/// Crank-Nicolson-type update driven by the strain at t_n only,
///   Gamma_np1 = dt/(eta + mu dt/2) (S_tilde(Ctilde_n) - S_hat0
///               + (eta/dt - mu/2) Gamma_n + mu I).
SymTensor2 update_gamma_s1(const SymTensor2& ctilde_n, const SymTensor2& gamma_n,
                           double dt, const ViscoBranch& b, const EquilibriumModel& eq);

/// Trapezoidal variant driven by both endpoint strains,
///   Gamma_np1 = dt/(eta + mu dt/2) ((S_tilde_np1 + S_tilde_n)/2 - S_hat0
///               - (mu/2 - eta/dt) Gamma_n + mu I).
SymTensor2 update_gamma_s2(const SymTensor2& ctilde_n, const SymTensor2& ctilde_np1,
                           const SymTensor2& gamma_n, double dt, const ViscoBranch& b,
                           const EquilibriumModel& eq);

/// Algorithmic conjugate variable of the chosen scheme. Satisfies
/// Q = eta (Gamma_np1 - Gamma_n)/dt when Gamma_np1 came from the matching
/// update formula. Throws for Midpoint (no algorithmic Q is defined for it).
SymTensor2 q_alg(SchemeKind scheme, const SymTensor2& ctilde_n,
                 const SymTensor2& ctilde_np1, const SymTensor2& gamma_n,
                 const SymTensor2& gamma_np1, const ViscoBranch& b,
                 const EquilibriumModel& eq);

struct AlgStressResult {
  SymTensor2 S_alg;
  /// Stress of the plain mid-point configuration the enhancement perturbs:
  /// S_iso(C_half, Gamma_half) for Scheme-1/2, the F_half-based stress for
  /// the mid-point baseline. S_alg - S_mid_config is the enhancement.
  SymTensor2 S_mid_config;
  std::vector<SymTensor2> Gammas_np1;
  bool enhancement_active = false;
  double G_iso_plus = 0.0;   // G_iso at Ctilde_np1 with the scheme's Gamma args
  double G_iso_minus = 0.0;  // G_iso at Ctilde_n with the same Gamma args
  double Z_norm = 0.0;
};

/// Evaluates the algorithmic stress of the chosen scheme over one step.
/// The enhancement is suppressed when |Z_n| < z_cut.
AlgStressResult algorithmic_stress(SchemeKind scheme, const StepPair& pair,
                                   const std::vector<SymTensor2>& gammas_n, double dt,
                                   const MaterialParams& mat, double z_cut);

/// 2 dS_alg/dC_np1 holding the step history (C_n, Gamma_n) and F_half fixed.
/// Scheme-1/2: the full consistent derivative, including (for Scheme-2) the
/// chain through Gamma_np1(Ctilde_np1); with the enhancement suppressed it
/// reduces to C_iso(C_half, Gamma_half)/2. Midpoint: zero — its internal
/// state is driven by Ctilde_n alone, and the F_half-configuration part is
/// exposed separately by midpoint_config_tangent and paired with dC_mp at
/// assembly.
SymTensor4 algorithmic_tangent(SchemeKind scheme, const StepPair& pair,
                               const std::vector<SymTensor2>& gammas_n, double dt,
                               const MaterialParams& mat, double z_cut);

/// 2 dS_mp/dC_mp of the mid-point stress at fixed internal state, where
/// C_mp = F_half^t F_half.
SymTensor4 midpoint_config_tangent(const StepPair& pair,
                                   const std::vector<SymTensor2>& gammas_n, double dt,
                                   const MaterialParams& mat);

/// Per-step material scalars, mostly for budget checks and tests.
struct DirectionalityCheck {
  double lhs = 0.0;       // Z : S_alg
  double delta_G = 0.0;   // G_iso(np1 state) - G_iso(n state)
  double dissip = 0.0;    // (dt/2) sum_a eta |dGamma/dt|^2
  double residual() const { return lhs - delta_G - dissip; }
  double scale() const;
};

/// Evaluates the discrete directionality balance for a completed step.
DirectionalityCheck directionality_check(const StepPair& pair,
                                         const std::vector<SymTensor2>& gammas_n,
                                         const AlgStressResult& res, double dt,
                                         const MaterialParams& mat);

}  // namespace visco
