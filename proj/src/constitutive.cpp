#include "visco/constitutive.hpp"

#include <cmath>

namespace visco {

SymTensor2 update_gamma_s1(const SymTensor2& ctilde_n, const SymTensor2& gamma_n,
                           double dt, const ViscoBranch& b, const EquilibriumModel& eq) {
  const double k = dt / (b.eta + 0.5 * b.mu * dt);
  const SymTensor2 s_n = branch_fictitious_stress(ctilde_n, b, eq);
  return (s_n - b.S_hat0 + gamma_n * (b.eta / dt - 0.5 * b.mu) +
          SymTensor2::identity() * b.mu) *
         k;
}

SymTensor2 update_gamma_s2(const SymTensor2& ctilde_n, const SymTensor2& ctilde_np1,
                           const SymTensor2& gamma_n, double dt, const ViscoBranch& b,
                           const EquilibriumModel& eq) {
  const double k = dt / (b.eta + 0.5 * b.mu * dt);
  const SymTensor2 s_mean = (branch_fictitious_stress(ctilde_n, b, eq) +
                             branch_fictitious_stress(ctilde_np1, b, eq)) *
                            0.5;
  return (s_mean - b.S_hat0 - gamma_n * (0.5 * b.mu - b.eta / dt) +
          SymTensor2::identity() * b.mu) *
         k;
}

SymTensor2 q_alg(SchemeKind scheme, const SymTensor2& ctilde_n,
                 const SymTensor2& ctilde_np1, const SymTensor2& gamma_n,
                 const SymTensor2& gamma_np1, const ViscoBranch& b,
                 const EquilibriumModel& eq) {
  SymTensor2 s_drive;
  switch (scheme) {
    case SchemeKind::Scheme1:
      s_drive = branch_fictitious_stress(ctilde_n, b, eq);
      break;
    case SchemeKind::Scheme2:
      s_drive = (branch_fictitious_stress(ctilde_n, b, eq) +
                 branch_fictitious_stress(ctilde_np1, b, eq)) *
                0.5;
      break;
    case SchemeKind::Midpoint:
      throw Error("q_alg: the mid-point baseline defines no algorithmic Q");
  }
  const SymTensor2 gamma_half = (gamma_n + gamma_np1) * 0.5;
  return s_drive - b.S_hat0 - (gamma_half - SymTensor2::identity()) * b.mu;
}

namespace {

std::vector<SymTensor2> updated_gammas(SchemeKind scheme, const StepPair& pair,
                                       const std::vector<SymTensor2>& gammas_n, double dt,
                                       const MaterialParams& mat) {
  std::vector<SymTensor2> out(mat.branches.size());
  for (std::size_t a = 0; a < mat.branches.size(); ++a) {
    switch (scheme) {
      case SchemeKind::Scheme1:
        out[a] = update_gamma_s1(pair.Ctilde_n, gammas_n[a], dt, mat.branches[a],
                                 mat.equilibrium);
        break;
      case SchemeKind::Scheme2:
        out[a] = update_gamma_s2(pair.Ctilde_n, pair.Ctilde_np1, gammas_n[a], dt,
                                 mat.branches[a], mat.equilibrium);
        break;
      case SchemeKind::Midpoint:
        // the baseline pairs the mid-point stress with the classical
        // recurrence-style update driven by the last converged strain
        out[a] = update_gamma_s1(pair.Ctilde_n, gammas_n[a], dt, mat.branches[a],
                                 mat.equilibrium);
        break;
    }
  }
  return out;
}

std::vector<SymTensor2> halve(const std::vector<SymTensor2>& a,
                              const std::vector<SymTensor2>& b) {
  std::vector<SymTensor2> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = (a[i] + b[i]) * 0.5;
  return out;
}

/// dGamma_np1/dC_np1 for the Scheme-2 / mid-point update,
///   (dt/(2 eta + mu dt)) A_a(Ctilde_np1) o (det(C_np1)^(-1/3) P^t(C_np1)).
SymTensor4 gamma_update_chain(const StepPair& pair, const ViscoBranch& b,
                              const EquilibriumModel& eq, double dt) {
  const double k = dt / (2.0 * b.eta + b.mu * dt);
  const SymTensor4 a_np1 = branch_eval(pair.Ctilde_np1, b, eq).dS_dCtilde;
  const double scale = std::pow(pair.C_np1.det(), -1.0 / 3.0);
  return (a_np1 * projection_tensor(pair.C_np1).transpose()) * (k * scale);
}

/// dS_iso(C, Gamma_list)/dGamma_a at fixed C: -det(C)^(-1/3) P(C) o A_a(Ctilde).
SymTensor4 stress_gamma_sensitivity(const SymTensor2& c, const ViscoBranch& b,
                                    const EquilibriumModel& eq) {
  const double scale = std::pow(c.det(), -1.0 / 3.0);
  const SymTensor4 a = branch_eval(c * scale, b, eq).dS_dCtilde;
  return (projection_tensor(c) * a) * (-scale);
}

}  // namespace

AlgStressResult algorithmic_stress(SchemeKind scheme, const StepPair& pair,
                                   const std::vector<SymTensor2>& gammas_n, double dt,
                                   const MaterialParams& mat, double z_cut) {
  AlgStressResult res;
  res.Gammas_np1 = updated_gammas(scheme, pair, gammas_n, dt, mat);
  const std::vector<SymTensor2> gammas_half = halve(gammas_n, res.Gammas_np1);
  res.Z_norm = pair.Z_n.norm();

  if (scheme == SchemeKind::Midpoint) {
    const SymTensor2 c_mp =
        SymTensor2::from_matrix(pair.F_half.transpose() * pair.F_half);
    res.S_mid_config = iso_pk2(c_mp, gammas_half, mat);
    res.S_alg = res.S_mid_config;
    res.G_iso_plus = gibbs_iso(pair.Ctilde_np1, gammas_half, mat);
    res.G_iso_minus = gibbs_iso(pair.Ctilde_n, gammas_half, mat);
    res.enhancement_active = false;
    return res;
  }

  res.S_mid_config = iso_pk2(pair.C_half, gammas_half, mat);
  // Scheme-1 takes the energy jump at the end-of-step internal state,
  // Scheme-2 at the mid-point internal state.
  const auto& gammas_jump =
      scheme == SchemeKind::Scheme1 ? res.Gammas_np1 : gammas_half;
  res.G_iso_plus = gibbs_iso(pair.Ctilde_np1, gammas_jump, mat);
  res.G_iso_minus = gibbs_iso(pair.Ctilde_n, gammas_jump, mat);

  res.S_alg = res.S_mid_config;
  if (res.Z_norm >= z_cut) {
    const double num =
        gibbs_iso_jump(pair.Ctilde_n, pair.Ctilde_np1, pair.dCtilde, gammas_jump, mat) -
        ddot(res.S_mid_config, pair.Z_n);
    res.S_alg += pair.Z_n * (num / (res.Z_norm * res.Z_norm));
    res.enhancement_active = true;
  }
  return res;
}

SymTensor4 algorithmic_tangent(SchemeKind scheme, const StepPair& pair,
                               const std::vector<SymTensor2>& gammas_n, double dt,
                               const MaterialParams& mat, double z_cut) {
  const std::vector<SymTensor2> gammas_np1 =
      updated_gammas(scheme, pair, gammas_n, dt, mat);
  const std::vector<SymTensor2> gammas_half = halve(gammas_n, gammas_np1);

  if (scheme == SchemeKind::Midpoint) {
    // the baseline's internal state is driven by Ctilde_n alone, so nothing
    // in S_mp varies with C_np1 at fixed F_half; the configuration part
    // pairs with dC_mp and lives in midpoint_config_tangent
    return SymTensor4::zero();
  }

  const SymTensor4 cc_half = iso_elasticity(pair.C_half, gammas_half, mat);
  if (pair.Z_n.norm() < z_cut) {
    return cc_half * 0.5;  // matches the suppressed-enhancement stress branch
  }

  const SymTensor2 s_half = iso_pk2(pair.C_half, gammas_half, mat);
  const SymTensor2& z = pair.Z_n;
  const double z2 = ddot(z, z);

  SymTensor4 cc = cc_half * 0.5;

  // Gamma chain of Scheme-2: both the mid-configuration stress and the
  // energy jump see Gamma_np1(Ctilde_np1).
  std::vector<SymTensor4> pa(mat.branches.size());
  SymTensor2 z_pa_sum;        // sum_a Z : Pa_a
  SymTensor2 jump_chain_sum;  // sum_a (S_tilde_np1 - S_tilde_n) : dGamma/dC
  if (scheme == SchemeKind::Scheme2) {
    for (std::size_t a = 0; a < mat.branches.size(); ++a) {
      const auto& b = mat.branches[a];
      const SymTensor4 chain = gamma_update_chain(pair, b, mat.equilibrium, dt);
      pa[a] = stress_gamma_sensitivity(pair.C_half, b, mat.equilibrium) * chain;
      cc += pa[a];
      z_pa_sum += rank2_contract_rank4(z, pa[a]);
      const SymTensor2 ds = branch_fictitious_stress(pair.Ctilde_np1, b, mat.equilibrium) -
                            branch_fictitious_stress(pair.Ctilde_n, b, mat.equilibrium);
      jump_chain_sum += rank2_contract_rank4(ds, chain) * 0.5;
    }
  }

  const auto& gammas_jump = scheme == SchemeKind::Scheme1 ? gammas_np1 : gammas_half;
  const double e =
      gibbs_iso_jump(pair.Ctilde_n, pair.Ctilde_np1, pair.dCtilde, gammas_jump, mat) -
      ddot(s_half, z);

  cc += (SymTensor4::identity() - SymTensor4::dyad(z, z) * (2.0 / z2)) * (e / z2);

  SymTensor2 d2 = iso_pk2(pair.C_np1, gammas_jump, mat) -
                  rank4_apply(cc_half, z) * 0.5 - s_half;
  if (scheme == SchemeKind::Scheme2) {
    d2 -= jump_chain_sum + z_pa_sum;
  }
  cc += SymTensor4::dyad(z, d2) * (1.0 / z2);
  return cc;
}

SymTensor4 midpoint_config_tangent(const StepPair& pair,
                                   const std::vector<SymTensor2>& gammas_n, double dt,
                                   const MaterialParams& mat) {
  const std::vector<SymTensor2> gammas_np1 =
      updated_gammas(SchemeKind::Midpoint, pair, gammas_n, dt, mat);
  const SymTensor2 c_mp = SymTensor2::from_matrix(pair.F_half.transpose() * pair.F_half);
  return iso_elasticity(c_mp, halve(gammas_n, gammas_np1), mat);
}

double DirectionalityCheck::scale() const {
  return std::abs(lhs) + std::abs(delta_G) + std::abs(dissip) + 1e-300;
}

DirectionalityCheck directionality_check(const StepPair& pair,
                                         const std::vector<SymTensor2>& gammas_n,
                                         const AlgStressResult& res, double dt,
                                         const MaterialParams& mat) {
  DirectionalityCheck out;
  out.lhs = ddot(pair.Z_n, res.S_alg);
  out.delta_G = gibbs_iso(pair.Ctilde_np1, res.Gammas_np1, mat) -
                gibbs_iso(pair.Ctilde_n, gammas_n, mat);
  for (std::size_t a = 0; a < mat.branches.size(); ++a) {
    const SymTensor2 rate = (res.Gammas_np1[a] - gammas_n[a]) * (1.0 / dt);
    out.dissip += 0.5 * dt * mat.branches[a].eta * ddot(rate, rate);
  }
  return out;
}

}  // namespace visco
