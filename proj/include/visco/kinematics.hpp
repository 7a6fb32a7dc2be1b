#pragma once

// Deformation measures at a material point and the mid-point/step-pair
// quantities consumed by the time-discrete scheme.

#include "visco/tensor.hpp"

namespace visco {

/// Strain state derived from one displacement gradient.
struct DeformationState {
  Tensor2 F;         // deformation gradient
  double J = 1.0;    // det(F) > 0
  SymTensor2 C;      // F^t F
  SymTensor2 Cinv;   // C^-1
  SymTensor2 Ctilde; // J^(-2/3) C, unit determinant
};

/// Quantities a single time step [t_n, t_n+1] hands to the constitutive
/// integration. C_half is the arithmetic mean of the endpoint tensors, not
/// F_half^t F_half; the two differ and both are needed.
///
/// All step differences (Z_n, dCtilde) are carried explicitly and, when the
/// pair is built from a displacement increment, evaluated in difference form
/// so they stay relatively accurate as the increment shrinks. The quotient
/// in the stress enhancement divides by |Z_n|^2; forming these differences
/// by subtracting near-equal states would put an eps/|Z| noise floor under
/// the Newton iteration.
struct StepPair {
  SymTensor2 C_n, C_np1;
  SymTensor2 C_half;        // C_n + Z_n = (C_n + C_np1)/2
  SymTensor2 Ctilde_half;   // det(C_half)^(-1/3) C_half
  SymTensor2 Ctilde_n, Ctilde_np1;
  SymTensor2 Z_n;           // (C_np1 - C_n)/2
  SymTensor2 dCtilde;       // Ctilde_np1 - Ctilde_n, difference-formed
  Tensor2 F_half;           // I + grad of the mid-point displacement
  double J_half = 1.0;      // det(F_half)
  double dt = 0.0;
};

/// Unimodular part det(C)^(-1/3) C.
SymTensor2 unimodular(const SymTensor2& c);

/// Builds the full state from grad(U). Throws InvertedElementError when
/// det(I + gradU) <= 0.
DeformationState deformation_from_grad(const Tensor2& grad_u);

/// Assembles the step quantities from the two endpoint states and the
/// mid-point deformation gradient (computed at assembly level from
/// U_half = (U_n + U_np1)/2).
StepPair step_pair(const DeformationState& state_n, const DeformationState& state_np1,
                   const Tensor2& f_half, double dt);

/// Variant used where only the endpoint C tensors are known (material-point
/// drivers); F_half is supplied directly.
StepPair step_pair(const SymTensor2& c_n, const SymTensor2& c_np1, const Tensor2& f_half,
                   double dt);

/// Builds the pair from the state at t_n and the exact deformation-gradient
/// increment dF = grad(U_np1 - U_n), keeping every step difference accurate
/// relative to the increment itself.
StepPair step_pair_from_increment(const DeformationState& state_n, const Tensor2& d_f,
                                  const Tensor2& f_half, double dt);

/// Adjugate (transposed cofactor matrix); A adj(A) = det(A) I.
SymTensor2 adjugate(const SymTensor2& a);

/// Deviatoric projection P = I - (1/3) C^-1 (x) C, so that
/// P : A = A - (1/3)(C : A) C^-1.
SymTensor4 projection_tensor(const SymTensor2& c);

}  // namespace visco
