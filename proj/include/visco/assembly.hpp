#pragma once

// Residual assembly for the time-discrete mixed formulation (momentum and
// mass rows with grad-div stabilization) and the consistent tangent blocks
// of the segregated velocity/pressure solve.

#include <Eigen/Sparse>

#include "visco/constitutive.hpp"
#include "visco/loads.hpp"
#include "visco/space.hpp"

namespace visco {

using SparseMat = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

/// Global nodal fields at one time level.
struct SolutionVector {
  Vector U;  // 3 * n_vel_nodes
  Vector P;  // n_p_nodes
  Vector V;  // 3 * n_vel_nodes

  static SolutionVector zeros(const TaylorHoodSpace& space);
};

/// Committed and trial internal state, one Gamma list per quadrature point.
class InternalStateField {
 public:
  InternalStateField() = default;
  InternalStateField(int n_elements, int n_qp, int n_branches);

  int n_branches() const { return n_branches_; }
  SymTensor2& committed(int e, int q, int a) { return committed_[index(e, q, a)]; }
  const SymTensor2& committed(int e, int q, int a) const { return committed_[index(e, q, a)]; }
  SymTensor2& trial(int e, int q, int a) { return trial_[index(e, q, a)]; }
  const SymTensor2& trial(int e, int q, int a) const { return trial_[index(e, q, a)]; }

  /// Accepts the trial state as the new committed history.
  void commit() { committed_ = trial_; }

  const std::vector<SymTensor2>& committed_raw() const { return committed_; }
  std::vector<SymTensor2>& committed_raw() { return committed_; }

 private:
  int index(int e, int q, int a) const { return (e * n_qp_ + q) * n_branches_ + a; }
  int n_qp_ = 0;
  int n_branches_ = 0;
  std::vector<SymTensor2> committed_, trial_;
};

struct AssemblyControls {
  double dt = 0.0;
  double t_mid = 0.0;       // load evaluation time t_n + dt/2
  double gamma = 0.0;       // grad-div parameter
  double z_cut = 1e-10;
  SchemeKind scheme = SchemeKind::Scheme2;
};

struct Residuals {
  Vector Rm;  // momentum rows (velocity dofs), Dirichlet rows zeroed
  Vector Rp;  // mass rows (pressure dofs)

  double norm() const { return std::sqrt(Rm.squaredNorm() + Rp.squaredNorm()); }
};

/// Tangent blocks of the segregated linear problem
///   [A B; C 0] [dV; dP] = -[Rm; Rp],
/// with A = K^m_V + (dt/2) K^m_U, B = K^m_P, C = K^p_V + (dt/2) K^p_U and
/// Dirichlet rows/columns condensed to the identity.
struct TangentBlocks {
  SparseMat A;   // n_vel_dofs x n_vel_dofs
  SparseMat B;   // n_vel_dofs x n_p
  SparseMat Cb;  // n_p x n_vel_dofs
};

/// Monolithic form of the same blocks (velocity dofs first, then pressure).
struct AssembledSystem {
  SparseMat K;
  Residuals R;
};

/// Evaluates Rm and Rp only; writes the Newton-iterate internal state into
/// `state.trial`. Throws InvertedElementError on element inversion.
///
/// `du` optionally supplies the exact displacement increment U_np1 - U_n the
/// solver maintains; with it the step differences feeding the enhancement
/// quotient stay accurate relative to the increment (see StepPair). Without
/// it they are formed by subtraction.
Residuals assemble_residuals(const TaylorHoodSpace& space, const SolutionVector& y_new,
                             const SolutionVector& y_old, InternalStateField& state,
                             const MaterialParams& mat, const LoadSpec& loads,
                             const AssemblyControls& ctl, const Vector* du = nullptr);

/// Tangent blocks at the current iterate (residuals discarded).
TangentBlocks assemble_tangent(const TaylorHoodSpace& space, const SolutionVector& y_new,
                               const SolutionVector& y_old, InternalStateField& state,
                               const MaterialParams& mat, const LoadSpec& loads,
                               const AssemblyControls& ctl, const Vector* du = nullptr);

/// Residuals and the monolithic tangent in one sweep (the solver path).
AssembledSystem assemble_system(const TaylorHoodSpace& space, const SolutionVector& y_new,
                                const SolutionVector& y_old, InternalStateField& state,
                                const MaterialParams& mat, const LoadSpec& loads,
                                const AssemblyControls& ctl, const Vector* du = nullptr);

/// Reference-configuration traction vector at time t_mid (the contribution
/// subtracted from the momentum rows). Throws on unknown face sets.
Vector surface_traction_vector(const TaylorHoodSpace& space, const LoadSpec& loads,
                               double t_mid);

}  // namespace visco
