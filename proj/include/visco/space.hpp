#pragma once

// Q2/Q1 Taylor-Hood discretization on hexahedral meshes: triquadratic
// displacement/velocity nodes, trilinear pressure nodes, Gauss quadrature
// caches for volumes and faces, and Dirichlet masks.

#include <array>
#include <string>
#include <vector>

#include "visco/mesh.hpp"

namespace visco {

/// 1D Gauss-Legendre points and weights on [-1, 1]; exact through
/// polynomial degree 2n - 1.
struct QuadratureRule {
  std::vector<double> points;
  std::vector<double> weights;
};
QuadratureRule gauss_legendre(int n);

/// Triquadratic scalar basis: 27 nodes at the tensor grid {-1,0,1}^3,
/// local index ix + 3 iy + 9 iz.
struct Q2Eval {
  std::array<double, 27> N;
  std::array<Vector3, 27> dN;  // reference gradients
};
Q2Eval q2_eval(const Vector3& xi);

/// Trilinear scalar basis: 8 nodes at {-1,1}^3, local index ix + 2 iy + 4 iz.
std::array<double, 8> q1_eval(const Vector3& xi);

/// Per-quadrature-point element data, precomputed once per mesh.
struct QuadPoint {
  double w_detJ = 0.0;            // Gauss weight times reference Jacobian
  std::array<double, 27> N;       // Q2 values
  std::array<Vector3, 27> dNdX;   // Q2 gradients w.r.t. X
  std::array<double, 8> M;        // Q1 values
  Vector3 X;                      // reference position
};

/// One face of a named face set, with its own surface quadrature.
struct FaceQuad {
  double w_dA = 0.0;
  std::array<double, 9> N;  // Q2 values of the 9 face nodes
  Vector3 X;
};
struct FacePatch {
  int element = -1;
  std::array<int, 9> nodes;  // global velocity-node ids
  std::vector<FaceQuad> qps;
};

class TaylorHoodSpace {
 public:
  /// Builds the node sets and quadrature caches; n_gauss points per
  /// direction (4 = the p + a + 2 rule at p = 1, a = 1).
  explicit TaylorHoodSpace(const HexMesh& mesh, int n_gauss = 4);

  const HexMesh& mesh() const { return *mesh_; }
  int n_vel_nodes() const { return static_cast<int>(vel_coords_.size()); }
  int n_p_nodes() const { return mesh_->n_vertices(); }
  int n_vel_dofs() const { return 3 * n_vel_nodes(); }
  int n_dofs() const { return n_vel_dofs() + n_p_nodes(); }

  const std::vector<Vector3>& vel_coords() const { return vel_coords_; }
  const std::array<int, 27>& element_vel_nodes(int e) const { return elem_nodes_[e]; }
  const std::array<int, 8>& element_p_nodes(int e) const { return mesh_->elements[e]; }
  const std::vector<QuadPoint>& element_quadrature(int e) const { return volume_cache_[e]; }
  int n_qp_per_element() const { return n_qp_; }

  /// Face patches of a named face set (throws ConfigError when unknown).
  std::vector<FacePatch> face_patches(const std::string& set_name) const;

  /// Marks velocity dofs of every Q2 node on the set's faces, for the given
  /// component mask. Displacement follows velocity through the dU = dt/2 dV
  /// update, so one mask serves both fields.
  void constrain_face_set(const std::string& set_name, const std::array<bool, 3>& comps);
  const std::vector<char>& constrained() const { return constrained_; }
  bool is_constrained(int dof) const { return constrained_[dof] != 0; }

  /// Nearest velocity node to a point (for probes).
  int nearest_vel_node(const Vector3& x) const;

 private:
  const HexMesh* mesh_;
  std::vector<Vector3> vel_coords_;
  std::vector<std::array<int, 27>> elem_nodes_;
  std::vector<std::vector<QuadPoint>> volume_cache_;
  std::vector<char> constrained_;
  QuadratureRule rule_;
  int n_qp_ = 0;
};

}  // namespace visco
