#pragma once

// Fixed-size 3D tensor algebra for symmetric rank-2 and rank-4 tensors.
//
// Storage conventions (used everywhere, converted only through the adapters
// at the bottom of this file):
//   * SymTensor2 stores the six independent components in the order
//       (11, 22, 33, 12, 23, 13).
//   * SymTensor4 stores a 6x6 matrix in the orthonormal (Mandel) basis: the
//     rank-2 tensor A maps to the 6-vector
//       (A11, A22, A33, sqrt(2) A12, sqrt(2) A23, sqrt(2) A13),
//     so double contraction of rank-2 tensors is the plain dot product of
//     their 6-vectors, a rank-4 tensor acts as a plain matrix-vector product,
//     composition of rank-4 tensors is a matrix-matrix product, and A (x) B
//     is the outer product of the 6-vectors. No off-diagonal weight factors
//     appear outside the two adapters.

#include <cmath>

#include <Eigen/Dense>

#include "visco/error.hpp"

namespace visco {

using Tensor2 = Eigen::Matrix3d;
using Vector3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

namespace detail {
// (row, col) of each slot in the (11,22,33,12,23,13) ordering.
inline constexpr int kSlotRow[6] = {0, 1, 2, 0, 1, 0};
inline constexpr int kSlotCol[6] = {0, 1, 2, 1, 2, 2};
inline const double kSqrt2 = std::sqrt(2.0);
}  // namespace detail

class SymTensor2 {
 public:
  SymTensor2() { v_.setZero(); }
  explicit SymTensor2(const Vec6& components) : v_(components) {}

  static SymTensor2 identity() {
    SymTensor2 t;
    t.v_ << 1, 1, 1, 0, 0, 0;
    return t;
  }
  static SymTensor2 zero() { return SymTensor2{}; }

  static SymTensor2 diag(double a, double b, double c) {
    SymTensor2 t;
    t.v_ << a, b, c, 0, 0, 0;
    return t;
  }

  /// Symmetric part of a general 3x3 matrix.
  static SymTensor2 from_matrix(const Tensor2& m) {
    SymTensor2 t;
    t.v_ << m(0, 0), m(1, 1), m(2, 2), 0.5 * (m(0, 1) + m(1, 0)),
        0.5 * (m(1, 2) + m(2, 1)), 0.5 * (m(0, 2) + m(2, 0));
    return t;
  }

  Tensor2 matrix() const {
    Tensor2 m;
    m << v_[0], v_[3], v_[5], v_[3], v_[1], v_[4], v_[5], v_[4], v_[2];
    return m;
  }

  double operator()(int i, int j) const { return matrix()(i, j); }
  double& component(int slot) { return v_[slot]; }
  double component(int slot) const { return v_[slot]; }
  const Vec6& components() const { return v_; }

  Vec6 mandel() const {
    Vec6 m = v_;
    m.tail<3>() *= detail::kSqrt2;
    return m;
  }
  static SymTensor2 from_mandel(const Vec6& m) {
    SymTensor2 t;
    t.v_ = m;
    t.v_.tail<3>() /= detail::kSqrt2;
    return t;
  }

  double trace() const { return v_[0] + v_[1] + v_[2]; }

  double det() const {
    return v_[0] * (v_[1] * v_[2] - v_[4] * v_[4]) -
           v_[3] * (v_[3] * v_[2] - v_[4] * v_[5]) +
           v_[5] * (v_[3] * v_[4] - v_[1] * v_[5]);
  }

  /// Frobenius norm, |A| = (A:A)^(1/2).
  double norm() const { return mandel().norm(); }

  SymTensor2 operator+(const SymTensor2& o) const { return SymTensor2(v_ + o.v_); }
  SymTensor2 operator-(const SymTensor2& o) const { return SymTensor2(v_ - o.v_); }
  SymTensor2 operator-() const { return SymTensor2(-v_); }
  SymTensor2 operator*(double s) const { return SymTensor2(v_ * s); }
  SymTensor2& operator+=(const SymTensor2& o) {
    v_ += o.v_;
    return *this;
  }
  SymTensor2& operator-=(const SymTensor2& o) {
    v_ -= o.v_;
    return *this;
  }
  SymTensor2& operator*=(double s) {
    v_ *= s;
    return *this;
  }
  friend SymTensor2 operator*(double s, const SymTensor2& t) { return t * s; }

 private:
  Vec6 v_;  // (11, 22, 33, 12, 23, 13), plain components
};

/// A:B = sum_ij A_ij B_ij with the off-diagonal entries counted twice.
inline double ddot(const SymTensor2& a, const SymTensor2& b) {
  return a.mandel().dot(b.mandel());
}

/// Inverse by cofactors. Throws when |det| is below the degeneracy threshold;
/// FEM-level checks catch J <= 0 long before this one can trip.
inline SymTensor2 sym_inverse(const SymTensor2& a) {
  const double d = a.det();
  if (std::abs(d) < 1e-300) {
    throw SingularTensorError("sym_inverse: tensor is numerically singular");
  }
  const Tensor2 m = a.matrix();
  Tensor2 inv;
  inv << m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1), m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2),
      m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1), 0, m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0),
      m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2), 0, 0, m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  inv /= d;
  inv(1, 0) = inv(0, 1);
  inv(2, 0) = inv(0, 2);
  inv(2, 1) = inv(1, 2);
  return SymTensor2::from_matrix(inv);
}

/// Rank-4 tensor with structural minor symmetries. Major symmetry is NOT
/// assumed; the algorithmic tangents carry non-symmetric Z (x) (.) dyads.
class SymTensor4 {
 public:
  SymTensor4() { m_.setZero(); }
  explicit SymTensor4(const Mat6& mandel) : m_(mandel) {}

  /// Rank-four identity: I : A = A for every symmetric A.
  static SymTensor4 identity() { return SymTensor4(Mat6::Identity()); }
  static SymTensor4 zero() { return SymTensor4{}; }

  /// Dyad A (x) B, acting as (A (x) B) : X = (B : X) A.
  static SymTensor4 dyad(const SymTensor2& a, const SymTensor2& b) {
    return SymTensor4(a.mandel() * b.mandel().transpose());
  }

  /// Symmetrized product, [A (.) B]_ijkl = (A_ik B_jl + A_il B_jk) / 2.
  /// For A = B = C^-1 this is -d(C^-1)/dC.
  static SymTensor4 sym_product(const SymTensor2& a, const SymTensor2& b);

  const Mat6& mandel() const { return m_; }
  Mat6& mandel() { return m_; }

  SymTensor4 transpose() const { return SymTensor4(m_.transpose()); }

  SymTensor4 operator+(const SymTensor4& o) const { return SymTensor4(m_ + o.m_); }
  SymTensor4 operator-(const SymTensor4& o) const { return SymTensor4(m_ - o.m_); }
  SymTensor4 operator*(double s) const { return SymTensor4(m_ * s); }
  SymTensor4& operator+=(const SymTensor4& o) {
    m_ += o.m_;
    return *this;
  }
  friend SymTensor4 operator*(double s, const SymTensor4& t) { return t * s; }

  /// Composition (T * U) : A = T : (U : A).
  SymTensor4 operator*(const SymTensor4& o) const { return SymTensor4(m_ * o.m_); }

 private:
  Mat6 m_;  // Mandel basis
};

/// T : A over the trailing index pair.
inline SymTensor2 rank4_apply(const SymTensor4& t, const SymTensor2& a) {
  return SymTensor2::from_mandel(t.mandel() * a.mandel());
}

/// A : T over the leading index pair, i.e. rank4_apply(T^t, A).
inline SymTensor2 rank2_contract_rank4(const SymTensor2& a, const SymTensor4& t) {
  return SymTensor2::from_mandel(t.mandel().transpose() * a.mandel());
}

// ---------------------------------------------------------------------------
// Adapters between the stored representations and full 3x3(x3x3) indexing.
// These two functions and SymTensor2::mandel/from_mandel are the only places
// where the off-diagonal scale factors appear.
// ---------------------------------------------------------------------------

/// Full-index view T_ijkl of a stored rank-4 tensor.
inline double rank4_entry(const SymTensor4& t, int i, int j, int k, int l) {
  auto slot = [](int a, int b) {
    if (a == b) return a;
    const int lo = a < b ? a : b, hi = a < b ? b : a;
    if (lo == 0 && hi == 1) return 3;
    if (lo == 1 && hi == 2) return 4;
    return 5;
  };
  const int I = slot(i, j), J = slot(k, l);
  const double si = I < 3 ? 1.0 : detail::kSqrt2;
  const double sj = J < 3 ? 1.0 : detail::kSqrt2;
  return t.mandel()(I, J) / (si * sj);
}

/// Builds the stored form from a full-index functor f(i,j,k,l). The functor
/// must already carry the minor symmetries; entries are read once per slot.
template <typename F>
SymTensor4 rank4_from_full(F&& f) {
  Mat6 m;
  for (int I = 0; I < 6; ++I) {
    for (int J = 0; J < 6; ++J) {
      const double si = I < 3 ? 1.0 : detail::kSqrt2;
      const double sj = J < 3 ? 1.0 : detail::kSqrt2;
      m(I, J) = si * sj *
                f(detail::kSlotRow[I], detail::kSlotCol[I], detail::kSlotRow[J],
                  detail::kSlotCol[J]);
    }
  }
  return SymTensor4(m);
}

inline SymTensor4 SymTensor4::sym_product(const SymTensor2& a, const SymTensor2& b) {
  const Tensor2 A = a.matrix(), B = b.matrix();
  // Symmetrized in (i,j) as well so the minor symmetries hold for any A, B.
  return rank4_from_full([&](int i, int j, int k, int l) {
    return 0.25 * (A(i, k) * B(j, l) + A(i, l) * B(j, k) + B(i, k) * A(j, l) +
                   B(i, l) * A(j, k));
  });
}

}  // namespace visco
