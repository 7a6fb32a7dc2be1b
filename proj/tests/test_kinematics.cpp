#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"
#include "visco/kinematics.hpp"

using namespace visco;
using namespace visco::testing;

TEST_CASE("deformation_from_grad reference and diagonal cases") {
  const auto ref = deformation_from_grad(Tensor2::Zero());
  CHECK((ref.F - Tensor2::Identity()).norm() == 0.0);
  CHECK(ref.J == doctest::Approx(1.0));
  CHECK(rel_err(ref.C, SymTensor2::identity()) < 1e-15);
  CHECK(rel_err(ref.Ctilde, SymTensor2::identity()) < 1e-15);

  Tensor2 g = Tensor2::Zero();
  g.diagonal() << 1.0, -0.5, -0.5;
  const auto s = deformation_from_grad(g);
  CHECK(s.J == doctest::Approx(0.5));
  CHECK(rel_err(s.C, SymTensor2::diag(4, 0.25, 0.25)) < 1e-14);
  const double scale = std::pow(0.5, -2.0 / 3.0);
  CHECK(rel_err(s.Ctilde, SymTensor2::diag(4 * scale, 0.25 * scale, 0.25 * scale)) < 1e-14);

  Tensor2 bad = Tensor2::Zero();
  bad(0, 0) = -2.0;  // det(I + gradU) = -1
  CHECK_THROWS_AS((void)deformation_from_grad(bad), InvertedElementError);
}

TEST_CASE("deformation invariants on random states") {
  std::mt19937 rng(5);
  for (int s = 0; s < 50; ++s) {
    const auto st = deformation_from_grad(random_matrix(rng, 0.4));
    CHECK(rel_err(st.C, SymTensor2::from_matrix(st.F.transpose() * st.F)) < 1e-14);
    CHECK(std::abs(st.Ctilde.det() - 1.0) < 1e-12);
    CHECK((st.C.matrix() * st.Cinv.matrix() - Tensor2::Identity()).norm() < 1e-12);
  }
}

TEST_CASE("step_pair quantities") {
  const auto id = deformation_from_grad(Tensor2::Zero());

  SUBCASE("stationary step") {
    const auto p = step_pair(id, id, Tensor2::Identity(), 0.1);
    CHECK(p.Z_n.norm() == 0.0);
    CHECK(rel_err(p.C_half, id.C) < 1e-15);
  }

  SUBCASE("direct arithmetic") {
    const SymTensor2 c1 = SymTensor2::diag(1.2, 1.0, 1.0 / 1.2);
    const auto p = step_pair(SymTensor2::identity(), c1, Tensor2::Identity(), 0.1);
    CHECK(rel_err(p.Z_n, SymTensor2::diag(0.1, 0.0, (1.0 / 1.2 - 1.0) / 2.0)) < 1e-14);
    CHECK(std::abs(p.Ctilde_half.det() - 1.0) < 1e-12);
  }

  SUBCASE("unimodular mid-point for random pairs") {
    std::mt19937 rng(17);
    for (int s = 0; s < 50; ++s) {
      const auto a = deformation_from_grad(random_matrix(rng, 0.4));
      const auto b = deformation_from_grad(random_matrix(rng, 0.4));
      const auto p = step_pair(a, b, Tensor2::Identity(), 0.1);
      CHECK(std::abs(p.Ctilde_half.det() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("projection tensor acts as the deviatoric projector") {
  SUBCASE("spherical annihilation and deviatoric fixed point at C = I") {
    const SymTensor4 p = projection_tensor(SymTensor2::identity());
    CHECK(rank4_apply(p, SymTensor2::identity()).norm() < 1e-15);
    SymTensor2 traceless = SymTensor2::diag(1.0, -2.0, 1.0);
    traceless.component(3) = 0.7;
    CHECK(rel_err(rank4_apply(p, traceless), traceless) < 1e-14);
  }

  SUBCASE("matches the explicit formula, idempotent, C-orthogonal") {
    std::mt19937 rng(31);
    for (int s = 0; s < 100; ++s) {
      const SymTensor2 c = random_spd(rng);
      const SymTensor2 a = random_sym(rng, 1.0);
      const SymTensor4 p = projection_tensor(c);
      const SymTensor2 pa = rank4_apply(p, a);
      const SymTensor2 want = a - sym_inverse(c) * (ddot(c, a) / 3.0);
      CHECK(rel_err(pa, want) < 1e-13);
      CHECK(rel_err(rank4_apply(p, pa), pa) < 1e-12);
      CHECK(std::abs(ddot(pa, c)) < 1e-12 * (pa.norm() * c.norm() + 1.0));
    }
  }
}

TEST_CASE("unimodular part of C = F^t F has unit determinant") {
  std::mt19937 rng(41);
  for (int s = 0; s < 50; ++s) {
    const auto st = deformation_from_grad(random_matrix(rng, 0.5));
    CHECK(std::abs(unimodular(st.C).det() - 1.0) < 1e-12);
    // det(C)^(-1/3) C coincides with J^(-2/3) C
    CHECK(rel_err(unimodular(st.C), st.C * std::pow(st.J, -2.0 / 3.0)) < 1e-13);
  }
}
