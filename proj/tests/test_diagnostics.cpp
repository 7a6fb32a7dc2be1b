#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"
#include "visco/config.hpp"
#include "visco/diagnostics.hpp"

using namespace visco;
using namespace visco::testing;

TEST_CASE("energy budget vanishes at the unloaded rest state") {
  const auto mesh = generate_box_mesh({1, 1, 1}, {1, 1, 1});
  TaylorHoodSpace space(mesh);
  auto mat = sample_material(BranchKind::HS);
  InternalStateField state(1, space.n_qp_per_element(), 1);
  const SolutionVector rest = SolutionVector::zeros(space);
  AssemblyControls ctl{0.1, 0.05, 0.0, 1e-10, SchemeKind::Scheme2};

  const auto b = energy_budget(space, rest, rest, state, mat, LoadSpec{}, ctl);
  CHECK(b.H == 0.0);
  CHECK(b.K == 0.0);
  CHECK(b.Pot == 0.0);
  CHECK(b.D_phy == 0.0);
  CHECK(b.D_num == 0.0);
  CHECK(b.P_ext == 0.0);
  CHECK(b.balance_residual == 0.0);
}

TEST_CASE("budget terms carry their signs") {
  // loaded step on a clamped element: D_phy >= 0, P_ext matches the traction
  const auto mesh = generate_box_mesh({1, 1, 1}, {1, 1, 1});
  TaylorHoodSpace space(mesh);
  auto mat = sample_material(BranchKind::HS);
  InternalStateField state(1, space.n_qp_per_element(), 1);

  std::mt19937 rng(3);
  SolutionVector y_old = SolutionVector::zeros(space), y_new = SolutionVector::zeros(space);
  for (int n = 0; n < space.n_vel_nodes(); ++n) {
    y_old.U.segment<3>(3 * n) = 0.02 * Vector3(random_matrix(rng, 1.0).col(0));
    y_new.U.segment<3>(3 * n) = y_old.U.segment<3>(3 * n) +
                                0.01 * Vector3(random_matrix(rng, 1.0).col(1));
    y_new.V.segment<3>(3 * n) = Vector3(random_matrix(rng, 1.0).col(2));
  }
  LoadSpec loads;
  loads.tractions.push_back({"zmax", Vector3(100, 0, 0), TimeFunction::constant(1.0)});
  AssemblyControls ctl{0.01, 0.005, 10.0, 1e-10, SchemeKind::Scheme2};

  // populate the trial state for the step
  (void)assemble_residuals(space, y_new, y_old, state, mat, loads, ctl);
  const auto b = energy_budget(space, y_new, y_old, state, mat, loads, ctl);
  CHECK(b.D_phy >= 0.0);
  CHECK(b.D_num >= 0.0);
  CHECK(b.K >= 0.0);

  const Vector f = surface_traction_vector(space, loads, ctl.t_mid);
  CHECK(b.P_ext == doctest::Approx(f.dot(0.5 * (y_old.V + y_new.V))));
}

TEST_CASE("convergence study") {
  RunConfig base;
  base.mesh.type = MeshConfig::Type::Box;
  base.mesh.lengths = {1, 1, 1};
  base.mesh.divisions = {1, 1, 1};
  base.material = sample_material(BranchKind::HS);
  base.material.rho0 = 1000.0;
  base.loads.tractions.push_back(
      {"xmax", Vector3(-250, 100, -300), TimeFunction::hat(2.5, 5.0)});
  base.solver.scheme = SchemeKind::Scheme2;

  SUBCASE("identical step size gives zero error rows") {
    const auto table = convergence_study(base, {1e-3}, 1e-3, 0.02);
    REQUIRE(table.rows.size() == 1);
    CHECK(table.rows[0].converged);
    CHECK(table.rows[0].err_u == 0.0);
    CHECK(table.rows[0].err_v == 0.0);
    CHECK(table.rows[0].err_p == 0.0);
  }

  SUBCASE("non-convergent runs are excluded with a report") {
    RunConfig starved = base;
    starved.solver.l_max = 2;
    // a large increment on a hard load needs more than two corrector passes;
    // the small-step reference run stays comfortably within the limit
    starved.loads.tractions[0].direction *= 200.0;
    const auto table = convergence_study(starved, {0.05, 1e-3}, 1e-3, 0.05);
    REQUIRE(table.rows.size() == 2);
    CHECK_FALSE(table.rows[0].converged);
    CHECK(table.rows[1].converged);
  }
}
