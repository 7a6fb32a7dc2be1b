// Python bindings for the main operations: tensor-level constitutive
// evaluation, the energy-momentum consistent updates with their tangents,
// material-point drivers, and configured full runs. Symmetric tensors cross
// the boundary as plain 3x3 numpy arrays; rank-4 tangents as 6x6 matrices in
// the library's orthonormal (Mandel) component convention.

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "visco/driver.hpp"
#include "visco/material_point.hpp"

namespace py = pybind11;
using namespace visco;

namespace {

SymTensor2 sym(const Tensor2& m) { return SymTensor2::from_matrix(m); }

std::vector<SymTensor2> sym_list(const std::vector<Tensor2>& ms) {
  std::vector<SymTensor2> out;
  out.reserve(ms.size());
  for (const auto& m : ms) out.push_back(sym(m));
  return out;
}

std::vector<Tensor2> mat_list(const std::vector<SymTensor2>& ts) {
  std::vector<Tensor2> out;
  out.reserve(ts.size());
  for (const auto& t : ts) out.push_back(t.matrix());
  return out;
}

SchemeKind scheme_from(const std::string& s) {
  if (s == "1") return SchemeKind::Scheme1;
  if (s == "2") return SchemeKind::Scheme2;
  if (s == "mp") return SchemeKind::Midpoint;
  throw Error("scheme must be '1', '2' or 'mp'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "energy-momentum consistent incompressible viscoelastodynamics";

  py::register_exception<Error>(m, "ViscoError");

  py::enum_<BranchKind>(m, "BranchKind")
      .value("HS", BranchKind::HS)
      .value("MIPC", BranchKind::MIPC);

  py::class_<ViscoBranch>(m, "ViscoBranch")
      .def(py::init([](BranchKind kind, double mu, double eta, double beta_inf) {
             ViscoBranch b;
             b.kind = kind;
             b.mu = mu;
             b.eta = eta;
             b.beta_inf = beta_inf;
             return b;
           }),
           py::arg("kind"), py::arg("mu"), py::arg("eta"), py::arg("beta_inf") = 1.0)
      .def_readwrite("mu", &ViscoBranch::mu)
      .def_readwrite("eta", &ViscoBranch::eta)
      .def_readwrite("beta_inf", &ViscoBranch::beta_inf);

  py::class_<MaterialParams>(m, "MaterialParams")
      .def(py::init([](double rho0, double c1, double c2, std::vector<ViscoBranch> branches) {
             MaterialParams mat;
             mat.rho0 = rho0;
             mat.equilibrium = {c1, c2};
             mat.branches = std::move(branches);
             mat.initialize_branch_offsets(SymTensor2::identity());
             return mat;
           }),
           py::arg("rho0"), py::arg("c1"), py::arg("c2"),
           py::arg("branches") = std::vector<ViscoBranch>{})
      .def_readonly("rho0", &MaterialParams::rho0)
      .def_property_readonly("n_branches",
                             [](const MaterialParams& m2) { return m2.branches.size(); });

  m.def("unimodular", [](const Tensor2& c) { return unimodular(sym(c)).matrix(); },
        py::arg("C"), "det(C)^(-1/3) C");

  m.def("isochoric_invariants",
        [](const Tensor2& ct) {
          const auto inv = isochoric_invariants(sym(ct));
          return std::pair{inv.I1t, inv.I2t};
        },
        py::arg("Ctilde"));

  m.def("gibbs_iso",
        [](const Tensor2& ct, const std::vector<Tensor2>& gammas, const MaterialParams& mat) {
          return gibbs_iso(sym(ct), sym_list(gammas), mat);
        },
        py::arg("Ctilde"), py::arg("gammas"), py::arg("material"));

  m.def("iso_pk2",
        [](const Tensor2& c, const std::vector<Tensor2>& gammas, const MaterialParams& mat) {
          return iso_pk2(sym(c), sym_list(gammas), mat).matrix();
        },
        py::arg("C"), py::arg("gammas"), py::arg("material"),
        "isochoric second Piola-Kirchhoff stress");

  m.def("conjugate_Q",
        [](const Tensor2& ct, const Tensor2& gamma, const MaterialParams& mat, int branch) {
          return conjugate_Q(sym(ct), sym(gamma), mat.branches.at(branch), mat.equilibrium)
              .matrix();
        },
        py::arg("Ctilde"), py::arg("gamma"), py::arg("material"), py::arg("branch") = 0);

  m.def("upsilon",
        [](const Tensor2& ct, const Tensor2& gamma, const MaterialParams& mat, int branch) {
          return upsilon(sym(ct), sym(gamma), mat.branches.at(branch), mat.equilibrium);
        },
        py::arg("Ctilde"), py::arg("gamma"), py::arg("material"), py::arg("branch") = 0);

  m.def("update_gamma",
        [](const std::string& scheme, const Tensor2& ct_n, const Tensor2& ct_np1,
           const Tensor2& gamma_n, double dt, const MaterialParams& mat, int branch) {
          const auto& b = mat.branches.at(branch);
          if (scheme_from(scheme) == SchemeKind::Scheme1) {
            return update_gamma_s1(sym(ct_n), sym(gamma_n), dt, b, mat.equilibrium).matrix();
          }
          return update_gamma_s2(sym(ct_n), sym(ct_np1), sym(gamma_n), dt, b,
                                 mat.equilibrium)
              .matrix();
        },
        py::arg("scheme"), py::arg("Ctilde_n"), py::arg("Ctilde_np1"), py::arg("gamma_n"),
        py::arg("dt"), py::arg("material"), py::arg("branch") = 0);

  m.def("algorithmic_stress",
        [](const std::string& scheme, const Tensor2& c_n, const Tensor2& c_np1,
           const std::vector<Tensor2>& gammas_n, double dt, const MaterialParams& mat,
           double z_cut, std::optional<Tensor2> f_half) {
          const Tensor2 fh = f_half.value_or(Tensor2::Identity());
          const StepPair pair = step_pair(sym(c_n), sym(c_np1), fh, dt);
          const auto res = algorithmic_stress(scheme_from(scheme), pair, sym_list(gammas_n),
                                              dt, mat, z_cut);
          py::dict out;
          out["S_alg"] = res.S_alg.matrix();
          out["S_mid_config"] = res.S_mid_config.matrix();
          out["gammas_np1"] = mat_list(res.Gammas_np1);
          out["enhancement_active"] = res.enhancement_active;
          out["Z_norm"] = res.Z_norm;
          return out;
        },
        py::arg("scheme"), py::arg("C_n"), py::arg("C_np1"), py::arg("gammas_n"),
        py::arg("dt"), py::arg("material"), py::arg("z_cut") = 1e-10,
        py::arg("F_half") = std::nullopt);

  m.def("algorithmic_tangent",
        [](const std::string& scheme, const Tensor2& c_n, const Tensor2& c_np1,
           const std::vector<Tensor2>& gammas_n, double dt, const MaterialParams& mat,
           double z_cut) {
          const StepPair pair = step_pair(sym(c_n), sym(c_np1), Tensor2::Identity(), dt);
          return Mat6(algorithmic_tangent(scheme_from(scheme), pair, sym_list(gammas_n), dt,
                                          mat, z_cut)
                          .mandel());
        },
        py::arg("scheme"), py::arg("C_n"), py::arg("C_np1"), py::arg("gammas_n"),
        py::arg("dt"), py::arg("material"), py::arg("z_cut") = 1e-10,
        "2 dS_alg/dC_np1 as a 6x6 matrix in the orthonormal component basis");

  m.def("material_point_run",
        [](const std::function<Tensor2(double)>& path, double dt, double t_end,
           const std::string& scheme, const MaterialParams& mat) {
          const auto traj = material_point_run(
              [&](double t) { return sym(path(t)); }, dt, t_end, scheme_from(scheme), mat);
          py::list steps;
          for (const auto& s : traj.steps) {
            py::dict d;
            d["t"] = s.t_np1;
            d["gammas"] = mat_list(s.gammas);
            d["qs"] = mat_list(s.qs);
            d["S_alg"] = s.S_alg.matrix();
            d["upsilon"] = s.upsilon_total;
            d["directionality"] = s.directionality;
            steps.append(d);
          }
          return steps;
        },
        py::arg("path"), py::arg("dt"), py::arg("t_end"), py::arg("scheme"),
        py::arg("material"));

  m.def("material_point_rates",
        [](double amplitude, double omega, const std::vector<double>& dts, double overkill,
           double t_end, const std::string& scheme, const MaterialParams& mat) {
          const auto rows = material_point_errors(isochoric_uniaxial_path(amplitude, omega),
                                                  dts, overkill, t_end, scheme_from(scheme),
                                                  mat);
          std::vector<double> dv, eg, eq;
          for (const auto& r : rows) {
            dv.push_back(r.dt);
            eg.push_back(r.err_gamma);
            eq.push_back(r.err_q);
          }
          py::dict out;
          out["dt"] = dv;
          out["err_gamma"] = eg;
          out["err_q"] = eq;
          out["slope_gamma"] = fit_rate(dv, eg);
          out["slope_q"] = fit_rate(dv, eq);
          return out;
        },
        py::arg("amplitude"), py::arg("omega"), py::arg("dts"), py::arg("overkill"),
        py::arg("t_end"), py::arg("scheme"), py::arg("material"));

  m.def("run_config",
        [](const std::string& config_path, const std::string& out_dir) {
          const RunSummary s = run_configured(parse_config_file(config_path), out_dir);
          py::dict out;
          out["steps"] = s.steps;
          out["t_end"] = s.t_end;
          out["total_iterations"] = s.total_iterations;
          out["csv"] = s.csv_path;
          return out;
        },
        py::arg("config_path"), py::arg("out_dir") = "",
        "run a configuration file to completion, writing the configured outputs");
}
