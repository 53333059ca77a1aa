#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "locsparse/dictionary.hpp"
#include "locsparse/experiments.hpp"
#include "locsparse/forward.hpp"
#include "locsparse/noise.hpp"
#include "locsparse/norms.hpp"
#include "locsparse/projection.hpp"
#include "locsparse/recovery.hpp"
#include "locsparse/solver.hpp"

namespace py = pybind11;
using namespace locsparse;

namespace {

Normalization normalization_from(const std::string& name) {
  if (name == "raw") return Normalization::raw;
  if (name == "l2") return Normalization::l2;
  if (name == "l1") return Normalization::l1;
  throw ContractViolation("unknown normalization: " + name);
}

py::dict report_to_dict(const SolveReport& report) {
  py::dict d;
  d["iterations"] = report.iterations;
  d["stop_reason"] =
      report.stop_reason == StopReason::converged ? "converged" : "max_iter";
  d["objective"] = report.objective;
  d["final_lambda"] = report.final_lambda;
  d["final_mu"] = report.final_mu;
  d["final_tolerances"] =
      py::make_tuple(report.final_tolerances.pri1, report.final_tolerances.pri2,
                     report.final_tolerances.dual);
  py::list history;
  for (const auto& row : report.residual_history)
    history.append(py::make_tuple(row[0], row[1], row[2]));
  d["residual_history"] = history;
  py::list penalties;
  for (const auto& row : report.penalty_history)
    penalties.append(py::make_tuple(row[0], row[1]));
  d["penalty_history"] = penalties;
  return d;
}

py::dict membership_to_dict(const MembershipReport& report) {
  py::dict d;
  d["member"] = report.member;
  d["max_rows"] = report.certificate.max_rows;
  d["weights"] = report.certificate.weights;
  d["weight_sum"] = report.weight_sum;
  d["worst_violation"] = report.worst_violation;
  d["detail"] = report.detail;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Locally sparse coefficient reconstruction via "
            "l(1,inf)-regularized double-split ADMM";

  py::register_exception<ContractViolation>(m, "ContractViolation",
                                            PyExc_ValueError);

  // ---- norms ----
  m.def("norm_l1_inf", [](const Matrix& u) { return norm_l1_inf(u); },
        py::arg("u"), "max over rows of the row l1 norms");
  m.def("norm_inf_1", [](const Matrix& p) { return norm_inf_1(p); },
        py::arg("p"), "sum over rows of the row max magnitudes");
  m.def("norm_l0_inf",
        [](const Matrix& u, double zero_tol) {
          return norm_l0_inf(u, zero_tol);
        },
        py::arg("u"), py::arg("zero_tol") = 0.0);

  // ---- dictionary ----
  py::class_<DictionaryMatrix>(m, "DictionaryMatrix")
      .def(py::init([](Matrix values, Vector grid, const std::string& norm) {
             return DictionaryMatrix(std::move(values), std::move(grid),
                                     normalization_from(norm));
           }),
           py::arg("values"), py::arg("time_grid"),
           py::arg("normalization") = "raw")
      .def_readonly("values", &DictionaryMatrix::values)
      .def_readonly("time_grid", &DictionaryMatrix::time_grid)
      .def_property_readonly("normalization",
                             [](const DictionaryMatrix& b) {
                               return std::string(to_string(b.normalization));
                             })
      .def("validate", &DictionaryMatrix::validate, py::arg("tol") = 1e-12);

  m.def("build_kinetic_dictionary",
        [](const Vector& curve, const Vector& decays, const Vector& grid) {
          return build_kinetic_dictionary(InputCurve{curve, ""},
                                          DecayGrid{decays}, grid);
        },
        py::arg("input_curve"), py::arg("decays"), py::arg("time_grid"));
  m.def("gamma_variate_curve",
        [](const Vector& grid, double tau0) {
          return gamma_variate_curve(grid, tau0).samples;
        },
        py::arg("time_grid"), py::arg("tau0"));
  m.def("log_decay_grid",
        [](Index n, double lo, double hi) {
          return log_decay_grid(n, lo, hi).params;
        },
        py::arg("n"), py::arg("lo"), py::arg("hi"));
  m.def("normalize_columns",
        [](const DictionaryMatrix& b, const std::string& mode) {
          return normalize_columns(b, normalization_from(mode));
        },
        py::arg("dictionary"), py::arg("mode"));
  m.def("mutual_incoherence", &mutual_incoherence, py::arg("dictionary"));
  m.def("check_scaling_condition",
        [](const DictionaryMatrix& b, const std::vector<Index>& support,
           double tol) {
          const ScalingReport report = check_scaling_condition(b, support, tol);
          py::list violations;
          for (const auto& v : report.violations)
            violations.append(py::make_tuple(v.column, v.other, v.value));
          py::dict d;
          d["satisfied"] = report.satisfied;
          d["violations"] = violations;
          return d;
        },
        py::arg("dictionary"), py::arg("row_support"), py::arg("tol") = 1e-9);

  // ---- forward ----
  py::class_<ForwardOperator>(m, "ForwardOperator")
      .def_static("dense", &ForwardOperator::Dense, py::arg("matrix"))
      .def_static("conv2d",
                  [](const Matrix& kernel, Index m1, Index m2) {
                    return ForwardOperator::Conv2d(kernel, {m1, m2});
                  },
                  py::arg("kernel"), py::arg("m1"), py::arg("m2"))
      .def_property_readonly("in_dim", &ForwardOperator::in_dim)
      .def_property_readonly("out_dim", &ForwardOperator::out_dim)
      .def("apply", &ForwardOperator::apply, py::arg("x"))
      .def("apply_adjoint", &ForwardOperator::apply_adjoint, py::arg("y"))
      .def("normal_solve", &ForwardOperator::normal_solve, py::arg("r"),
           py::arg("mu"))
      .def("to_dense", &ForwardOperator::to_dense);

  m.def("gaussian_kernel", &gaussian_kernel, py::arg("sigma"));
  m.def("apply_forward",
        [](const ForwardOperator& a, const Matrix& u,
           const DictionaryMatrix& b) {
          return apply_forward(a, CoefficientMatrix(u, {u.rows(), 1}), b)
              .values;
        },
        py::arg("operator"), py::arg("u"), py::arg("dictionary"));
  m.def("add_gaussian_noise",
        [](const Matrix& w, double sigma, std::uint64_t seed) {
          return add_gaussian_noise(DataMatrix(w), sigma, seed).values;
        },
        py::arg("w"), py::arg("sigma"), py::arg("seed"));

  // ---- projection ----
  m.def("project_row",
        [](const Vector& g, double v_cap, double beta, double lam) {
          return project_row(g, {v_cap, beta, lam});
        },
        py::arg("g"), py::arg("v_cap"), py::arg("beta") = 0.0,
        py::arg("lam") = 1.0);
  m.def("project_matrix",
        [](const Matrix& g, double v_cap, double beta, double lam) {
          return project_matrix(g, {v_cap, beta, lam}).values;
        },
        py::arg("g"), py::arg("v_cap"), py::arg("beta") = 0.0,
        py::arg("lam") = 1.0);

  // ---- solver ----
  py::class_<SolverParams>(m, "SolverParams")
      .def(py::init([](double v_cap, double beta, double lambda0, double mu0,
                       double eps_abs, double eps_rel, double eta1,
                       double eta2, double tau1, double tau2, int max_iter,
                       int adapt_freeze_iter) {
             SolverParams p{v_cap,   beta, lambda0, mu0,  eps_abs,
                            eps_rel, eta1, eta2,    tau1, tau2,
                            max_iter, adapt_freeze_iter};
             p.validate();
             return p;
           }),
           py::arg("v_cap"), py::arg("beta") = 0.1, py::arg("lambda0") = 0.5,
           py::arg("mu0") = 0.1, py::arg("eps_abs") = 1e-6,
           py::arg("eps_rel") = 1e-4, py::arg("eta1") = 10.0,
           py::arg("eta2") = 10.0, py::arg("tau1") = 2.0,
           py::arg("tau2") = 2.0, py::arg("max_iter") = 2000,
           py::arg("adapt_freeze_iter") = 100)
      .def_readwrite("v_cap", &SolverParams::v_cap)
      .def_readwrite("beta", &SolverParams::beta)
      .def_readwrite("max_iter", &SolverParams::max_iter);

  m.def("solve",
        [](const ForwardOperator& a, const DictionaryMatrix& b,
           const Matrix& w, const SolverParams& params) {
          auto [u, report] = solve(a, b, DataMatrix(w), params);
          return py::make_tuple(u.values, report_to_dict(report));
        },
        py::arg("operator"), py::arg("dictionary"), py::arg("w"),
        py::arg("params"));

  // ---- support & recovery ----
  py::class_<SupportMap>(m, "SupportMap")
      .def(py::init<>())
      .def_readwrite("active", &SupportMap::active)
      .def_readwrite("argmax", &SupportMap::argmax)
      .def_readwrite("zero_tol", &SupportMap::zero_tol);

  m.def("extract_support",
        [](const Matrix& u, double rel_tol) {
          return extract_support(u, rel_tol);
        },
        py::arg("u"), py::arg("rel_tol"));
  m.def("predict_asymptotic_support",
        [](const ForwardOperator& a, const Matrix& w,
           const DictionaryMatrix& b, double tie_tol) {
          return predict_asymptotic_support(a, DataMatrix(w), b, tie_tol);
        },
        py::arg("operator"), py::arg("w"), py::arg("dictionary"),
        py::arg("tie_tol") = 0.0);
  m.def("debias_on_support",
        [](const ForwardOperator& a, const DictionaryMatrix& b,
           const Matrix& w, const SupportMap& support,
           const SolverParams& params) {
          return debias_on_support(a, b, DataMatrix(w), support, params)
              .values;
        },
        py::arg("operator"), py::arg("dictionary"), py::arg("w"),
        py::arg("support"), py::arg("params"));

  m.def("subgradient_membership",
        [](const Matrix& p, const Matrix& u, double tol) {
          return membership_to_dict(subgradient_membership(p, u, tol));
        },
        py::arg("p"), py::arg("u"), py::arg("tol"));
  m.def("nonneg_subgradient_membership",
        [](const Matrix& p, const Matrix& u, double tol) {
          return membership_to_dict(nonneg_subgradient_membership(p, u, tol));
        },
        py::arg("p"), py::arg("u"), py::arg("tol"));
  m.def("nearest_subgradient", &nearest_subgradient, py::arg("c"),
        py::arg("u"));
  m.def("check_source_condition",
        [](const Matrix& u_hat, const ForwardOperator& a,
           const DictionaryMatrix& b, double tol, int max_iter) {
          const SourceConditionReport report = check_source_condition(
              CoefficientMatrix(u_hat, {u_hat.rows(), 1}), a, b, tol,
              max_iter);
          py::dict d;
          d["satisfied"] = report.satisfied;
          d["q"] = report.q;
          d["residual"] = report.residual;
          d["iterations"] = report.iterations;
          return d;
        },
        py::arg("u_hat"), py::arg("operator"), py::arg("dictionary"),
        py::arg("tol"), py::arg("max_iter") = 5000);

  auto instance_to_dict = [](const RecoveryInstance& instance) {
    py::dict d;
    d["a"] = instance.a.to_dense();
    d["b"] = instance.b;
    d["u_hat"] = instance.u_hat.values;
    d["w"] = instance.w.values;
    d["true_atoms"] = instance.true_atoms;
    return d;
  };
  m.def("build_recovery_instance",
        [instance_to_dict](Index m, Index n, Index t, std::uint64_t seed) {
          return instance_to_dict(build_recovery_instance(m, n, t, seed));
        },
        py::arg("m"), py::arg("n"), py::arg("t"), py::arg("seed"));
  m.def("build_negative_instance",
        [instance_to_dict](std::uint64_t seed) {
          return instance_to_dict(build_negative_instance(seed));
        },
        py::arg("seed"));
  m.def("check_1d_recovery",
        [](const DictionaryMatrix& b, Index j, double alpha_plus_beta,
           const std::string& mode, std::optional<Vector> gamma) {
          const OneDimRecoveryReport report = check_1d_recovery(
              b, j, alpha_plus_beta,
              mode == "kl" ? FidelityMode::kl : FidelityMode::l2,
              gamma.value_or(Vector()));
          return py::make_tuple(report.satisfied, report.p);
        },
        py::arg("dictionary"), py::arg("j"), py::arg("alpha_plus_beta"),
        py::arg("mode") = "l2", py::arg("gamma") = std::nullopt);

  // ---- experiments ----
  py::class_<Phantom>(m, "Phantom")
      .def_property_readonly(
          "u_true", [](const Phantom& p) { return p.u_true.values; })
      .def_property_readonly("shape", [](const Phantom& p) {
        return py::make_tuple(p.spatial_shape.m1, p.spatial_shape.m2);
      });

  m.def("default_phantom",
        [](Index m1, Index m2, Index atoms) {
          return default_phantom(m1, m2, atoms);
        },
        py::arg("m1"), py::arg("m2"), py::arg("atoms") = 8);
  m.def("support_error",
        [](const Matrix& u_rec, const Phantom& phantom, double rel_tol) {
          const SupportErrorReport report = support_error(
              CoefficientMatrix(u_rec, phantom.spatial_shape), phantom,
              rel_tol);
          py::dict d;
          d["percent"] = report.percent;
          d["weighted_percent"] = report.weighted_percent;
          d["wrong_count"] = report.wrong_count;
          return d;
        },
        py::arg("u_rec"), py::arg("phantom"), py::arg("rel_tol") = 1e-3);
  m.def("sweep_v",
        [](const ForwardOperator& a, const DictionaryMatrix& b,
           const Phantom& phantom, double sigma, std::uint64_t seed,
           const std::vector<double>& v_list, const SolverParams& params,
           double support_rel_tol) {
          const SweepTable table = sweep_v(a, b, phantom, sigma, seed, v_list,
                                           params, support_rel_tol);
          py::list rows;
          for (const SweepRow& row : table.rows) {
            py::dict d;
            d["v_cap"] = row.v_cap;
            d["wrong_pixel_percent"] = row.wrong_pixel_percent;
            d["weighted_percent"] = row.weighted_percent;
            d["iterations"] = row.iterations;
            rows.append(d);
          }
          return rows;
        },
        py::arg("operator"), py::arg("dictionary"), py::arg("phantom"),
        py::arg("sigma"), py::arg("seed"), py::arg("v_list"),
        py::arg("params"), py::arg("support_rel_tol") = 1e-3);
}
