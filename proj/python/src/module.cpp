#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "jacobi_scatter/asymptotics.hpp"
#include "jacobi_scatter/errors.hpp"
#include "jacobi_scatter/szego.hpp"

namespace py = pybind11;
using namespace jacobi_scatter;

namespace {

SpectralParameter param_from(py::object z_or_zeta, bool is_zeta) {
  const Complex v = z_or_zeta.cast<Complex>();
  return is_zeta ? SpectralParameter::from_zeta(v) : zeta_of(v);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "scattering data of Jacobi operators close to the free one";

  py::register_exception<Error>(m, "JacobiScatterError");

  py::enum_<DecayClass>(m, "DecayClass")
      .value("finite_support", DecayClass::finite_support)
      .value("trace_class", DecayClass::trace_class)
      .value("first_moment", DecayClass::first_moment)
      .value("unclassified", DecayClass::unclassified);

  py::class_<CoefficientModel>(m, "CoefficientModel")
      .def("a", &CoefficientModel::a, py::arg("n"))
      .def("b", &CoefficientModel::b, py::arg("n"))
      .def_property_readonly("decay_class", &CoefficientModel::decay_class)
      .def_property_readonly("name", &CoefficientModel::name)
      .def_property_readonly("support",
                             [](const CoefficientModel& m_) -> py::object {
                               if (!m_.support()) return py::none();
                               return py::int_(*m_.support());
                             })
      .def("log_weight", &CoefficientModel::log_weight, py::arg("lam"))
      .def("__repr__",
           [](const CoefficientModel& m_) { return "<model " + m_.name() + ">"; });

  m.def("free_model", &free_model);
  m.def("jacobi_family", &jacobi_family, py::arg("alpha"), py::arg("beta"));
  m.def("pollaczek_family", &pollaczek_family, py::arg("alpha"), py::arg("beta"));
  m.def("edge_example", &edge_example, py::arg("l"), py::arg("sign"));
  m.def(
      "finite_support_model",
      [](std::vector<double> a, std::vector<double> b) {
        return finite_support_model(std::move(a), std::move(b));
      },
      py::arg("a"), py::arg("b"));
  m.def("load_model", &load_model, py::arg("path"));
  m.def("save_model", &save_model, py::arg("model"), py::arg("path"),
        py::arg("prefix_len"));

  m.def("tail_rho", &tail_rho, py::arg("model"), py::arg("n"));
  m.def("normalization_A", &normalization_A, py::arg("model"),
        py::arg("tol") = 1e-12);

  m.def(
      "zeta_of",
      [](Complex z) { return zeta_of(z).zeta(); },
      py::arg("z"), "disc image of z outside [-1,1]");
  m.def(
      "jost_function",
      [](const CoefficientModel& model, py::object z, bool is_zeta, double tol) {
        return jost_function(model, param_from(z, is_zeta), tol);
      },
      py::arg("model"), py::arg("z"), py::arg("is_zeta") = false,
      py::arg("tol") = 1e-10);
  m.def(
      "jost_values",
      [](const CoefficientModel& model, py::object z, bool is_zeta, double tol) {
        const JostSolution js = jost_backward(model, param_from(z, is_zeta), tol);
        std::vector<Complex> f;
        for (long n = -1; n <= js.m_keep; ++n) f.push_back(js.f_at(n));
        return f;
      },
      py::arg("model"), py::arg("z"), py::arg("is_zeta") = false,
      py::arg("tol") = 1e-10, "f_{-1}, f_0, f_1, ...");
  m.def(
      "perturbation_determinant",
      [](const CoefficientModel& model, py::object z, bool is_zeta, double tol) {
        return perturbation_determinant(model, param_from(z, is_zeta), tol);
      },
      py::arg("model"), py::arg("z"), py::arg("is_zeta") = false,
      py::arg("tol") = 1e-10);

  m.def("weight", &weight, py::arg("model"), py::arg("lam"), py::arg("tol") = 1e-10);
  m.def(
      "resolvent_element",
      [](const CoefficientModel& model, Complex z, long n, long mm, double tol) {
        return resolvent_element(model, zeta_of(z), n, mm, tol);
      },
      py::arg("model"), py::arg("z"), py::arg("n"), py::arg("m"),
      py::arg("tol") = 1e-10);
  m.def("scattering_matrix", &scattering_matrix, py::arg("model"), py::arg("lam"),
        py::arg("tol") = 1e-10);
  m.def("spectral_shift", &unwrapped_arg_Omega, py::arg("model"), py::arg("theta"),
        py::arg("tol") = 1e-8,
        "unwrapped arg Omega(cos theta + i0); xi = value / pi");

  m.def(
      "eigenvalues",
      [](const CoefficientModel& model, double tol) {
        const DiscreteSpectrum ds = eigenvalues(model, tol);
        py::dict d;
        d["lambdas"] = ds.lambdas;
        d["mus"] = ds.mus;
        d["window"] = ds.window;
        d["oracle_deviation"] = ds.oracle_deviation;
        if (ds.resonance_plus) d["resonance_plus"] = *ds.resonance_plus;
        if (ds.resonance_minus) d["resonance_minus"] = *ds.resonance_minus;
        return d;
      },
      py::arg("model"), py::arg("tol") = 1e-10);
  m.def("truncated_eigenvalues", &truncated_eigenvalues_oracle, py::arg("model"),
        py::arg("n"));

  m.def(
      "phase_profile",
      [](const CoefficientModel& model, const std::vector<double>& grid, double tol) {
        const ScatteringProfile p = phase_profile(model, grid, tol);
        py::dict d;
        d["theta"] = p.theta;
        d["lambda"] = p.lambda;
        d["kappa"] = p.kappa;
        d["eta"] = p.eta;
        d["xi"] = p.xi;
        d["w"] = p.w;
        d["S"] = p.S;
        return d;
      },
      py::arg("model"), py::arg("theta_grid"), py::arg("tol") = 1e-8);

  m.def("szego_function", &szego_function, py::arg("model"), py::arg("zeta"),
        py::arg("base_panels") = 64, py::arg("tol") = 1e-10);
  m.def("blaschke", &blaschke, py::arg("mus"), py::arg("zeta"));
  m.def("factorization_residual", &factorization_residual, py::arg("model"),
        py::arg("zeta_grid"), py::arg("tol") = 1e-10);

  m.def(
      "case_sum_rule",
      [](const CoefficientModel& model, int order, double tol) {
        const SumRuleResult r = case_sum_rule(model, order, tol);
        return py::make_tuple(r.lhs, r.rhs, r.residual);
      },
      py::arg("model"), py::arg("order"), py::arg("tol") = 1e-8);
  m.def(
      "trace_power_identity",
      [](const CoefficientModel& model, int n, double tol) {
        const TraceIdentityResult r = trace_power_identity(model, n, tol);
        return py::make_tuple(r.lhs, r.rhs, r.residual);
      },
      py::arg("model"), py::arg("n"), py::arg("tol") = 1e-8);
  m.def(
      "levinson_check",
      [](const CoefficientModel& model, double tol) {
        const LevinsonResult r = levinson_check(model, tol);
        py::dict d;
        d["xi_jump"] = r.xi_jump;
        d["n_eigenvalues"] = r.n_eigenvalues;
        d["kappa"] = r.kappa_resonance;
        d["residual"] = r.residual;
        return d;
      },
      py::arg("model"), py::arg("tol") = 1e-8);

  m.def("bernstein_szego_prediction", &bernstein_szego_prediction, py::arg("model"),
        py::arg("lam"), py::arg("n"), py::arg("tol") = 1e-10);
  m.def(
      "regular_polynomials",
      [](const CoefficientModel& model, double lam, long n_max) {
        return regular_poly_values(model, lam, n_max);
      },
      py::arg("model"), py::arg("lam"), py::arg("n_max"),
      "P_0(lam), ..., P_{n_max}(lam)");
}
