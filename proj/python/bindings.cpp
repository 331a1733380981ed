#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "lh/beta.hpp"
#include "lh/config.hpp"
#include "lh/covering.hpp"
#include "lh/harness.hpp"
#include "lh/transforms.hpp"

namespace py = pybind11;
using namespace lh;

namespace {

using CArray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

GridFunction to_grid(const CArray& a) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw ConfigError("expected a square 2-D array");
  const int n = static_cast<int>(a.shape(0));
  check_grid_size(n);
  std::vector<cplx> values(a.data(), a.data() + static_cast<std::size_t>(n) * n);
  return GridFunction(n, std::move(values));
}

CArray to_array(const GridFunction& f) {
  CArray out({f.n(), f.n()});
  std::copy(f.values().begin(), f.values().end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Directional Hilbert transform toolkit (C++ core)";
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  m.def("set_threads", &set_thread_count, py::arg("threads"));
  m.def("random_bandlimited",
        [](std::uint64_t seed, int n, int k_lo, int k_hi, double cone, bool zero_mean_lines) {
          RandomOptions o;
          o.zero_mean_lines = zero_mean_lines;
          return to_array(random_bandlimited(seed, n, ConeSpec{cone}, Band{k_lo, k_hi}, o));
        },
        py::arg("seed"), py::arg("n"), py::arg("k_lo") = 1, py::arg("k_hi") = 3, py::arg("cone") = 1.0,
        py::arg("zero_mean_lines") = false);
  m.def("lp_norm", [](const CArray& f, double p) { return lp_norm(to_grid(f), p); });
  m.def("P_k", [](const CArray& f, int k) { return to_array(P_k(to_grid(f), k)); });
  m.def("cone_project", [](const CArray& f, double slope) { return to_array(cone_project(to_grid(f), ConeSpec{slope})); },
        py::arg("f"), py::arg("slope") = 1.0);

  py::class_<FieldSpec>(m, "FieldSpec")
      .def_static("from_json", &FieldSpec::from_json_text)
      .def_static(
          "sinusoidal",
          [](double eps0, std::vector<double> breaks, std::vector<double> values, int frequency) {
            return sinusoidal_field(eps0, SlopeFunction::steps(std::move(breaks), std::move(values)), frequency);
          },
          py::arg("eps0"), py::arg("breaks"), py::arg("values"), py::arg("frequency") = 1)
      .def("to_json", &FieldSpec::to_json_text)
      .def("validate", [](const FieldSpec& s) { s.validate(256); })
      .def("h", [](const FieldSpec& s, double x1, double x2) { return s.h({x1, x2}); })
      .def("u", [](const FieldSpec& s, double t) { return s.u(t); })
      .def_readwrite("eps0", &FieldSpec::eps0);

  py::class_<FieldOperators, std::shared_ptr<FieldOperators>>(m, "FieldOperators")
      .def(py::init([](const FieldSpec& s, int n) { return std::make_shared<FieldOperators>(s, n); }))
      .def("H_v", [](const FieldOperators& o, const CArray& f) { return to_array(o.H_v(to_grid(f))); })
      .def("H_l", [](const FieldOperators& o, const CArray& f, int l) { return to_array(o.H_l(to_grid(f), l)); })
      .def("Ptilde", [](const FieldOperators& o, const CArray& f, int k) { return to_array(o.Ptilde(to_grid(f), k)); })
      .def("Ptilde_adjoint",
           [](const FieldOperators& o, const CArray& f, int k) { return to_array(o.Ptilde_adjoint(to_grid(f), k)); })
      .def("commutator_term",
           [](const FieldOperators& o, const CArray& f, int l) { return to_array(o.commutator_term(to_grid(f), l)); })
      .def("main_term", [](const FieldOperators& o, const CArray& f) { return to_array(o.main_term(to_grid(f))); });

  m.def("apply_operator", [](const std::string& id, const FieldSpec& spec, const CArray& f, bool adjoint) {
    const GridFunction g = to_grid(f);
    const OperatorHandle h = make_operator(id, std::make_shared<const FieldOperators>(spec, g.n()));
    return to_array(adjoint ? h.adjoint(g) : h.apply(g));
  }, py::arg("id"), py::arg("spec"), py::arg("f"), py::arg("adjoint") = false);

  py::class_<DecayFit>(m, "DecayFit")
      .def_readonly("slope", &DecayFit::slope)
      .def_readonly("intercept", &DecayFit::intercept)
      .def_readonly("residual", &DecayFit::residual);
  m.def("fit_decay", &fit_decay);

  m.def("beta_table", [](std::uint64_t seed, int m_exp, int j0_max) {
    std::ostringstream os;
    write_beta_csv(os, beta_table(random_lipschitz(seed, m_exp), j0_max));
    return os.str();
  });
  m.def("beta_j0", [](const std::vector<double>& values, double x0, double x1, double lo, double len, int j0) {
    LipschitzSample a;
    a.x0 = x0;
    a.x1 = x1;
    a.values = values;
    a.validate();
    return beta_j0(a, Interval{lo, len}, j0);
  });

  m.def("verify_scenario", [](const std::string& scenario_json, int n) {
    const CoveringReport r = verify_covering(Scenario::from_json_text(scenario_json), n);
    return py::dict(py::arg("ratio") = r.ratio, py::arg("lhs") = r.lhs, py::arg("rhs") = r.rhs,
                    py::arg("hypotheses_ok") = r.hypotheses_ok);
  });

  m.def("run_experiment", [](const std::string& config_json) {
    const ExperimentConfig cfg = parse_experiment_config(config_json);
    const ExperimentOutput out = run_experiment(cfg);
    std::ostringstream csv;
    if (cfg.experiment == "cover") write_covering_csv(csv, out.covering);
    else write_records_csv(csv, out.records, false);
    return py::make_tuple(csv.str(), out.summary);
  });
}
