// Python bindings for the main operations: parameter algebra, spectral
// primitives, functionals, ground states, thresholds, evolution and the
// virial diagnostics.
#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "choquard/diagnostics.hpp"
#include "choquard/io.hpp"
#include "choquard/version.hpp"

namespace py = pybind11;
using namespace choquard;

namespace {

SpectralField field_from_array(const Grid& g,
                               const py::array_t<std::complex<double>>& arr) {
  g.check();
  if (static_cast<std::size_t>(arr.size()) != g.size())
    throw ParameterError("array size does not match the grid");
  SpectralField u(g);
  auto r = arr.unchecked();
  const std::complex<double>* src = r.data(0);
  // accept any contiguous layout of matching total size
  py::array_t<std::complex<double>> flat = arr.attr("ravel")().cast<py::array_t<std::complex<double>>>();
  auto fr = flat.unchecked<1>();
  for (py::ssize_t i = 0; i < flat.size(); ++i) u[static_cast<std::size_t>(i)] = fr(i);
  (void)src;
  return u;
}

py::array_t<std::complex<double>> array_from_field(const SpectralField& u) {
  const Grid& g = u.grid();
  std::vector<py::ssize_t> shape(g.dim, g.n);
  py::array_t<std::complex<double>> out(shape);
  std::complex<double>* dst = out.mutable_data();
  for (std::size_t i = 0; i < u.size(); ++i) dst[i] = u[i];
  return out;
}

py::dict report_dict(const FunctionalReport& r) {
  py::dict d;
  d["mass"] = r.mass;
  d["energy"] = r.energy;
  d["hb_norm_sq"] = r.hb_norm_sq;
  d["kinetic"] = r.kinetic;
  d["potential_term"] = r.potential_term;
  d["nonlocal_term"] = r.nonlocal_term;
  d["weinstein"] = r.weinstein;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "pseudospectral toolkit for the Choquard equation with an "
            "inverse-square potential";
  m.attr("__version__") = CHOQUARD_VERSION;

  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<RegimeError>(m, "RegimeError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<ProblemParams>(m, "ProblemParams")
      .def(py::init([](int N, double alpha, double p, double b, int a, double delta) {
             ProblemParams pp;
             pp.dim = N;
             pp.alpha = alpha;
             pp.p = p;
             pp.b = b;
             pp.a = a;
             pp.delta = delta;
             return pp;
           }),
           py::arg("N") = 3, py::arg("alpha") = 2.0, py::arg("p") = 2.0, py::arg("b") = 0.0,
           py::arg("a") = 1, py::arg("delta") = 0.0)
      .def_readwrite("N", &ProblemParams::dim)
      .def_readwrite("alpha", &ProblemParams::alpha)
      .def_readwrite("p", &ProblemParams::p)
      .def_readwrite("b", &ProblemParams::b)
      .def_readwrite("a", &ProblemParams::a)
      .def_readwrite("delta", &ProblemParams::delta)
      .def("riesz_normalization", &ProblemParams::riesz_normalization)
      .def("hardy_limit", &ProblemParams::hardy_limit);

  py::class_<Grid>(m, "Grid")
      .def(py::init([](int dim, int n, double L, bool offset) {
             Grid g{dim, n, L, offset};
             g.check();
             return g;
           }),
           py::arg("dim") = 3, py::arg("n") = 64, py::arg("L") = 12.0, py::arg("offset") = true)
      .def_readonly("dim", &Grid::dim)
      .def_readonly("n", &Grid::n)
      .def_readonly("L", &Grid::L)
      .def_readonly("offset", &Grid::offset)
      .def("h", &Grid::h)
      .def("coords", &Grid::coords)
      .def("wavenumbers", &Grid::wavenumbers);

  m.def("validate", [](const ProblemParams& p) {
    const ValidationReport rep = validate(p);
    py::list v;
    for (const auto& i : rep.violations) v.append(i.message);
    return py::make_tuple(rep.passed(), v);
  });
  m.def("derive_exponents", [](const ProblemParams& p) {
    const CriticalExponents e = derive_exponents(p);
    py::dict d;
    d["p_mass"] = e.p_mass;
    d["p_energy"] = e.p_energy;
    d["gamma"] = e.gamma;
    d["sigma"] = e.sigma ? py::cast(*e.sigma) : py::none();
    return d;
  });
  m.def("classify_regime",
        [](const ProblemParams& p) { return regime_name(classify_regime(p)); });

  m.def("gaussian_field", [](const Grid& g, double width, double amplitude) {
          return array_from_field(gaussian_field(g, width, amplitude));
        },
        py::arg("grid"), py::arg("width") = 1.0, py::arg("amplitude") = 1.0);
  m.def("radial_bump", [](const Grid& g, double r0, double amplitude) {
          return array_from_field(radial_bump(g, r0, amplitude));
        },
        py::arg("grid"), py::arg("r0"), py::arg("amplitude") = 1.0);

  m.def("riesz_convolve",
        [](const Grid& g, const py::array_t<std::complex<double>>& density, double alpha) {
          return array_from_field(riesz_convolve(field_from_array(g, density), alpha));
        });
  m.def("kinetic_multiplier_step",
        [](const Grid& g, const py::array_t<std::complex<double>>& u, double tau,
           bool imaginary_time) {
          return array_from_field(
              kinetic_multiplier_step(field_from_array(g, u), tau, imaginary_time));
        },
        py::arg("grid"), py::arg("u"), py::arg("tau"), py::arg("imaginary_time") = false);
  m.def("hardy_weight", [](const Grid& g, double b, double delta) {
    std::vector<double> w = hardy_weight(g, b, delta);
    std::vector<py::ssize_t> shape(g.dim, g.n);
    py::array_t<double> out(shape);
    std::copy(w.begin(), w.end(), out.mutable_data());
    return out;
  });
  m.def("gradient_squared", [](const Grid& g, const py::array_t<std::complex<double>>& u) {
    return gradient_squared(field_from_array(g, u));
  });
  m.def("mass", [](const Grid& g, const py::array_t<std::complex<double>>& u) {
    return mass(field_from_array(g, u));
  });
  m.def("functional_report",
        [](const Grid& g, const py::array_t<std::complex<double>>& u, const ProblemParams& p) {
          return report_dict(functional_report(field_from_array(g, u), p));
        });
  m.def("hls_sharp_constant", &hls_sharp_constant);
  m.def("weinstein", [](const Grid& g, const py::array_t<std::complex<double>>& u,
                        const ProblemParams& p) { return weinstein(field_from_array(g, u), p); });

  m.def("minimize_weinstein",
        [](const ProblemParams& p, const Grid& g, int max_iter) {
          MinimizeOptions opts;
          opts.max_iter = max_iter;
          GroundStateResult gs = minimize_weinstein(p, g, std::nullopt, opts);
          py::dict d;
          d["c_gn"] = gs.c_gn;
          d["c_gn_from_Q"] = gs.c_gn_from_Q;
          d["j_value"] = gs.j_value;
          d["iterations"] = gs.iterations;
          d["el_residual"] = gs.el_residual;
          d["pohozaev_nonlocal"] = gs.pohozaev_nonlocal;
          d["pohozaev_hb"] = gs.pohozaev_hb;
          d["radial_variant"] = gs.radial_variant;
          d["Q"] = array_from_field(gs.Q);
          d["v"] = array_from_field(gs.v);
          d["Q_grid_L"] = gs.Q.grid().L;
          return d;
        },
        py::arg("params"), py::arg("grid"), py::arg("max_iter") = 4000);

  m.def("thresholds", [](double c_gn, const ProblemParams& p, bool radial_variant) {
          Thresholds th = thresholds(c_gn, p, radial_variant);
          py::dict d;
          d["c_gn"] = th.c_gn;
          d["K"] = th.K;
          d["H"] = th.H;
          d["radial_variant"] = th.radial_variant;
          return d;
        },
        py::arg("c_gn"), py::arg("params"), py::arg("radial_variant") = false);

  m.def("strang_step",
        [](const Grid& g, const py::array_t<std::complex<double>>& u, double dt,
           const ProblemParams& p, bool nonlinearity_off) {
          return array_from_field(
              strang_step(field_from_array(g, u), dt, p, nonlinearity_off));
        },
        py::arg("grid"), py::arg("u"), py::arg("dt"), py::arg("params"),
        py::arg("nonlinearity_off") = false);

  m.def("evolve",
        [](const Grid& g, const py::array_t<std::complex<double>>& u0, const ProblemParams& p,
           double dt, double t_max, int save_every, double blowup_gradient_factor,
           double tail_fraction_max, bool nonlinearity_off) {
          EvolveConfig cfg;
          cfg.dt = dt;
          cfg.t_max = t_max;
          cfg.save_every = save_every;
          cfg.blowup_gradient_factor = blowup_gradient_factor;
          cfg.tail_fraction_max = tail_fraction_max;
          cfg.nonlinearity_off = nonlinearity_off;
          TrajectoryRecord tr = evolve(field_from_array(g, u0), p, cfg);
          py::dict d;
          d["times"] = tr.times;
          d["variance"] = tr.variance;
          d["momentum_virial"] = tr.momentum_virial;
          d["virial_rhs"] = tr.virial_rhs;
          d["tail_fraction"] = tr.tail_fraction;
          py::list mass_l, energy_l, hb_l;
          for (const FunctionalReport& r : tr.reports) {
            mass_l.append(r.mass);
            energy_l.append(r.energy);
            hb_l.append(r.hb_norm_sq);
          }
          d["mass"] = mass_l;
          d["energy"] = energy_l;
          d["hb_norm_sq"] = hb_l;
          d["outcome"] = outcome_name(tr.outcome);
          d["final_time"] = tr.final_time;
          d["final_state"] = array_from_field(tr.final_state);
          return d;
        },
        py::arg("grid"), py::arg("u0"), py::arg("params"), py::arg("dt") = 1e-3,
        py::arg("t_max") = 1.0, py::arg("save_every") = 10,
        py::arg("blowup_gradient_factor") = 50.0, py::arg("tail_fraction_max") = 1e-4,
        py::arg("nonlinearity_off") = false);

  m.def("variance_and_momentum",
        [](const Grid& g, const py::array_t<std::complex<double>>& u) {
          auto [v, mom] = variance_and_momentum(field_from_array(g, u));
          return py::make_tuple(v, mom);
        });
  m.def("virial_rhs_standard",
        [](const Grid& g, const py::array_t<std::complex<double>>& u, const ProblemParams& p) {
          return virial_rhs_standard(field_from_array(g, u), p);
        });

  m.def("self_test", &self_test);
}
