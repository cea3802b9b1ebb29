#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "diracsea/harness.hpp"

namespace py = pybind11;
using namespace diracsea;

namespace {

lattice::LatticeConfig make_lattice(int n, double length, double mass, double coupling, double t0,
                                    double t1, int nsteps) {
  lattice::LatticeConfig c;
  c.n = n;
  c.length = length;
  c.mass = mass;
  c.coupling = coupling;
  c.t0 = t0;
  c.t1 = t1;
  c.nsteps = nsteps;
  c.validate();
  return c;
}

}  // namespace

PYBIND11_MODULE(_diracsea, m) {
  m.attr("__version__") = DIRACSEA_VERSION;

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_ArithmeticError);

  py::class_<lattice::GaussianPulse>(m, "GaussianPulse")
      .def(py::init([](double amplitude, double t_center, double x_center, double sigma_t,
                       double sigma_x) {
             return lattice::GaussianPulse{amplitude, t_center, x_center, sigma_t, sigma_x};
           }),
           py::arg("amplitude"), py::arg("t_center") = 0.0, py::arg("x_center") = 0.0,
           py::arg("sigma_t") = 1.0, py::arg("sigma_x") = 1.0)
      .def_readwrite("amplitude", &lattice::GaussianPulse::amplitude)
      .def_readwrite("t_center", &lattice::GaussianPulse::t_center)
      .def_readwrite("x_center", &lattice::GaussianPulse::x_center)
      .def_readwrite("sigma_t", &lattice::GaussianPulse::sigma_t)
      .def_readwrite("sigma_x", &lattice::GaussianPulse::sigma_x);

  py::class_<lattice::LatticeConfig>(m, "Lattice")
      .def(py::init(&make_lattice), py::arg("N") = 256, py::arg("L") = 20.0, py::arg("m") = 1.0,
           py::arg("e") = 0.05, py::arg("t0") = -4.0, py::arg("t1") = 4.0, py::arg("nsteps") = 200)
      .def_readonly("N", &lattice::LatticeConfig::n)
      .def_readonly("nsteps", &lattice::LatticeConfig::nsteps)
      .def_property_readonly("dx", &lattice::LatticeConfig::dx)
      .def_property_readonly("dt", &lattice::LatticeConfig::dt);

  m.def(
      "evolve",
      [](const lattice::LatticeConfig& c, std::vector<lattice::GaussianPulse> a0,
         std::vector<lattice::GaussianPulse> a1, std::vector<lattice::GaussianPulse> gamma) {
        const lattice::Potential1p1 pot(c, std::move(a0), std::move(a1), std::move(gamma));
        return lattice::evolve(c, pot, c.t0, c.t1).matrix;
      },
      py::arg("lattice"), py::arg("a0") = std::vector<lattice::GaussianPulse>{},
      py::arg("a1") = std::vector<lattice::GaussianPulse>{},
      py::arg("gamma") = std::vector<lattice::GaussianPulse>{},
      "One-particle evolution matrix over [t0, t1], component-major 2N x 2N.");

  m.def(
      "free_projectors",
      [](const lattice::LatticeConfig& c) {
        const lattice::SpectralSplit s = lattice::free_projectors(c);
        return py::make_tuple(s.minus.matrix, s.plus.matrix);
      },
      py::arg("lattice"), "(P-, P+) of the free lattice Hamiltonian.");

  m.def("pair_number", &observables::pair_number, py::arg("u"), py::arg("in_minus"),
        py::arg("out_plus"));
  m.def("hs_norm", &hs_norm, py::arg("op"));

  m.def(
      "run_config",
      [](const std::string& json_text, const std::string& out_dir, int threads) {
        harness::RunOptions opt;
        opt.out_dir = out_dir;
        opt.threads = threads;
        const harness::RunOutcome o = harness::run(config::parse(json_text), opt);
        return py::make_tuple(o.summary_json, o.outputs);
      },
      py::arg("config_json"), py::arg("out_dir") = "out", py::arg("threads") = 1,
      "Runs a configuration given as JSON text; returns (summary_json, written paths).");

  m.def("experiment_names", &config::experiment_names);
}
