#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wdexp/bounds.hpp"
#include "wdexp/dos.hpp"
#include "wdexp/errors.hpp"
#include "wdexp/montecarlo.hpp"

namespace py = pybind11;
using namespace wdexp;

namespace {

ProfileSpec gaussian(double amplitude, double width) {
  ProfileSpec s;
  s.amplitude = amplitude;
  s.width = width;
  return s;
}

WeightDistribution weights(const std::string& name) {
  if (name == "rademacher") return WeightDistribution::rademacher();
  if (name == "centered_uniform") return WeightDistribution::centered_uniform();
  throw std::invalid_argument("weights must be rademacher or centered_uniform");
}

// Model with a Gaussian profile and a centered Gaussian wavepacket.
struct Model {
  Model(int d, double L, int K, double width, const std::string& dist, double packet_width)
      : model(build_lattice(d, L, K), Profile(gaussian(1.0, width), d), weights(dist)) {
    Wavepacket w;
    w.width = packet_width;
    psi = wavepacket_state(w, model.lattice());
  }
  ExpansionModel model;
  LatticeState psi;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Weak-disorder expansion engine";
  py::register_exception<BudgetError>(m, "BudgetError");
  py::register_exception<ToleranceError>(m, "ToleranceError");
  py::register_exception<ConfigError>(m, "ConfigError");

  m.def("lattice_points", [](int d, double L, int K) {
    auto lat = build_lattice(d, L, K);
    std::vector<std::vector<double>> pts;
    for (std::size_t i = 0; i < lat.size(); ++i) {
      auto p = lat.point(i);
      pts.emplace_back(p.begin(), p.begin() + d);
    }
    return pts;
  }, py::arg("d"), py::arg("L"), py::arg("K"));
  m.def("nu", [](const std::vector<double>& p) { return nu(std::span<const double>(p)); });

  m.def("bell_number", &bell_number);
  m.def("partitions", [](int n) {
    std::vector<std::vector<std::vector<int>>> out;
    for (const auto& A : enumerate_partitions(n)) out.push_back(A.blocks());
    return out;
  });
  m.def("partition_maps", [](int n, const std::vector<std::vector<int>>& blocks) {
    auto maps = partition_maps(SetPartition(n, blocks));
    return py::make_tuple(maps.J, maps.I);
  });
  m.def("poisson_factorial_moment", [](double mean, int k) { return poisson_factorial_moment(mean, k); });

  py::class_<Model>(m, "Model")
      .def(py::init<int, double, int, double, const std::string&, double>(), py::arg("d") = 1, py::arg("L") = 2.0,
           py::arg("K") = 8, py::arg("width") = 1.0, py::arg("weights") = "rademacher",
           py::arg("packet_width") = 1.0)
      .def("coefficient", [](const Model& s, int n, double E, double eta) {
        return coefficient_T(s.model, n, SpectralParameter(E, eta), s.psi, s.psi).value;
      }, py::arg("n"), py::arg("E"), py::arg("eta"))
      .def("coefficient_oracle", [](const Model& s, int n, double E, double eta) {
        return coefficient_T_oracle(s.model, n, SpectralParameter(E, eta), s.psi, s.psi);
      }, py::arg("n"), py::arg("E"), py::arg("eta"))
      .def("expectation", [](const Model& s, double lambda, double E, double eta, std::size_t samples,
                             std::uint64_t seed) {
        McOptions o;
        o.n_samples = samples;
        o.seed = seed;
        auto r = estimate_expectation(s.model, lambda, SpectralParameter(E, eta), s.psi, s.psi, o);
        return py::make_tuple(r.mean, r.std_error);
      }, py::arg("lam"), py::arg("E"), py::arg("eta"), py::arg("samples"), py::arg("seed"))
      .def("dos_coefficient", [](const Model& s, int n, double E, double eta) {
        return dos_coefficient_D(s.model, n, E, eta).value;
      }, py::arg("n"), py::arg("E"), py::arg("eta"))
      .def("dos_free", [](const Model& s, double E, double eta) { return dos_D0_closed(s.model.lattice(), E, eta); });

  m.def("const_C1", &const_C1, py::arg("E"), py::arg("d"));
  m.def("main_error_bound", [](int n, int d, double E, double eta, double lambda, double width) {
    return main_error_bound_rhs(n, d, E, eta, lambda, gaussian(1.0, width), WeightDistribution::rademacher(), 1.0, 1.0)
        .rhs;
  }, py::arg("n"), py::arg("d"), py::arg("E"), py::arg("eta"), py::arg("lam"), py::arg("width") = 1.0);
}
