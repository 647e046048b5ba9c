// Python bindings for the core library. Angles are plain floats in radians.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "circtrunc/distributions.hpp"
#include "circtrunc/equivariant.hpp"
#include "circtrunc/errors.hpp"
#include "circtrunc/estimators.hpp"
#include "circtrunc/geometry.hpp"
#include "circtrunc/io.hpp"
#include "circtrunc/projection.hpp"
#include "circtrunc/risk.hpp"

namespace py = pybind11;
using namespace circtrunc;

namespace {

std::vector<Angle> to_angles(const std::vector<double>& xs) {
  std::vector<Angle> out;
  out.reserve(xs.size());
  for (double x : xs) out.emplace_back(x);
  return out;
}

std::vector<double> to_floats(const std::vector<Angle>& xs) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (Angle a : xs) out.push_back(a.radians());
  return out;
}

CircularDistribution from_json(const std::string& text) { return parse_distribution(nlohmann::json::parse(text)); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Location estimation for circular data with a restricted parameter space";

  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const nlohmann::json::exception& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def("reduce_angle", &reduce_angle, py::arg("x"));
  m.def("project", [](double phi, double lo, double hi) { return project(Angle(phi), Arc::I(lo, hi)).radians(); },
        py::arg("phi"), py::arg("lo"), py::arg("hi"),
        "Nearest point of the closed arc running ccw from lo to hi.");

  py::class_<CircularDistribution>(m, "Distribution")
      .def(py::init(&from_json), py::arg("json"),
           "Builds a distribution from {\"family\": ..., \"params\": {...}}.")
      .def_property_readonly("name", &CircularDistribution::name)
      .def_property_readonly("location", [](const CircularDistribution& d) { return d.location().radians(); })
      .def("density", [](const CircularDistribution& d, double x) { return d.density(Angle(x)); }, py::arg("theta"))
      .def("zeta", &CircularDistribution::zeta, py::arg("t"))
      .def("sample", [](const CircularDistribution& d, std::size_t n, std::uint64_t seed) {
             return to_floats(d.sample(n, seed));
           }, py::arg("n"), py::arg("seed"))
      .def("with_location", [](const CircularDistribution& d, double nu) { return d.with_location(Angle(nu)); },
           py::arg("nu"))
      .def("to_json", [](const CircularDistribution& d) { return distribution_to_json(d).dump(); });

  m.def("mean_direction", [](const std::vector<double>& s) { return mean_direction(to_angles(s)).radians(); },
        py::arg("sample"));
  m.def("circular_median", [](const std::vector<double>& s) { return circular_median(to_angles(s)).value.radians(); },
        py::arg("sample"));
  m.def("l1_estimator", [](const std::vector<double>& s) { return l1_estimator(to_angles(s)).value.radians(); },
        py::arg("sample"));
  m.def("spatial_median",
        [](const std::vector<double>& s) { return normalized_spatial_median(to_angles(s)).value.radians(); },
        py::arg("sample"));
  m.def("wilcoxon", [](const std::vector<double>& s) { return circular_wilcoxon(to_angles(s)).value.radians(); },
        py::arg("sample"));
  m.def("admissible_equivariant",
        [](const CircularDistribution& d, const std::vector<double>& s) {
          return admissible_equivariant(d, to_angles(s)).radians();
        },
        py::arg("dist"), py::arg("sample"));

  m.def("improve_by_projection",
        [](double delta, double lo, double hi, std::optional<CircularDistribution> dist, bool force) {
          const auto p = RestrictedProblem::make(Arc::I(lo, hi), std::move(dist));
          return improve_by_projection(Angle(delta), p, force).value.radians();
        },
        py::arg("delta"), py::arg("lo"), py::arg("hi"), py::arg("dist") = py::none(), py::arg("force") = false);
  m.def("restricted_mle_cn", [](double theta_bar, double b) { return restricted_mle_cn(Angle(theta_bar), b).radians(); },
        py::arg("theta_bar"), py::arg("b"));
  m.def("reduced_space_cn",
        [](double theta_bar, double r, double kappa, double b) {
          const auto rs = reduced_space_cn(Angle(theta_bar), r, kappa, b);
          return py::dict(py::arg("start") = rs.arc.start().radians(), py::arg("length") = rs.arc.length(),
                          py::arg("b_star") = rs.b_star.radians(), py::arg("sign") = rs.monotone_sign);
        },
        py::arg("theta_bar"), py::arg("r"), py::arg("kappa"), py::arg("b"));
  m.def("improve_equivariant",
        [](double delta, double theta_bar, double r, double kappa, double b) {
          const auto rs = reduced_space_cn(Angle(theta_bar), r, kappa, b);
          return improve_equivariant(Angle(delta), rs, b).radians();
        },
        py::arg("delta"), py::arg("theta_bar"), py::arg("r"), py::arg("kappa"), py::arg("b"),
        "Equivariant improvement under the circular normal reduced space.");

  m.def("risk_curve",
        [](const std::string& config, unsigned threads) {
          const auto cfg = parse_experiment(nlohmann::json::parse(config));
          std::vector<RiskCurve> curves;
          {
            py::gil_scoped_release release;
            curves = run_experiment(cfg, threads);
          }
          py::list out;
          for (const auto& c : curves) {
            for (const auto& p : c.points) {
              out.append(py::dict(py::arg("estimator") = c.estimator, py::arg("nu") = p.nu,
                                  py::arg("risk") = p.risk, py::arg("mc_se") = p.mc_se,
                                  py::arg("replicates") = p.replicates, py::arg("redraws") = p.redraws));
            }
          }
          return out;
        },
        py::arg("config"), py::arg("threads") = 0,
        "Monte Carlo risk curves for an experiment given as JSON text.");
}
