#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "specpol/analysis.hpp"
#include "specpol/cli.hpp"
#include "specpol/config.hpp"

namespace py = pybind11;
using namespace specpol;

namespace {

SpectrumOptions options_for(const ExperimentConfig& cfg, const std::string& precision) {
  SpectrumOptions o = cfg.spectrum;
  if (!precision.empty()) o.precision = precision_from_string(precision);
  return o;
}

py::dict row_dict(const ConvergenceRow& r) {
  py::dict d;
  d["lambda"] = r.lambda;
  d["n"] = r.n;
  d["lo"] = r.lo;
  d["hi"] = r.hi;
  d["re_minus_lambda"] = r.re_minus_lambda;
  d["z"] = r.z;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Second-order spectra of multiplication operators with rank-one perturbations";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);

  py::class_<ExperimentConfig>(m, "Config")
      .def_static("from_json", &parse_config, py::arg("text"))
      .def_static("load", &load_config, py::arg("path"))
      .def_property_readonly("label", [](const ExperimentConfig& c) { return c.model.label; })
      .def_property_readonly("n_list", [](const ExperimentConfig& c) { return c.n_list; })
      .def_property_readonly("cutoff_scale", [](const ExperimentConfig& c) { return c.model.cutoff_scale; })
      .def("cutoff", [](const ExperimentConfig& c, std::int64_t n) { return c.model.cutoff(n); }, py::arg("n"))
      .def("discrete_eigenvalues", [](const ExperimentConfig& c) { return c.model.discrete_eigenvalues(); })
      .def("spectrum", [](const ExperimentConfig& c) { return c.model.spectrum(); })
      .def("target_eigenvalues", &ExperimentConfig::target_eigenvalues);

  m.def(
      "second_order_spectrum",
      [](const ExperimentConfig& c, std::int64_t n, const std::string& precision) {
        py::gil_scoped_release unlocked;
        return second_order_spectrum(c.model.assemble(n), options_for(c, precision)).points;
      },
      py::arg("config"), py::arg("n"), py::arg("precision") = "",
      "All 2d roots of det(z^2 I - 2 z A + B), sorted by (Re, Im).");

  m.def(
      "enclosures",
      [](const ExperimentConfig& c, std::int64_t n, std::optional<double> max_half_width) {
        std::vector<std::pair<double, double>> out;
        py::gil_scoped_release unlocked;
        for (const auto& e : enclosures(second_order_spectrum(c.model.assemble(n), c.spectrum), max_half_width))
          out.emplace_back(e.lo, e.hi);
        return out;
      },
      py::arg("config"), py::arg("n"), py::arg("max_half_width") = std::nullopt);

  m.def(
      "sigma",
      [](const ExperimentConfig& c, std::int64_t n, Point z) { return sigma(c.model.assemble(n), z); },
      py::arg("config"), py::arg("n"), py::arg("z"), "Smallest singular value of Q(z).");

  m.def(
      "galerkin_spectrum", [](const ExperimentConfig& c, std::int64_t n) { return galerkin_spectrum(c.model.assemble(n)); },
      py::arg("config"), py::arg("n"));

  m.def(
      "convergence_table",
      [](const ExperimentConfig& c, double lambda, const std::vector<std::int64_t>& n_list) {
        const auto rows = [&] {
          py::gil_scoped_release unlocked;
          return convergence_table(c.model, lambda, n_list, c.spectrum);
        }();
        py::list out;
        for (const auto& r : rows) out.append(row_dict(r));
        return out;
      },
      py::arg("config"), py::arg("lambda_"), py::arg("n_list"));

  m.def(
      "szego_stats",
      [](const ExperimentConfig& c, std::int64_t n, double epsilon) {
        if (c.model.perturbation) throw InvalidArgument("clustering statistics need an unperturbed symbol");
        const auto s = szego_stats(c.model.symbol, c.model.cutoff(n), epsilon, c.spectrum);
        py::dict d;
        d["frac_near_minus1"] = s.frac_near_minus1;
        d["frac_near_plus1"] = s.frac_near_plus1;
        d["expected_minus"] = s.expected_minus;
        d["expected_plus"] = s.expected_plus;
        d["mean"] = s.mean;
        d["symbol_mean"] = s.symbol_mean;
        return d;
      },
      py::arg("config"), py::arg("n"), py::arg("epsilon") = 0.1);

  m.def(
      "run",
      [](const std::string& subcommand, const std::string& config_path, std::optional<std::string> format,
         std::optional<std::int64_t> n) {
        RunOptions o;
        o.config_path = config_path;
        if (format) o.format = format_from_string(*format);
        o.n = n;
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release unlocked;
          code = specpol::run(subcommand, o, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("subcommand"), py::arg("config"), py::arg("format") = std::nullopt, py::arg("n") = std::nullopt,
      "Run a CLI subcommand in-process; returns (exit_code, stdout, stderr).");

  m.attr("subcommands") = subcommands();
  m.attr("EXIT_OK") = kExitOk;
  m.attr("EXIT_CONFIG") = kExitConfig;
  m.attr("EXIT_NUMERICAL") = kExitNumerical;
}
