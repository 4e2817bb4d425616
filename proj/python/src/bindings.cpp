#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>
#include <string>
#include <vector>

#include "twinbeam/config.hpp"
#include "twinbeam/errors.hpp"
#include "twinbeam/experiments.hpp"
#include "twinbeam/run.hpp"

namespace py = pybind11;
using namespace twinbeam;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

std::vector<double> to_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 1) throw PreconditionError("expected a one-dimensional array");
  return {a.data(), a.data() + a.size()};
}

// Angle-tuned pumps appear as their angle in rad, tuned pumps as None.
std::optional<double> pump_angle(const CrystalSpec& s) {
  if (const auto* a = std::get_if<AngleTunedPump>(&s.pump_mode)) return a->theta;
  return std::nullopt;
}

void set_pump_angle(CrystalSpec& s, std::optional<double> theta) {
  if (theta) {
    s.pump_mode = AngleTunedPump{*theta};
  } else {
    s.pump_mode = TunedPump{};
  }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Twin-beam PDC -> SFG temporal correlation simulator";

  // None of these derive from one another, so registration order is irrelevant.
  py::register_exception<FitError>(m, "FitError", PyExc_RuntimeError);
  py::register_exception<AnalysisError>(m, "AnalysisError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<OutputError>(m, "OutputError", PyExc_OSError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<RangeError>(m, "RangeError", PyExc_ValueError);
  py::register_exception<EvanescentModeError>(m, "EvanescentModeError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

  py::enum_<Scenario>(m, "Scenario")
      .value("fig2", Scenario::fig2)
      .value("fig3", Scenario::fig3)
      .value("fig4", Scenario::fig4)
      .value("sweep", Scenario::sweep);
  py::enum_<SincArgument>(m, "SincArgument")
      .value("half", SincArgument::half)
      .value("full", SincArgument::full);
  py::enum_<DefocusModel>(m, "DefocusModel")
      .value("literal", DefocusModel::literal)
      .value("chirp", DefocusModel::chirp);
  py::enum_<Reduction>(m, "Reduction")
      .value("radial", Reduction::radial)
      .value("cartesian", Reduction::cartesian);

  py::class_<SpectralWindow>(m, "SpectralWindow")
      .def(py::init<double, double>(), py::arg("full_width"), py::arg("edge_width") = 0.0)
      .def_readwrite("full_width", &SpectralWindow::full_width)
      .def_readwrite("edge_width", &SpectralWindow::edge_width)
      .def("value", &SpectralWindow::value)
      .def("__repr__", [](const SpectralWindow& w) {
        std::ostringstream s;
        s << "SpectralWindow(full_width=" << w.full_width << ", edge_width=" << w.edge_width << ")";
        return s.str();
      });

  py::class_<Grid>(m, "Grid")
      .def(py::init<>())
      .def_readwrite("q_max", &Grid::q_max)
      .def_readwrite("n_q", &Grid::n_q)
      .def_readwrite("omega_max", &Grid::omega_max)
      .def_readwrite("n_omega", &Grid::n_omega)
      .def_readwrite("reduction", &Grid::reduction)
      .def("refined", &Grid::refined);

  py::class_<CrystalSpec>(m, "CrystalSpec")
      .def(py::init<>())
      .def_readwrite("length", &CrystalSpec::length)
      .def_readwrite("gain", &CrystalSpec::gain)
      .def_readwrite("mismatch_offset", &CrystalSpec::mismatch_offset)
      .def_property("pump_angle", &pump_angle, &set_pump_angle,
                    "None for a tuned pump, otherwise the pump angle in rad");

  py::class_<TransferSpec>(m, "TransferSpec")
      .def(py::init<>())
      .def_readwrite("delay", &TransferSpec::delay)
      .def_readwrite("defocus", &TransferSpec::defocus)
      .def_readwrite("window", &TransferSpec::window)
      .def_readwrite("pinhole_half_angle", &TransferSpec::pinhole_half_angle)
      .def_readwrite("gap_q_min", &TransferSpec::gap_q_min)
      .def_readwrite("amplitude_transmission", &TransferSpec::amplitude_transmission)
      .def_readwrite("defocus_model", &TransferSpec::defocus_model);

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def(py::init<>())
      .def_readwrite("pump_wavelength", &ScenarioConfig::pump_wavelength)
      .def_readwrite("gvd_override", &ScenarioConfig::gvd_override)
      .def_readwrite("pdc", &ScenarioConfig::pdc)
      .def_readwrite("sfg", &ScenarioConfig::sfg)
      .def_readwrite("sfg_sinc", &ScenarioConfig::sfg_sinc)
      .def_readwrite("window", &ScenarioConfig::window)
      .def_readwrite("use_window", &ScenarioConfig::use_window)
      .def_readwrite("pinhole_diameter", &ScenarioConfig::pinhole_diameter)
      .def_readwrite("pinhole_distance", &ScenarioConfig::pinhole_distance)
      .def_readwrite("pinhole_half_angle", &ScenarioConfig::pinhole_half_angle)
      .def_readwrite("sweep_uses_pinhole", &ScenarioConfig::sweep_uses_pinhole)
      .def_readwrite("defocus", &ScenarioConfig::defocus)
      .def_readwrite("defocus_model", &ScenarioConfig::defocus_model)
      .def_readwrite("defocus_list", &ScenarioConfig::defocus_list)
      .def_readwrite("gap_q_min", &ScenarioConfig::gap_q_min)
      .def_readwrite("amplitude_transmission", &ScenarioConfig::amplitude_transmission)
      .def_readwrite("delay_start", &ScenarioConfig::delay_start)
      .def_readwrite("delay_stop", &ScenarioConfig::delay_stop)
      .def_readwrite("delay_step", &ScenarioConfig::delay_step)
      .def_readwrite("baseline", &ScenarioConfig::baseline)
      .def_readwrite("grid", &ScenarioConfig::grid)
      .def_readwrite("workers", &ScenarioConfig::workers)
      .def("delays", [](const ScenarioConfig& c) { return to_array(c.delays()); })
      .def("pinhole_angle", &ScenarioConfig::pinhole_angle)
      .def("base_transfer", &ScenarioConfig::base_transfer)
      .def("effective_bandwidth",
           [](const ScenarioConfig& c, const TransferSpec& s) {
             return effective_bandwidth(s, *c.medium());
           })
      .def("gvd", [](const ScenarioConfig& c) { return c.medium()->gvd_signal(); })
      .def("phase_mismatch",
           [](const ScenarioConfig& c, double q, double omega) {
             return Crystal(c.medium(), c.pdc).delta({q, omega});
           },
           py::arg("q"), py::arg("omega"), "Delta(q, Omega) of the PDC crystal")
      .def("fft_backend_check",
           [](const ScenarioConfig& c) {
             FftCheckReport r;
             {
               py::gil_scoped_release nogil;
               r = c.correlator().fft_backend_check();
             }
             return py::make_tuple(r.max_rel_deviation, r.box_fft_vs_analytic,
                                   r.box_direct_vs_analytic, r.passed());
           },
           "(fft vs direct, box fft vs sinc, box direct vs sinc, passed)")
      .def("sweep",
           [](const ScenarioConfig& c, const TransferSpec& s) {
             CorrelationProfile p;
             {
               py::gil_scoped_release nogil;
               p = c.correlator().delay_sweep(c.delays(), s, c.baseline);
             }
             return py::make_tuple(to_array(p.delays), to_array(p.intensity));
           },
           "(delays, intensity) for one transfer spec");

  py::class_<Sinc2Fit>(m, "Sinc2Fit")
      .def_readonly("amplitude", &Sinc2Fit::amplitude)
      .def_readonly("width", &Sinc2Fit::width)
      .def_readonly("center", &Sinc2Fit::center)
      .def_readonly("baseline", &Sinc2Fit::baseline)
      .def_readonly("residual_norm", &Sinc2Fit::residual_norm)
      .def_readonly("iterations", &Sinc2Fit::iterations)
      .def("__call__", &Sinc2Fit::operator());

  py::class_<ScenarioResult>(m, "ScenarioResult")
      .def_readonly("name", &ScenarioResult::name)
      .def_property_readonly("delays",
                             [](const ScenarioResult& r) { return to_array(r.profile.delays); })
      .def_property_readonly("intensity",
                             [](const ScenarioResult& r) { return to_array(r.profile.intensity); })
      .def_property_readonly(
          "normalized", [](const ScenarioResult& r) { return to_array(r.profile.normalized()); })
      .def_readonly("fwhm", &ScenarioResult::fwhm)
      .def_readonly("fit", &ScenarioResult::fit)
      .def_readonly("peak_intensity", &ScenarioResult::peak_intensity)
      .def_readonly("effective_bandwidth", &ScenarioResult::effective_bandwidth)
      .def_readonly("defocus", &ScenarioResult::defocus);

  m.def("fig2", &scenario_fig2, py::arg("config") = ScenarioConfig{},
        py::call_guard<py::gil_scoped_release>());
  m.def("fig3", &scenario_fig3, py::arg("config") = ScenarioConfig{},
        py::call_guard<py::gil_scoped_release>());
  m.def("fig4", &scenario_fig4, py::arg("config") = ScenarioConfig{},
        py::call_guard<py::gil_scoped_release>());
  m.def("sweep", &scenario_sweep, py::arg("config") = ScenarioConfig{},
        py::call_guard<py::gil_scoped_release>());

  m.def("sinc", &sinc);
  m.def("delay_range",
        [](double start, double stop, double step) { return to_array(delay_range(start, stop, step)); });
  m.def("pinhole_from_geometry", &pinhole_from_geometry, py::arg("diameter"),
        py::arg("distance"));
  m.def(
      "extract_fwhm",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& t,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& y, double baseline) {
        return extract_fwhm(to_vector(t), to_vector(y), baseline);
      },
      py::arg("delays"), py::arg("intensity"), py::arg("baseline") = 0.0);
  m.def(
      "fit_sinc2",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& t,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& y,
         std::optional<double> fixed_baseline, int max_iterations) {
        FitOptions o;
        o.fixed_baseline = fixed_baseline;
        o.max_iterations = max_iterations;
        return fit_sinc2(to_vector(t), to_vector(y), o);
      },
      py::arg("delays"), py::arg("intensity"), py::arg("fixed_baseline") = py::none(),
      py::arg("max_iterations") = 200);

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("scenario", &RunConfig::scenario)
      .def_readwrite("output_dir", &RunConfig::output_dir)
      .def_readwrite("physics", &RunConfig::physics)
      .def("__eq__", [](const RunConfig& a, const RunConfig& b) { return a == b; });
  m.def("parse_config", &parse_config, py::arg("text"));
  m.def("load_config", &load_config, py::arg("path"));
  m.def("echo_config", &echo_config, py::arg("config"));
  m.def(
      "run",
      [](const RunConfig& c) {
        std::ostringstream log;
        RunSummary s;
        {
          py::gil_scoped_release nogil;
          s = run(c, log);
        }
        return s.files;
      },
      py::arg("config"), "Run and write outputs; returns the written paths");

  m.attr("__version__") = "0.1.0";
}
