#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>
#include <numbers>
#include <sstream>

#include "tonks/commands.hpp"
#include "tonks/config.hpp"
#include "tonks/density.hpp"
#include "tonks/errors.hpp"
#include "tonks/inference.hpp"
#include "tonks/optics.hpp"
#include "tonks/oscillator.hpp"

namespace py = pybind11;
using namespace tonks;

namespace {

template <class T>
py::array_t<T> to_array(std::span<const T> v) {
  py::array_t<T> out({static_cast<py::ssize_t>(v.size())}, {static_cast<py::ssize_t>(sizeof(T))});
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

template <class T>
py::array_t<T> to_array(const std::vector<T>& v) {
  return to_array(std::span<const T>(v));
}

/// (x / ell, rho * ell) pair for a density profile.
py::tuple density_arrays(const DensityProfile& p) {
  return py::make_tuple(to_array(p.grid.points()), to_array(p.values));
}

DimensionlessGrid grid_for(const TrapConfig& trap, double margin, double points_per_unit) {
  return default_density_grid(trap.atom_count, margin, points_per_unit);
}

}  // namespace

PYBIND11_MODULE(_tonks, m) {
  m.doc() = "Tonks-Girardeau gas densities, probe transmission and spectral inversion";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<InversionError>(m, "InversionError", PyExc_ValueError);

  py::enum_<Engine>(m, "Engine")
      .value("helmholtz", Engine::helmholtz)
      .value("wkb2", Engine::wkb2)
      .value("analytic", Engine::analytic);
  py::enum_<IndexMode>(m, "IndexMode")
      .value("exact_sqrt", IndexMode::exact_sqrt)
      .value("second_order", IndexMode::second_order);

  py::class_<TrapConfig>(m, "TrapConfig")
      .def(py::init<>())
      .def_readwrite("atom_count", &TrapConfig::atom_count)
      .def_readwrite("trap_angular_frequency", &TrapConfig::trap_angular_frequency)
      .def_readwrite("atom_mass", &TrapConfig::atom_mass)
      .def("oscillator_length", &TrapConfig::oscillator_length)
      .def("radius", &TrapConfig::radius);

  py::class_<SuperpositionState>(m, "SuperpositionState")
      .def(py::init<>())
      .def_static("from_population", &SuperpositionState::from_population, py::arg("ground_population"),
                  py::arg("relative_phase") = 0.0)
      .def_readwrite("mag_c0", &SuperpositionState::mag_c0)
      .def_readwrite("mag_c1", &SuperpositionState::mag_c1)
      .def_readwrite("relative_phase", &SuperpositionState::relative_phase);

  py::class_<OpticalConfig>(m, "OpticalConfig")
      .def(py::init<>())
      .def_readwrite("vacuum_wavelength", &OpticalConfig::vacuum_wavelength)
      .def_readwrite("detuning", &OpticalConfig::detuning)
      .def_readwrite("linewidth", &OpticalConfig::linewidth)
      .def_readwrite("dipole_moment", &OpticalConfig::dipole_moment)
      .def_readwrite("areal_density", &OpticalConfig::areal_density)
      .def("beta", &OpticalConfig::beta);

  py::class_<NumericsConfig>(m, "NumericsConfig")
      .def(py::init<>())
      .def_readwrite("samples_per_period", &NumericsConfig::samples_per_period)
      .def_readwrite("periods", &NumericsConfig::periods)
      .def_readwrite("engine", &NumericsConfig::engine)
      .def_readwrite("index_mode", &NumericsConfig::index_mode)
      .def_readwrite("harmonics", &NumericsConfig::harmonics)
      .def_readwrite("search_max_atoms", &NumericsConfig::search_max_atoms)
      .def_readwrite("workers", &NumericsConfig::workers);

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init(&RunConfig::defaults))
      .def_static("from_text",
                  [](const std::string& text) {
                    std::istringstream in(text);
                    return parse_run_config(in);
                  })
      .def_static("load", &load_run_config)
      .def_readwrite("trap", &RunConfig::trap)
      .def_readwrite("state", &RunConfig::state)
      .def_readwrite("optics", &RunConfig::optics)
      .def_readwrite("numerics", &RunConfig::numerics)
      .def_readwrite("output_directory", &RunConfig::output_directory)
      .def("validate", &RunConfig::validate)
      .def("__str__", &format_run_config);

  m.def("eigenfunction", &eigenfunction_value, py::arg("n"), py::arg("x"));
  m.def("eigenfunction_derivative", &eigenfunction_derivative, py::arg("n"), py::arg("x"));
  m.def("eigenfunction_table",
        [](int max_index, py::array_t<double, py::array::c_style | py::array::forcecast> x) {
          const auto grid = DimensionlessGrid::from_points(std::vector<double>(x.data(), x.data() + x.size()));
          const auto table = build_eigenfunction_table(max_index, grid);
          py::array_t<double> out({static_cast<py::ssize_t>(max_index + 1), static_cast<py::ssize_t>(grid.size())});
          auto w = out.mutable_unchecked<2>();
          for (int n = 0; n <= max_index; ++n) {
            const auto row = table.values(n);
            for (std::size_t j = 0; j < row.size(); ++j) w(n, static_cast<py::ssize_t>(j)) = row[j];
          }
          return out;
        },
        py::arg("max_index"), py::arg("x"), "Rows psi_0..psi_max on a symmetric uniform grid.");

  m.def("ground_density",
        [](const TrapConfig& t, double margin, double ppu) { return density_arrays(ground_density(t, grid_for(t, margin, ppu))); },
        py::arg("trap"), py::arg("margin") = 6.0, py::arg("points_per_unit") = 16.0);
  m.def("average_density",
        [](const TrapConfig& t, double margin, double ppu) { return density_arrays(average_density(t, grid_for(t, margin, ppu))); },
        py::arg("trap"), py::arg("margin") = 6.0, py::arg("points_per_unit") = 16.0);
  m.def("instantaneous_density",
        [](const TrapConfig& t, const SuperpositionState& s, double time, double margin, double ppu) {
          return density_arrays(instantaneous_density(t, s, grid_for(t, margin, ppu), time));
        },
        py::arg("trap"), py::arg("state"), py::arg("t"), py::arg("margin") = 6.0, py::arg("points_per_unit") = 16.0);

  m.def("analytic_transmission",
        [](const TrapConfig& t, const SuperpositionState& s, const OpticalConfig& o) {
          const auto a = analytic_transmission_params(t, s, o);
          return py::make_tuple(a.t_n, a.zeta);
        },
        py::arg("trap"), py::arg("state"), py::arg("optics"), "(T_N, zeta) of the closed-form signal.");
  m.def("zeta_per_unit_mixing", &zeta_per_unit_mixing, py::arg("trap"), py::arg("optics"));

  m.def("transmission_timeseries",
        [](const RunConfig& c) {
          c.validate();
          TransmissionRecord r;
          {
            py::gil_scoped_release release;
            r = transmission_timeseries(c.trap, c.state, c.optics, c.timeseries_options());
          }
          return py::make_tuple(to_array(r.times), to_array(r.values));
        },
        py::arg("config"));

  m.def("harmonics",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> values, double omega, int periods,
           int s_max) {
          TransmissionRecord r;
          r.trap_angular_frequency = omega;
          const auto m_total = values.size();
          const double step = 2.0 * std::numbers::pi * periods / omega / static_cast<double>(m_total);
          for (py::ssize_t j = 0; j < m_total; ++j) {
            r.times.push_back(step * static_cast<double>(j));
            r.values.push_back(values.data()[j]);
          }
          return to_array(dft_harmonics(r, s_max).harmonics);
        },
        py::arg("values"), py::arg("omega"), py::arg("periods") = 1, py::arg("s_max") = 4,
        "Coefficients at 2 s omega, s = 0..s_max, of uniformly sampled T(t) starting at t = 0.");

  m.def("bessel_i", &bessel_i, py::arg("order"), py::arg("z"));

  m.def("infer",
        [](const RunConfig& c, const std::string& target) {
          auto copy = c;
          copy.output_directory = std::filesystem::temp_directory_path() / "tonks_python";
          std::ostringstream log;
          const auto r = cmd_infer(copy, parse_infer_target(target), std::nullopt, log);
          py::dict d;
          d["zeta"] = r.result.zeta_estimate;
          d["alpha"] = r.result.alpha_estimate;
          if (r.result.coefficient_product) d["coefficient_product"] = *r.result.coefficient_product;
          if (r.result.atoms) {
            d["best_atom_count"] = r.result.atoms->best;
            d["runner_up_atom_count"] = r.result.atoms->runner_up;
          }
          return d;
        },
        py::arg("config"), py::arg("target") = "atoms",
        "Forward-simulate `config` and invert the signal; returns a dict.");
}
