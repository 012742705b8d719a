#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rateless/capacity.hpp"
#include "rateless/closed_form.hpp"
#include "rateless/optimizer.hpp"
#include "rateless/power_alloc.hpp"
#include "rateless/simulator.hpp"

namespace py = pybind11;
using namespace rateless;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Layered rateless code design and validation core";

  py::register_exception<RateTooHighError>(m, "RateTooHighError");
  py::register_exception<DimensionError>(m, "DimensionError");

  py::class_<CodeSpec>(m, "CodeSpec")
      .def(py::init([](double rate, int layers, int blocks, double power,
                       double noise_var) {
             CodeSpec s{rate, layers, blocks, power, noise_var};
             s.validate();
             return s;
           }),
           py::arg("ceiling_rate"), py::arg("layers"), py::arg("blocks"),
           py::arg("power"), py::arg("noise_var") = 1.0)
      .def_readonly("ceiling_rate", &CodeSpec::ceiling_rate)
      .def_readonly("layers", &CodeSpec::layers)
      .def_readonly("blocks", &CodeSpec::blocks)
      .def_readonly("power", &CodeSpec::power)
      .def_readonly("noise_var", &CodeSpec::noise_var)
      .def("per_layer_rate", &CodeSpec::per_layer_rate);

  py::class_<GainMatrix>(m, "GainMatrix")
      .def(py::init<Eigen::MatrixXcd, double>(), py::arg("entries"),
           py::arg("power"))
      .def_property_readonly("entries",
                             [](const GainMatrix& g) { return g.entries(); })
      .def_property_readonly("power", &GainMatrix::power)
      .def("canonicalize_gauge", &GainMatrix::canonicalize_gauge)
      .def("row_power_residual", &GainMatrix::row_power_residual)
      .def("unitarity_residual", &GainMatrix::unitarity_residual);

  py::class_<ShortfallReport>(m, "ShortfallReport")
      .def_readonly("percent", &ShortfallReport::percent)
      .def_readonly("max_percent", &ShortfallReport::max_percent)
      .def_readonly("unitarity_residual", &ShortfallReport::unitarity_residual);

  py::class_<PowerAllocation>(m, "PowerAllocation")
      .def_readonly("powers", &PowerAllocation::powers)
      .def_readonly("per_layer_rate", &PowerAllocation::per_layer_rate)
      .def_property_readonly("threshold_gains_sq",
                             [](const PowerAllocation& a) {
                               return a.thresholds.gains_sq;
                             });

  py::class_<OptimizeResult>(m, "OptimizeResult")
      .def_readonly("gain", &OptimizeResult::gain)
      .def_readonly("report", &OptimizeResult::report)
      .def_readonly("objective", &OptimizeResult::objective)
      .def_readonly("converged", &OptimizeResult::converged)
      .def_readonly("non_convergence", &OptimizeResult::non_convergence);

  py::class_<SimReport>(m, "SimReport")
      .def_readonly("empirical_sinr", &SimReport::empirical_sinr)
      .def_readonly("analytic_sinr", &SimReport::analytic_sinr)
      .def_readonly("standard_error", &SimReport::standard_error)
      .def_readonly("max_offdiag_corr", &SimReport::max_offdiag_corr);

  m.def("design_2x2", &design_2x2, py::arg("rate"), py::arg("power"));
  m.def("design_3x3", &design_3x3, py::arg("rate"), py::arg("power"));
  m.def("max_rate_3x3", &max_rate_3x3);
  m.def("validate_perfect", &validate_perfect, py::arg("gain"),
        py::arg("spec"));

  m.def("ideal_threshold_gain_sq", &ideal_threshold_gain_sq, py::arg("m"),
        py::arg("spec"));
  m.def("layered_threshold_gain_sq", &layered_threshold_gain_sq, py::arg("m"),
        py::arg("spec"));
  m.def("layering_loss_db", &layering_loss_db, py::arg("m"), py::arg("layers"),
        py::arg("rate"));
  m.def("asymptotic_layering_loss", &asymptotic_layering_loss, py::arg("rate"),
        py::arg("layers"));
  m.def("accumulated_layer_mi", &accumulated_layer_mi, py::arg("gain"),
        py::arg("m"), py::arg("l"), py::arg("gain_sq"), py::arg("noise_var"));

  m.def(
      "allocate_powers",
      [](const CodeSpec& spec) { return allocate_powers(spec); },
      py::arg("spec"));
  m.def("verify_allocation", &verify_allocation, py::arg("allocation"));
  m.def("efficiency_lower_bound", &efficiency_lower_bound,
        py::arg("base_rate"));
  m.def("conservative_rate", &conservative_rate, py::arg("rate"),
        py::arg("layers"));

  m.def(
      "optimize_gain_matrix",
      [](const CodeSpec& spec, int restarts, int max_iterations,
         std::uint64_t seed) {
        OptimizerConfig cfg;
        cfg.restarts = restarts;
        cfg.max_iterations = max_iterations;
        cfg.seed = seed;
        return optimize_gain_matrix(spec, cfg);
      },
      py::arg("spec"), py::arg("restarts") = 8, py::arg("max_iterations") = 400,
      py::arg("seed") = 20240915);

  m.def(
      "simulate",
      [](const CodeSpec& spec, int m_blocks, int num_symbols,
         std::uint64_t seed, const std::string& dither) {
        SimConfig cfg;
        cfg.allocation = allocate_powers(spec);
        cfg.num_symbols = num_symbols;
        cfg.seed = seed;
        cfg.max_blocks = m_blocks;
        cfg.gain_sq = cfg.allocation.thresholds.gains_sq.at(m_blocks - 1);
        if (dither == "pm1") {
          cfg.dither = DitherAlphabet::BinaryPm1;
        } else if (dither == "phase") {
          cfg.dither = DitherAlphabet::UnitPhase;
        } else if (dither == "off") {
          cfg.dither = DitherAlphabet::Off;
        } else {
          throw py::value_error("dither must be pm1, phase or off");
        }
        return simulate_dithered_repetition(cfg);
      },
      py::arg("spec"), py::arg("m"), py::arg("num_symbols") = 100000,
      py::arg("seed") = 1, py::arg("dither") = "pm1");
}
