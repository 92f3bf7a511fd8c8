#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zrplab/configuration.hpp"
#include "zrplab/coupling.hpp"
#include "zrplab/envelope.hpp"
#include "zrplab/experiments.hpp"
#include "zrplab/field.hpp"
#include "zrplab/height.hpp"
#include "zrplab/measure.hpp"
#include "zrplab/simulator.hpp"
#include "zrplab/spde.hpp"
#include "zrplab/walk.hpp"

namespace py = pybind11;
using namespace zrplab;

namespace {

RateFunction rate_from_spec(const std::string& spec) {
  ExperimentConfig cfg;
  cfg.set("model.rate", spec);
  return cfg.rate_function();
}

}  // namespace

PYBIND11_MODULE(_zrplab, m) {
  m.doc() = "Weakly asymmetric zero-range process laboratory (C++ core)";

  py::register_exception<Error>(m, "ZrplabError");

  py::class_<RateFunction>(m, "RateFunction")
      .def_static("constant_rate", &RateFunction::constant_rate)
      .def_static("linear", &RateFunction::linear)
      .def_static("capped", &RateFunction::capped, py::arg("cap"))
      .def_static("tabulated", &RateFunction::tabulated, py::arg("table"),
                  py::arg("lipschitz_bound") = -1.0)
      .def_static("from_spec", &rate_from_spec, py::arg("spec"))
      .def("__call__", &RateFunction::operator(), py::arg("k"))
      .def_property_readonly("lipschitz_bound", &RateFunction::lipschitz_bound)
      .def("describe", &RateFunction::describe);

  m.def("validate_rate_function", &validate_rate_function, py::arg("rate"));

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](int N, double gamma, double beta, double rho, const RateFunction& rate) {
             ModelParams p{N, gamma, beta, rho, rate};
             p.validate();
             return p;
           }),
           py::arg("N"), py::arg("gamma"), py::arg("beta"), py::arg("rho"), py::arg("rate"))
      .def_readonly("N", &ModelParams::lattice_size)
      .def_readonly("gamma", &ModelParams::gamma)
      .def_readonly("beta", &ModelParams::beta)
      .def_readonly("rho", &ModelParams::density)
      .def_property_readonly("prob_right", &ModelParams::prob_right);

  py::class_<Configuration>(m, "Configuration")
      .def(py::init<std::vector<int>, const RateFunction&>(), py::arg("occupancies"),
           py::arg("rate"))
      .def_property_readonly("occupancies", &Configuration::occupancies)
      .def_property_readonly("total", &Configuration::total)
      .def_property_readonly("rate_sum", &Configuration::rate_sum)
      .def("__len__", &Configuration::size);

  py::class_<ProductMeasure>(m, "ProductMeasure")
      .def_readonly("alpha", &ProductMeasure::alpha)
      .def_readonly("Z", &ProductMeasure::Z)
      .def_readonly("pmf", &ProductMeasure::pmf)
      .def_readonly("K", &ProductMeasure::K)
      .def_readonly("mean_rho", &ProductMeasure::mean_rho)
      .def_readonly("chi", &ProductMeasure::chi)
      .def_readonly("c", &ProductMeasure::c)
      .def_readonly("c_prime", &ProductMeasure::c_prime)
      .def_readonly("c_second", &ProductMeasure::c_second)
      .def_readonly("D", &ProductMeasure::D)
      .def_readonly("tail_mass", &ProductMeasure::tail_mass);

  m.def("build_measure", &build_measure, py::arg("rate"), py::arg("alpha"), py::arg("K") = -1);
  m.def("solve_fugacity", &solve_fugacity, py::arg("rate"), py::arg("rho"),
        py::arg("tol") = 1e-12);
  m.def("moment_condition_check", &moment_condition_check, py::arg("measure"), py::arg("delta"));

  m.def(
      "sample_configuration",
      [](const ProductMeasure& measure, int N, std::uint64_t seed, const RateFunction& rate) {
        RngStream rng(seed);
        return sample_configuration(measure, N, rng, rate);
      },
      py::arg("measure"), py::arg("N"), py::arg("seed"), py::arg("rate"));

  m.def(
      "simulate",
      [](Configuration& config, const ModelParams& params, double T, std::uint64_t seed) {
        RngStream rng(seed);
        const EventStats st = run_until(config, params, T, rng);
        py::dict out;
        out["events"] = st.events;
        out["rights"] = st.rights;
        out["lefts"] = st.lefts;
        out["final_time"] = st.final_time;
        return out;
      },
      py::arg("config"), py::arg("params"), py::arg("T"), py::arg("seed"),
      "Run the kinetic Monte Carlo dynamics to macroscopic time T in place");

  m.def("total_jump_rate", &total_jump_rate, py::arg("config"), py::arg("params"));

  py::class_<HeightField>(m, "HeightField")
      .def(py::init<const Configuration&, double, long long>(), py::arg("config"),
           py::arg("rho"), py::arg("flux0") = 0)
      .def("value", &HeightField::value, py::arg("x"))
      .def("values", &HeightField::values)
      .def_property_readonly("flux0", &HeightField::flux0);

  m.def(
      "fluctuation_field",
      [](const Configuration& config, int cos_mode, double T, const ModelParams& params,
         double c_prime) {
        return fluctuation_field(config, TestFunction::fourier_cos(cos_mode), T, params, c_prime)
            .value;
      },
      py::arg("config"), py::arg("cos_mode"), py::arg("T"), py::arg("params"),
      py::arg("c_prime"));

  m.def(
      "field_by_sbp",
      [](const HeightField& height, int cos_mode, double T, const ModelParams& params,
         double c_prime) {
        return field_by_sbp(height, TestFunction::fourier_cos(cos_mode), T, params, c_prime)
            .value;
      },
      py::arg("height"), py::arg("cos_mode"), py::arg("T"), py::arg("params"),
      py::arg("c_prime"));

  py::class_<WalkPath>(m, "WalkPath")
      .def_readonly("s", &WalkPath::s);
  m.def("walk_from_config", &walk_from_config, py::arg("config"));
  m.def("config_from_walk", &config_from_walk, py::arg("walk"), py::arg("rate"));

  py::class_<TargetProfile>(m, "TargetProfile")
      .def_static("flat", &TargetProfile::flat)
      .def_static("from_table", &TargetProfile::from_table, py::arg("xs"), py::arg("values"))
      .def("__call__", &TargetProfile::operator(), py::arg("x"));

  m.def(
      "envelope_sample",
      [](const TargetProfile& target, double epsilon, double rho, int N, long long max_attempts,
         const ProductMeasure& measure, const RateFunction& rate, std::uint64_t seed) {
        EnvelopeSpec spec{target, epsilon, rho, N, max_attempts};
        RngStream rng(seed);
        EnvelopeResult res = envelope_sample(spec, measure, rate, rng);
        py::dict out;
        out["config"] = res.config;
        out["attempts"] = res.attempts;
        out["accept_rate"] = res.accept_rate;
        return out;
      },
      py::arg("target"), py::arg("epsilon"), py::arg("rho"), py::arg("N"),
      py::arg("max_attempts"), py::arg("measure"), py::arg("rate"), py::arg("seed"));

  m.def(
      "brownian_small_ball",
      [](double epsilon, double D, long long samples, std::uint64_t seed, int grid) {
        RngStream rng(seed);
        return brownian_small_ball(TargetProfile::flat(), epsilon, D, samples, rng, grid);
      },
      py::arg("epsilon"), py::arg("D"), py::arg("samples"), py::arg("seed"),
      py::arg("grid") = 256);
  m.def("small_ball_series", &small_ball_series, py::arg("epsilon"), py::arg("D"));

  m.def(
      "sandwich_run",
      [](const ModelParams& params, double epsilon, double kappa, double T, std::uint64_t seed) {
        RngStream rng(seed);
        const ProductMeasure measure = solve_fugacity(params.rate, params.density);
        Configuration ref = sample_configuration(measure, params.lattice_size, rng, params.rate);
        Configuration other = ref;
        CoupledSystem system({ref, other}, params);
        const SandwichReport rep = check_height_sandwich(system, epsilon, kappa, T, rng);
        py::dict out;
        out["violated"] = rep.violated;
        out["events"] = rep.events;
        out["max_gap"] = rep.max_gap;
        return out;
      },
      py::arg("params"), py::arg("epsilon"), py::arg("kappa"), py::arg("T"), py::arg("seed"),
      "Identical-replica coupled run with the event-level sandwich checker");

  py::class_<SpectralField>(m, "SpectralField")
      .def(py::init<int, double, double, bool>(), py::arg("cutoff"), py::arg("diffusivity"),
           py::arg("noise_amplitude"), py::arg("derivative_noise"))
      .def("step",
           [](SpectralField& f, double dt, std::uint64_t seed) {
             RngStream rng(seed);
             f.step(dt, rng);
           })
      .def("eval", &SpectralField::eval, py::arg("x"))
      .def("mode_re",
           [](const SpectralField& f, int k) { return f.mode(k).real(); })
      .def("mode_im",
           [](const SpectralField& f, int k) { return f.mode(k).imag(); })
      .def("stationary_sd", &SpectralField::stationary_sd, py::arg("k"));
}
