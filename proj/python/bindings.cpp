// Python bindings for the atmospheric CVQKD link simulator: scenario and
// channel parameters, fading/impairment models, key-rate formulas, the Monte
// Carlo engine, config parsing, and result writers.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <vector>

#include "cvatm/channel.hpp"
#include "cvatm/config.hpp"
#include "cvatm/engine.hpp"
#include "cvatm/fading.hpp"
#include "cvatm/impairments.hpp"
#include "cvatm/keyrate.hpp"
#include "cvatm/output.hpp"
#include "cvatm/rng.hpp"
#include "cvatm/specfun.hpp"

namespace py = pybind11;
using namespace cvatm;

namespace {
std::vector<double> lambda_vector(const double (&l)[5]) {
  return std::vector<double>(l, l + 5);
}
}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Atmospheric CVQKD link simulator core";
  m.attr("__version__") = "1.0.0";
  m.attr("HISTOGRAM_BINS") = kHistogramBins;
  m.attr("SAMPLES_PER_BLOCK") = kSamplesPerBlock;

  // ---- enums ----------------------------------------------------------------
  py::enum_<Detector>(m, "Detector")
      .value("homodyne", Detector::homodyne)
      .value("heterodyne", Detector::heterodyne);
  py::enum_<Regime>(m, "Regime")
      .value("weak", Regime::weak)
      .value("strong_or_moderate", Regime::strong_or_moderate);

  // ---- channel ---------------------------------------------------------------
  py::class_<ExtinctionCoeffs>(m, "ExtinctionCoeffs")
      .def(py::init<>())
      .def_readwrite("mol_scatter", &ExtinctionCoeffs::mol_scatter)
      .def_readwrite("mol_absorb", &ExtinctionCoeffs::mol_absorb)
      .def_readwrite("aer_scatter", &ExtinctionCoeffs::aer_scatter)
      .def_readwrite("aer_absorb", &ExtinctionCoeffs::aer_absorb)
      .def("sum", &ExtinctionCoeffs::sum);

  py::class_<LinkScenario>(m, "LinkScenario")
      .def(py::init<>())
      .def_readwrite("wavelength", &LinkScenario::wavelength)
      .def_readwrite("distance", &LinkScenario::distance)
      .def_readwrite("cn2", &LinkScenario::cn2)
      .def_readwrite("beam_waist", &LinkScenario::beam_waist)
      .def_readwrite("aperture_radius", &LinkScenario::aperture_radius)
      .def_readwrite("focal_length", &LinkScenario::focal_length)
      .def_readwrite("fiber_core_diameter", &LinkScenario::fiber_core_diameter)
      .def_readwrite("inner_scale", &LinkScenario::inner_scale)
      .def_readwrite("outer_scale", &LinkScenario::outer_scale)
      .def_readwrite("extinction", &LinkScenario::extinction)
      .def_readwrite("prf", &LinkScenario::prf)
      .def_readwrite("duty_ratio", &LinkScenario::duty_ratio)
      .def_readwrite("lo_correlation", &LinkScenario::lo_correlation)
      .def_readwrite("modulation_variance", &LinkScenario::modulation_variance)
      .def_readwrite("detector", &LinkScenario::detector)
      .def_readwrite("detection_efficiency", &LinkScenario::detection_efficiency)
      .def_readwrite("electronic_noise", &LinkScenario::electronic_noise)
      .def_readwrite("reconciliation_efficiency",
                     &LinkScenario::reconciliation_efficiency)
      .def_readwrite("fixed_excess_noise", &LinkScenario::fixed_excess_noise)
      .def("validate", &LinkScenario::validate);

  py::class_<ChannelParams>(m, "ChannelParams")
      .def_readonly("wavenumber", &ChannelParams::wavenumber)
      .def_readonly("rytov_sq", &ChannelParams::rytov_sq)
      .def_readonly("fresnel", &ChannelParams::fresnel)
      .def_readonly("theta", &ChannelParams::theta)
      .def_readonly("lambda_par", &ChannelParams::lambda_par)
      .def_readonly("theta_bar", &ChannelParams::theta_bar)
      .def_readonly("w_at_receiver", &ChannelParams::w_at_receiver)
      .def_readonly("regime", &ChannelParams::regime);

  m.def("rytov_variance", &rytov_variance, py::arg("scenario"));
  m.def("derive_params", &derive_params, py::arg("scenario"));
  m.def("extinction_transmittance", &extinction_transmittance,
        py::arg("coeffs"), py::arg("distance"));

  // ---- fading ----------------------------------------------------------------
  py::class_<RngStream>(m, "RngStream")
      .def(py::init<uint64_t, uint64_t, uint64_t>(), py::arg("master_seed"),
           py::arg("point_index") = 0, py::arg("block_index") = 0)
      .def("uniform", &RngStream::uniform)
      .def("normal", &RngStream::normal)
      .def("gamma", &RngStream::gamma, py::arg("shape"));

  py::class_<BeamVector>(m, "BeamVector")
      .def(py::init<>())
      .def_readwrite("x0", &BeamVector::x0)
      .def_readwrite("y0", &BeamVector::y0)
      .def_readwrite("theta1", &BeamVector::theta1)
      .def_readwrite("theta2", &BeamVector::theta2)
      .def_readwrite("phi", &BeamVector::phi);

  py::class_<BeamStatistics>(m, "BeamStatistics")
      .def_readonly("mean_theta", &BeamStatistics::mean_theta)
      .def_readonly("var_x", &BeamStatistics::var_x)
      .def_readonly("var_y", &BeamStatistics::var_y)
      .def_readonly("var_theta", &BeamStatistics::var_theta)
      .def_readonly("cov_theta", &BeamStatistics::cov_theta);

  py::class_<PulseShape>(m, "PulseShape")
      .def_readonly("half_width", &PulseShape::half_width)
      .def_readonly("broadened_half_width", &PulseShape::broadened_half_width)
      .def_readonly("a1", &PulseShape::a1);

  py::class_<BroadeningResult>(m, "BroadeningResult")
      .def_readonly("mean_transmittance", &BroadeningResult::mean_transmittance)
      .def_readonly("broadening_ratio", &BroadeningResult::broadening_ratio);

  py::class_<ScintillationParams>(m, "ScintillationParams")
      .def_readonly("sigma_i2_longitudinal",
                    &ScintillationParams::sigma_i2_longitudinal)
      .def_readonly("alpha_gg", &ScintillationParams::alpha_gg)
      .def_readonly("beta_gg", &ScintillationParams::beta_gg)
      .def_readonly("sigma_lnx2", &ScintillationParams::sigma_lnx2)
      .def_readonly("sigma_lny2", &ScintillationParams::sigma_lny2)
      .def_readonly("effective_waist", &ScintillationParams::effective_waist)
      .def_readonly("effective_lambda", &ScintillationParams::effective_lambda)
      .def_readonly("radial_coef", &ScintillationParams::radial_coef);

  m.def("pulse_half_width", &pulse_half_width, py::arg("prf"),
        py::arg("duty_ratio"));
  m.def("broadened_half_width", &broadened_half_width, py::arg("t0"),
        py::arg("scenario"));
  m.def("mean_broadening_transmittance", &mean_broadening_transmittance,
        py::arg("pulse"));
  m.def("beam_statistics", &beam_statistics, py::arg("params"),
        py::arg("beam_waist"));
  m.def("sample_beam_vector", &sample_beam_vector, py::arg("stats"),
        py::arg("rng"));
  m.def("elliptical_transmittance", &elliptical_transmittance, py::arg("beam"),
        py::arg("aperture_radius"), py::arg("beam_waist"));
  m.def("scintillation_index_weak", &scintillation_index_weak, py::arg("r"),
        py::arg("params"));
  m.def("scintillation_index_strong", &scintillation_index_strong,
        py::arg("params"), py::arg("scenario"));
  m.def("scintillation_index_strong_at", &scintillation_index_strong_at,
        py::arg("r"), py::arg("scint_params"));
  m.def("effective_waist", &effective_waist, py::arg("params"),
        py::arg("regime"));
  m.def("mean_irradiance", &mean_irradiance, py::arg("r"), py::arg("params"),
        py::arg("beam_waist"), py::arg("regime"));

  // ---- impairments -----------------------------------------------------------
  py::class_<InterruptionResult>(m, "InterruptionResult")
      .def_readonly("aoa_variance", &InterruptionResult::aoa_variance)
      .def_readonly("rms_displacement", &InterruptionResult::rms_displacement)
      .def_readonly("probability", &InterruptionResult::probability);

  py::class_<PhaseNoiseResult>(m, "PhaseNoiseResult")
      .def_readonly("mean_arrival", &PhaseNoiseResult::mean_arrival)
      .def_readonly("arrival_variance", &PhaseNoiseResult::arrival_variance)
      .def_readonly("delta_t_variance", &PhaseNoiseResult::delta_t_variance)
      .def_readonly("phase_variance", &PhaseNoiseResult::phase_variance)
      .def_readonly("excess_noise", &PhaseNoiseResult::excess_noise)
      .def_readonly("omega", &PhaseNoiseResult::omega);

  m.def("interruption_probability", &interruption_probability,
        py::arg("scenario"), py::arg("beam_stats"));
  m.def("phase_excess_noise", &phase_excess_noise, py::arg("scenario"),
        py::arg("pulse"));

  // ---- key rate --------------------------------------------------------------
  py::class_<FadingMoments>(m, "FadingMoments")
      .def(py::init<>())
      .def(py::init([](double mean_t, double mean_sqrt_t) {
             FadingMoments f;
             f.mean_t = mean_t;
             f.mean_sqrt_t = mean_sqrt_t;
             return f;
           }),
           py::arg("mean_t"), py::arg("mean_sqrt_t"))
      .def_readwrite("mean_t", &FadingMoments::mean_t)
      .def_readwrite("mean_sqrt_t", &FadingMoments::mean_sqrt_t)
      .def("var_sqrt_t", &FadingMoments::var_sqrt_t);

  py::class_<ProtocolParams>(m, "ProtocolParams")
      .def(py::init<>())
      .def_readwrite("v", &ProtocolParams::v)
      .def_readwrite("eps", &ProtocolParams::eps)
      .def_readwrite("eta", &ProtocolParams::eta)
      .def_readwrite("vel", &ProtocolParams::vel)
      .def_readwrite("beta_rec", &ProtocolParams::beta_rec)
      .def_readwrite("detector", &ProtocolParams::detector)
      .def_static("from_scenario", &ProtocolParams::from_scenario,
                  py::arg("scenario"), py::arg("extra_excess_noise") = 0.0);

  py::class_<KeyRateResult>(m, "KeyRateResult")
      .def_readonly("i_ab", &KeyRateResult::i_ab)
      .def_readonly("chi_be", &KeyRateResult::chi_be)
      .def_property_readonly(
          "lambdas",
          [](const KeyRateResult& r) { return lambda_vector(r.lambda); })
      .def_readonly("k_raw", &KeyRateResult::k_raw)
      .def_readonly("k", &KeyRateResult::k)
      .def_readonly("p_interrupt", &KeyRateResult::p_interrupt)
      .def_readonly("k_atm_raw", &KeyRateResult::k_atm_raw)
      .def_readonly("k_atm", &KeyRateResult::k_atm);

  m.def("g_function", &g_function, py::arg("x"));
  m.def("mutual_information", &mutual_information, py::arg("moments"),
        py::arg("protocol"));
  m.def("secret_key_rate", &secret_key_rate, py::arg("moments"),
        py::arg("protocol"), py::arg("p_interrupt") = 0.0);

  // ---- engine ----------------------------------------------------------------
  py::class_<EngineOptions>(m, "EngineOptions")
      .def(py::init<>())
      .def_readwrite("n_samples", &EngineOptions::n_samples)
      .def_readwrite("seed", &EngineOptions::seed)
      .def_readwrite("workers", &EngineOptions::workers)
      .def_readwrite("point_index", &EngineOptions::point_index)
      .def_readwrite("include_phase_noise", &EngineOptions::include_phase_noise)
      .def_readwrite("include_broadening", &EngineOptions::include_broadening);

  py::class_<TransmittanceStats>(m, "TransmittanceStats")
      .def_readonly("n_samples", &TransmittanceStats::n_samples)
      .def_readonly("mean_t", &TransmittanceStats::mean_t)
      .def_readonly("mean_sqrt_t", &TransmittanceStats::mean_sqrt_t)
      .def_readonly("var_sqrt_t", &TransmittanceStats::var_sqrt_t)
      .def_readonly("density", &TransmittanceStats::density)
      .def_readonly("clamp_count", &TransmittanceStats::clamp_count);

  py::class_<PointResult>(m, "PointResult")
      .def_readonly("distance", &PointResult::distance)
      .def_readonly("rytov_sq", &PointResult::rytov_sq)
      .def_readonly("regime", &PointResult::regime)
      .def_readonly("tstats", &PointResult::tstats)
      .def_readonly("interruption", &PointResult::interruption)
      .def_readonly("phase", &PointResult::phase)
      .def_readonly("keyrate", &PointResult::keyrate)
      .def_readonly("warnings", &PointResult::warnings);

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("detector", &SweepRow::detector)
      .def_readonly("point", &SweepRow::point);

  py::class_<SweepResult>(m, "SweepResult")
      .def_readonly("rows", &SweepResult::rows)
      .def_readonly("warnings", &SweepResult::warnings);

  m.def("estimate_transmittance", &estimate_transmittance, py::arg("scenario"),
        py::arg("options"), py::call_guard<py::gil_scoped_release>());
  m.def("evaluate_point", &evaluate_point, py::arg("scenario"),
        py::arg("options"), py::call_guard<py::gil_scoped_release>());
  m.def("sweep", &sweep, py::arg("scenario"), py::arg("distances"),
        py::arg("detectors"), py::arg("options"),
        py::call_guard<py::gil_scoped_release>());

  // ---- config + output -------------------------------------------------------
  py::class_<OutputOptions>(m, "OutputOptions")
      .def(py::init<>())
      .def_readwrite("directory", &OutputOptions::directory)
      .def_readwrite("write_csv", &OutputOptions::write_csv)
      .def_readwrite("write_json", &OutputOptions::write_json)
      .def_readwrite("write_histograms", &OutputOptions::write_histograms)
      .def_readwrite("include_phase_noise", &OutputOptions::include_phase_noise)
      .def_readwrite("include_broadening", &OutputOptions::include_broadening);

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("scenario", &RunConfig::scenario)
      .def_readwrite("season", &RunConfig::season)
      .def_readwrite("distances", &RunConfig::distances)
      .def_readwrite("detectors", &RunConfig::detectors)
      .def_readwrite("n_samples", &RunConfig::n_samples)
      .def_readwrite("seed", &RunConfig::seed)
      .def_readwrite("threads", &RunConfig::threads)
      .def_readwrite("output", &RunConfig::output)
      .def_readwrite("warnings", &RunConfig::warnings);

  py::class_<SeasonPreset>(m, "SeasonPreset")
      .def_readonly("name", &SeasonPreset::name)
      .def_readonly("cn2", &SeasonPreset::cn2)
      .def_readonly("extinction", &SeasonPreset::extinction)
      .def_readonly("extinction_inherited", &SeasonPreset::extinction_inherited)
      .def_readonly("extinction_note", &SeasonPreset::extinction_note);

  m.def("season_presets", &season_presets,
        py::return_value_policy::reference);
  m.def("find_preset",
        [](const std::string& name) -> std::optional<SeasonPreset> {
          const SeasonPreset* p = find_preset(name);
          if (p == nullptr) return std::nullopt;
          return *p;
        },
        py::arg("name"));
  m.def("parse_config_text", &parse_config_text, py::arg("json_text"));
  m.def("parse_config_file", &parse_config_file, py::arg("path"));

  m.def("format_double", &format_double, py::arg("value"));
  m.def("sweep_csv", &sweep_csv, py::arg("result"));
  m.def("histogram_csv", &histogram_csv, py::arg("stats"));
  m.def("metadata_json", &metadata_json, py::arg("config"), py::arg("result"));
  m.def("write_outputs", &write_outputs, py::arg("config"), py::arg("result"));

  // ---- special functions -----------------------------------------------------
  m.def("lambert_w", &specfun::lambert_w, py::arg("x"));
  m.def("bessel_i0", &specfun::bessel_i0, py::arg("x"));
  m.def("bessel_i1", &specfun::bessel_i1, py::arg("x"));
  m.def("bessel_k", &specfun::bessel_k, py::arg("nu"), py::arg("x"));
  m.def("bessel_k_ln", &specfun::bessel_k_ln, py::arg("nu"), py::arg("x"));
  m.def("hyp1f1", &specfun::hyp1f1, py::arg("a"), py::arg("b"), py::arg("z"));
  m.def("hyp2f1", &specfun::hyp2f1, py::arg("a"), py::arg("b"), py::arg("c"),
        py::arg("z"));
  m.def("gamma_fn", &specfun::gamma_fn, py::arg("x"));
  m.def("std_normal_cdf", &specfun::std_normal_cdf, py::arg("x"));
}
