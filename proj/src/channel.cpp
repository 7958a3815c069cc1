#include "cvatm/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace cvatm {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

void require(bool ok, const char* field, const char* constraint) {
  if (!ok) {
    throw std::invalid_argument(std::string(field) + ": " + constraint);
  }
}
}  // namespace

std::string to_string(Detector d) {
  return d == Detector::homodyne ? "homodyne" : "heterodyne";
}

std::string to_string(Regime r) {
  return r == Regime::weak ? "weak" : "strong_or_moderate";
}

void LinkScenario::validate() const {
  require(wavelength > 0, "wavelength", "must be > 0");
  require(distance > 0, "distance", "must be > 0");
  require(cn2 >= 0, "cn2", "must be >= 0");
  require(beam_waist > 0, "beam_waist", "must be > 0");
  require(aperture_radius > 0, "aperture_radius", "must be > 0");
  require(focal_length > 0, "focal_length", "must be > 0");
  require(fiber_core_diameter > 0, "fiber_core_diameter", "must be > 0");
  require(fiber_core_diameter < 2.0 * aperture_radius, "fiber_core_diameter",
          "must be < 2*aperture_radius");
  require(inner_scale > 0, "inner_scale", "must be > 0");
  require(outer_scale > 0, "outer_scale", "must be > 0");
  require(extinction.mol_scatter >= 0 && extinction.mol_absorb >= 0 &&
              extinction.aer_scatter >= 0 && extinction.aer_absorb >= 0,
          "extinction", "coefficients must be >= 0");
  require(prf > 0, "prf", "must be > 0");
  require(duty_ratio > 0 && duty_ratio <= 1, "duty_ratio", "must be in (0,1]");
  require(lo_correlation >= 0 && lo_correlation <= 1, "lo_correlation",
          "must be in [0,1]");
  require(modulation_variance >= 0, "modulation_variance", "must be >= 0");
  require(detection_efficiency > 0 && detection_efficiency <= 1,
          "detection_efficiency", "must be in (0,1]");
  require(electronic_noise >= 0, "electronic_noise", "must be >= 0");
  require(reconciliation_efficiency > 0 && reconciliation_efficiency <= 1,
          "reconciliation_efficiency", "must be in (0,1]");
  require(fixed_excess_noise >= 0, "fixed_excess_noise", "must be >= 0");
}

double rytov_variance(const LinkScenario& s) {
  if (!(s.distance > 0) || !(s.wavelength > 0)) {
    throw std::invalid_argument("rytov_variance: requires L > 0 and lambda > 0");
  }
  double k = 2.0 * kPi / s.wavelength;
  return 1.23 * s.cn2 * std::pow(k, 7.0 / 6.0) * std::pow(s.distance, 11.0 / 6.0);
}

ChannelParams derive_params(const LinkScenario& s) {
  ChannelParams p{};
  p.wavenumber = 2.0 * kPi / s.wavelength;
  p.rytov_sq = rytov_variance(s);
  p.fresnel = p.wavenumber * s.beam_waist * s.beam_waist / (2.0 * s.distance);
  double om2 = p.fresnel * p.fresnel;
  p.theta = om2 / (1.0 + om2);
  p.lambda_par = p.fresnel / (1.0 + om2);
  p.theta_bar = 1.0 - p.theta;
  p.w_at_receiver = s.beam_waist / std::sqrt(1.0 + 1.0 / om2);
  p.regime = p.rytov_sq < 1.0 ? Regime::weak : Regime::strong_or_moderate;
  return p;
}

double extinction_transmittance(const ExtinctionCoeffs& c, double distance) {
  if (distance < 0) {
    throw std::invalid_argument("extinction_transmittance: requires L >= 0");
  }
  return std::exp(-c.sum() * distance);
}

}  // namespace cvatm
