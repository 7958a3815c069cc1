#include "cvatm/impairments.hpp"

#include <cmath>

#include "cvatm/specfun.hpp"

namespace cvatm {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kSpeedOfLight = 299792458.0;
}  // namespace

InterruptionResult interruption_probability(const LinkScenario& s,
                                            const BeamStatistics& stats) {
  InterruptionResult r;
  r.aoa_variance = stats.var_x / (s.distance * s.distance);
  r.rms_displacement = s.focal_length * std::sqrt(std::max(0.0, r.aoa_variance));
  if (r.rms_displacement <= 0.0) {
    r.probability = 0.0;
    return r;
  }
  double arg = s.fiber_core_diameter / (2.0 * r.rms_displacement);
  r.probability = 2.0 * (1.0 - specfun::std_normal_cdf(arg));
  return r;
}

PhaseNoiseResult phase_excess_noise(const LinkScenario& s, const PulseShape& p) {
  PhaseNoiseResult r;
  r.mean_arrival = s.distance / kSpeedOfLight;
  r.arrival_variance = p.broadened_half_width * p.broadened_half_width / 4.0;
  r.delta_t_variance = 2.0 * (1.0 - s.lo_correlation) * r.arrival_variance;
  r.omega = 2.0 * kPi * kSpeedOfLight / s.wavelength;
  r.phase_variance = r.omega * r.omega * r.delta_t_variance;
  r.excess_noise = s.modulation_variance * r.phase_variance;
  return r;
}

}  // namespace cvatm
