#pragma once
// Link impairments beyond transmittance: communication interruption from
// angle-of-arrival fluctuations, and phase excess noise from arrival-time
// jitter between signal and local oscillator.
#include "cvatm/channel.hpp"
#include "cvatm/fading.hpp"

namespace cvatm {

struct InterruptionResult {
  double aoa_variance = 0.0;      // <beta_a^2>, rad^2
  double rms_displacement = 0.0;  // L_dis = f * sqrt(<beta_a^2>), m
  double probability = 0.0;       // P in [0,1]
};

struct PhaseNoiseResult {
  double mean_arrival = 0.0;      // <t_a> = L/c, s
  double arrival_variance = 0.0;  // sigma_ta^2 = T1^2/4, s^2
  double delta_t_variance = 0.0;  // sigma_dt^2 = 2(1-rho)*sigma_ta^2, s^2
  double phase_variance = 0.0;    // sigma_theta^2 = omega^2 * sigma_dt^2, rad^2
  double excess_noise = 0.0;      // eps_theta = V_A * sigma_theta^2, SNU
  double omega = 0.0;             // 2*pi*c/lambda, rad/s
};

// P = 2 * (1 - Phi(d_cor / (2 * L_dis))); P = 0 when the wander variance is 0.
InterruptionResult interruption_probability(const LinkScenario& s,
                                            const BeamStatistics& stats);

PhaseNoiseResult phase_excess_noise(const LinkScenario& s, const PulseShape& p);

}  // namespace cvatm
