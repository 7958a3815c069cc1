#pragma once
// Transmittance models for the fading channel: temporal pulse broadening,
// elliptical-beam wandering/deformation sampling, scintillation sampling, and
// their combination into a total transmittance sample.
#include <cstdint>
#include <string>
#include <vector>

#include "cvatm/channel.hpp"
#include "cvatm/rng.hpp"

namespace cvatm {

// One realization of the random beam state at the receiver plane.
// Semi-axes are W_i^2 = W0^2 * exp(theta_i); phi is the orientation angle.
struct BeamVector {
  double x0 = 0.0;      // m
  double y0 = 0.0;      // m
  double theta1 = 0.0;  // log-squared-semiaxis parameters
  double theta2 = 0.0;
  double phi = 0.0;     // rad, in [0, pi/2)
};

// Mean and covariance entries of the beam-state distribution.
struct BeamStatistics {
  double mean_theta = 0.0;  // <Theta>
  double var_x = 0.0;       // <dx0^2>, m^2
  double var_y = 0.0;       // <dy0^2>, m^2
  double var_theta = 0.0;   // <dTheta^2>
  double cov_theta = 0.0;   // <dTheta1 dTheta2>
};

// Temporal pulse shape before/after propagation.
struct PulseShape {
  double half_width = 0.0;            // T0, s
  double broadened_half_width = 0.0;  // T1 = sqrt(T0^2 + 8 a1), s
  double a1 = 0.0;                    // turbulence broadening parameter, s^2
};

struct BroadeningResult {
  double mean_transmittance = 1.0;  // T0/T1
  double broadening_ratio = 0.0;    // (T1-T0)/T0
};

// Gamma-gamma / log-irradiance parameters of the strong-fluctuation regime.
struct ScintillationParams {
  double sigma_i2_longitudinal = 0.0;  // on-axis scintillation index
  double alpha_gg = 0.0;               // large-scale shape
  double beta_gg = 0.0;                // small-scale shape
  double sigma_lnx2 = 0.0;             // net large-scale log variance
  double sigma_lny2 = 0.0;             // small-scale log variance
  double effective_waist = 0.0;        // W_e, m
  double effective_lambda = 0.0;       // Lambda_e
  double radial_coef = 0.0;            // coefficient of (r/W_e)^2 in the radial index
  // Intermediate quantities, exposed for verification.
  double q_inner = 0.0;                // inner-scale frequency parameter
  double q_outer = 0.0;                // outer-scale frequency parameter
  double eta_x = 0.0;
  double eta_x0 = 0.0;
  double sigma_lnx2_inner = 0.0;       // large-scale variance, inner scale only
  double sigma_lnx2_outer = 0.0;       // large-scale variance with outer-scale cutoff
  double sigma_g2 = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;
};

// T0 = duty_ratio / (2 * prf)
double pulse_half_width(double prf, double duty_ratio);

// T1 = sqrt(T0^2 + 8*a1), a1 = 0.39 * Cn2 * L * L0^(5/3) / c^2
PulseShape broadened_half_width(double t0, const LinkScenario& s);

BroadeningResult mean_broadening_transmittance(const PulseShape& p);

// Mean/covariance of the beam state from the regime-matched statistics block.
BeamStatistics beam_statistics(const ChannelParams& p, double beam_waist);

// Draw one beam state: x0, y0 and (theta1, theta2) jointly Gaussian,
// phi uniform on [0, pi/2).
BeamVector sample_beam_vector(const BeamStatistics& stats, RngStream& rng);

// Transmittance of an elliptical Gaussian spot through a circular aperture of
// radius a; result clamped to [0,1].
double elliptical_transmittance(const BeamVector& v, double aperture_radius,
                                double beam_waist);

// Weak-fluctuation scintillation index at radial distance r (exact forms).
// Throws std::domain_error when called outside the weak regime.
double scintillation_index_weak(double r, const ChannelParams& p);

// Strong-fluctuation scintillation parameters (longitudinal index, gamma-gamma
// shapes, effective beam size, radial index coefficient).
// Throws std::domain_error when called in the weak regime.
ScintillationParams scintillation_index_strong(const ChannelParams& p,
                                               const LinkScenario& s);

// Radial + longitudinal scintillation index in the strong regime; the radial
// coordinate is clamped to r <= W_e (the stated validity range).
double scintillation_index_strong_at(double r, const ScintillationParams& sp);

// Effective beam size W_e for the mean-irradiance profile.
double effective_waist(const ChannelParams& p, Regime regime);

// Normalized mean irradiance (W0^2/W_e^2) * exp(-2 r^2 / W_e^2).
double mean_irradiance(double r, const ChannelParams& p, double beam_waist,
                       Regime regime);

// Precomputed receiver-disk partition for scintillation sampling. Each cell
// draws an irradiance with the cell-center mean and scintillation index; the
// transmittance is the area-weighted sum over cells divided by pi*W0^2/2.
struct ScintillationGrid {
  Regime regime = Regime::weak;
  double alpha_gg = 0.0;  // shared large-scale shape (strong regime)
  struct Cell {
    double weight = 0.0;    // area * <I(r_c)> / (pi*W0^2/2)
    double log_sigma = 0.0; // weak: sqrt(sigma_I^2(r_c)) of the log draw
    double log_mu = 0.0;    // weak: -sigma_I^2/2 offset (unit-mean draw)
    double beta = 0.0;      // strong: small-scale shape at r_c
    double inv_beta = 0.0;
  };
  std::vector<Cell> cells;
  double deterministic_t = 0.0;  // sum of weights = quadrature of the mean
  int n_annuli = 0;
  int n_sectors = 0;
};

// Unit-mean irradiance draws used per grid cell.
// Lognormal: log-variance sigma_i_sq, mean exactly 1.
double draw_lognormal_unit(double sigma_i_sq, RngStream& rng);
// Gamma-gamma: product of two unit-mean gamma factors with shapes alpha, beta.
double draw_gamma_gamma_unit(double alpha, double beta, RngStream& rng);

ScintillationGrid build_scintillation_grid(const ChannelParams& p,
                                           const LinkScenario& s,
                                           int n_annuli = 64,
                                           int n_sectors = 16);

// One draw of the aperture-integrated scintillation transmittance.
double sample_scintillation_transmittance(const ScintillationGrid& grid,
                                          RngStream& rng);

// Everything precomputed that total_transmittance_sample needs per scenario.
struct FadingKernel {
  double extinction_t = 1.0;
  double aperture_radius = 0.0;
  double beam_waist = 0.0;
  BeamStatistics stats;
  ScintillationGrid grid;
  double broadening_factor = 1.0;  // applied only when include_broadening
  bool include_broadening = false;
  std::vector<std::string> warnings;
};

FadingKernel build_fading_kernel(const LinkScenario& s,
                                 bool include_broadening = false,
                                 int n_annuli = 64, int n_sectors = 16);

// T = T_ext * T_ell * T_sci (optionally * T0/T1), clamped to [0,1].
// clamped (if non-null) is set when the raw product fell outside [0,1].
double total_transmittance_sample(const FadingKernel& k, RngStream& rng,
                                  bool* clamped = nullptr);

}  // namespace cvatm
