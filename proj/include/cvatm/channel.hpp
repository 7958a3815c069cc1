#pragma once
// Link-level scenario description and derived turbulence/extinction parameters
// for a horizontal atmospheric channel.
#include <string>

namespace cvatm {

enum class Detector { homodyne, heterodyne };
enum class Regime { weak, strong_or_moderate };

std::string to_string(Detector d);
std::string to_string(Regime r);

// Extinction coefficients, stored per meter (configs use per-km, see config).
struct ExtinctionCoeffs {
  double mol_scatter = 0.0;
  double mol_absorb = 0.0;
  double aer_scatter = 0.0;
  double aer_absorb = 0.0;
  double sum() const { return mol_scatter + mol_absorb + aer_scatter + aer_absorb; }
};

// All scenario inputs, SI units throughout.
struct LinkScenario {
  double wavelength = 1550e-9;        // m
  double distance = 10e3;             // m
  double cn2 = 2.12e-15;              // m^(-2/3)
  double beam_waist = 0.08;           // m, transmitter spot radius
  double aperture_radius = 0.11;      // m
  double focal_length = 0.22;         // m
  double fiber_core_diameter = 9e-6;  // m
  double inner_scale = 4e-3;          // m
  double outer_scale = 0.4;           // m
  ExtinctionCoeffs extinction;
  double prf = 100e6;                 // Hz
  double duty_ratio = 0.10;           // (0,1]
  double lo_correlation = 1.0 - 1e-13;          // [0,1]
  double modulation_variance = 2.0;             // V_A, SNU
  Detector detector = Detector::homodyne;
  double detection_efficiency = 0.6;            // (0,1]
  double electronic_noise = 0.01;               // SNU, >= 0
  double reconciliation_efficiency = 0.9;       // (0,1]
  double fixed_excess_noise = 0.01;             // SNU, >= 0

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// Derived propagation parameters of the Gaussian beam over the link.
struct ChannelParams {
  double wavenumber;      // k = 2*pi/lambda
  double rytov_sq;        // sigma1^2
  double fresnel;         // Omega = k*W0^2/(2L)
  double theta;           // Omega^2/(1+Omega^2)
  double lambda_par;      // Omega/(1+Omega^2)
  double theta_bar;       // 1 - theta
  double w_at_receiver;   // W0/sqrt(1+Omega^-2)
  Regime regime;          // weak iff rytov_sq < 1
};

// sigma1^2 = 1.23 * Cn^2 * k^(7/6) * L^(11/6)
double rytov_variance(const LinkScenario& s);

ChannelParams derive_params(const LinkScenario& s);

// exp(-alpha*L) with alpha the sum of the four extinction coefficients.
double extinction_transmittance(const ExtinctionCoeffs& c, double distance);

}  // namespace cvatm
