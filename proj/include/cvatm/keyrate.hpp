#pragma once
// Asymptotic secret-key-rate formulas over fading channels with imperfect
// homodyne/heterodyne detection. The channel enters only through the first
// two moments of sqrt(T); the module is distribution-agnostic.
#include "cvatm/channel.hpp"

namespace cvatm {

struct FadingMoments {
  double mean_t = 1.0;       // <T>
  double mean_sqrt_t = 1.0;  // <sqrt(T)>
  double var_sqrt_t() const { return mean_t - mean_sqrt_t * mean_sqrt_t; }
};

struct ProtocolParams {
  double v = 3.0;            // EPR variance V = V_A + 1, SNU
  double eps = 0.01;         // fixed excess noise, SNU
  double eta = 0.6;          // detection efficiency
  double vel = 0.01;         // electronic noise, SNU
  double beta_rec = 0.9;     // reconciliation efficiency
  Detector detector = Detector::homodyne;

  static ProtocolParams from_scenario(const LinkScenario& s,
                                      double extra_excess_noise = 0.0) {
    ProtocolParams p;
    p.v = s.modulation_variance + 1.0;
    p.eps = s.fixed_excess_noise + extra_excess_noise;
    p.eta = s.detection_efficiency;
    p.vel = s.electronic_noise;
    p.beta_rec = s.reconciliation_efficiency;
    p.detector = s.detector;
    return p;
  }
};

struct HolevoResult {
  double chi_be = 0.0;
  double lambda[5] = {1, 1, 1, 1, 1};
  // Symplectic invariants, exposed for verification.
  double inv_a = 0.0;  // lambda1^2 + lambda2^2
  double inv_b = 0.0;  // lambda1^2 * lambda2^2
  double inv_c = 0.0;  // lambda3^2 + lambda4^2
  double inv_d = 0.0;  // lambda3^2 * lambda4^2
};

struct KeyRateResult {
  double i_ab = 0.0;           // bits/use
  double chi_be = 0.0;         // bits/use
  double lambda[5] = {1, 1, 1, 1, 1};
  double k_raw = 0.0;          // beta*I_AB - chi_BE
  double k = 0.0;              // max(0, k_raw)
  double p_interrupt = 0.0;
  double k_atm_raw = 0.0;      // (1-P) * k_raw
  double k_atm = 0.0;          // max(0, k_atm_raw)
  double inv_a = 0.0, inv_b = 0.0, inv_c = 0.0, inv_d = 0.0;
};

// G(x) = (x+1) log2(x+1) - x log2 x, with G(0) = 0 by continuity.
// Small negatives (>= -1e-9) clamp to 0; beyond that is a domain error.
double g_function(double x);

// Mutual information of the two honest parties (factor 1/2 homodyne, 1
// heterodyne). Throws std::domain_error on a non-positive log argument.
double mutual_information(const FadingMoments& m, const ProtocolParams& p);

// Holevo bound of the eavesdropper via the five symplectic eigenvalues.
HolevoResult holevo_bound(const FadingMoments& m, const ProtocolParams& p);

// K = beta*I_AB - chi_BE; K_atm = (1-P)*K.
KeyRateResult secret_key_rate(const FadingMoments& m, const ProtocolParams& p,
                              double p_interrupt);

}  // namespace cvatm
