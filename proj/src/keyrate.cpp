#include "cvatm/keyrate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cvatm {

namespace {

// Guarded sqrt of a discriminant-like quantity: tiny negatives from rounding
// clamp to zero, anything materially negative is a hard error.
double sqrt_nonneg(double x, const char* what) {
  if (x < 0.0) {
    if (x < -1e-9 * (1.0 + std::abs(x))) {
      throw std::domain_error(std::string(what) +
                              ": negative discriminant in eigenvalue solve");
    }
    x = 0.0;
  }
  return std::sqrt(x);
}

void validate_inputs(const FadingMoments& m, const ProtocolParams& p) {
  if (!(m.mean_t > 0.0) || m.mean_t > 1.0)
    throw std::invalid_argument("mean_t: must be in (0,1]");
  if (!(m.mean_sqrt_t > 0.0) || m.mean_sqrt_t > 1.0)
    throw std::invalid_argument("mean_sqrt_t: must be in (0,1]");
  if (m.var_sqrt_t() < -1e-12)
    throw std::invalid_argument(
        "mean_sqrt_t: inconsistent moments, var(sqrt T) < 0");
  if (!(p.v > 1.0)) throw std::invalid_argument("v: must be > 1");
  if (!(p.eta > 0.0) || p.eta > 1.0)
    throw std::invalid_argument("eta: must be in (0,1]");
  if (p.eps < 0.0) throw std::invalid_argument("eps: must be >= 0");
  if (p.vel < 0.0) throw std::invalid_argument("vel: must be >= 0");
  if (!(p.beta_rec > 0.0) || p.beta_rec > 1.0)
    throw std::invalid_argument("beta_rec: must be in (0,1]");
}

}  // namespace

double g_function(double x) {
  if (x < 0.0) {
    if (x < -1e-9)
      throw std::domain_error("g_function: argument below -1e-9");
    x = 0.0;
  }
  if (x == 0.0) return 0.0;
  return (x + 1.0) * std::log2(x + 1.0) - x * std::log2(x);
}

double mutual_information(const FadingMoments& m, const ProtocolParams& p) {
  validate_inputs(m, p);
  const bool het = p.detector == Detector::heterodyne;
  const double det_factor = het ? 2.0 : 1.0;
  double chi_f = det_factor * (1.0 + p.vel) / (p.eta * m.mean_t) - 1.0 + p.eps;
  double arg = 1.0 - m.mean_sqrt_t * m.mean_sqrt_t * (p.v - 1.0) /
                         (m.mean_t * (p.v + chi_f));
  if (!(arg > 0.0))
    throw std::domain_error(
        "mutual_information: non-positive log argument (channel too noisy)");
  return (het ? 1.0 : 0.5) * (-std::log2(arg));
}

HolevoResult holevo_bound(const FadingMoments& m, const ProtocolParams& p) {
  validate_inputs(m, p);
  const bool het = p.detector == Detector::heterodyne;
  const double v = p.v;
  const double mt = m.mean_t;
  const double mst = m.mean_sqrt_t;
  const double var_st = std::max(0.0, m.var_sqrt_t());

  const double a = v;
  const double b = mst * std::sqrt(v * v - 1.0);
  const double c = mt * (v + 1.0 / mt - 1.0 + p.eps);

  const double big_a = v * v * (1.0 - 2.0 * mst * mst) + 2.0 * mst * mst + c * c;
  const double b_root =
      v * v * var_st + mst * mst + mt * v * (1.0 / mt - 1.0 + p.eps);
  const double big_b = b_root * b_root;

  double disc1 = sqrt_nonneg(big_a * big_a - 4.0 * big_b, "lambda12");
  double l1 = sqrt_nonneg(0.5 * (big_a + disc1), "lambda1");
  double l2 = sqrt_nonneg(0.5 * (big_a - disc1), "lambda2");

  double big_c, big_d;
  if (het) {
    double chi = (2.0 - p.eta + 2.0 * p.vel) / p.eta;
    double denom = c + chi;
    big_c = (big_a * chi * chi + 2.0 * chi * (a * std::sqrt(big_b) + c) +
             big_b + 2.0 * b * b + 1.0) /
            (denom * denom);
    double num = (a + std::sqrt(big_b) * chi) / denom;
    big_d = num * num;
  } else {
    double chi = (1.0 - p.eta + p.vel) / p.eta;
    double denom = c + chi;
    big_c = (big_a * chi + a * std::sqrt(big_b) + c) / denom;
    big_d = std::sqrt(big_b) * (a + std::sqrt(big_b) * chi) / denom;
  }
  double disc2 = sqrt_nonneg(big_c * big_c - 4.0 * big_d, "lambda34");
  double l3 = sqrt_nonneg(0.5 * (big_c + disc2), "lambda3");
  double l4 = sqrt_nonneg(0.5 * (big_c - disc2), "lambda4");

  HolevoResult r;
  r.lambda[0] = l1;
  r.lambda[1] = l2;
  r.lambda[2] = l3;
  r.lambda[3] = l4;
  r.lambda[4] = 1.0;
  r.inv_a = big_a;
  r.inv_b = big_b;
  r.inv_c = big_c;
  r.inv_d = big_d;
  r.chi_be = g_function(0.5 * (l1 - 1.0)) + g_function(0.5 * (l2 - 1.0)) -
             g_function(0.5 * (l3 - 1.0)) - g_function(0.5 * (l4 - 1.0)) -
             g_function(0.5 * (r.lambda[4] - 1.0));
  return r;
}

KeyRateResult secret_key_rate(const FadingMoments& m, const ProtocolParams& p,
                              double p_interrupt) {
  if (p_interrupt < 0.0 || p_interrupt > 1.0)
    throw std::invalid_argument("p_interrupt: must be in [0,1]");
  KeyRateResult r;
  r.i_ab = mutual_information(m, p);
  HolevoResult h = holevo_bound(m, p);
  r.chi_be = h.chi_be;
  for (int i = 0; i < 5; ++i) r.lambda[i] = h.lambda[i];
  r.inv_a = h.inv_a;
  r.inv_b = h.inv_b;
  r.inv_c = h.inv_c;
  r.inv_d = h.inv_d;
  r.k_raw = p.beta_rec * r.i_ab - r.chi_be;
  r.k = std::max(0.0, r.k_raw);
  r.p_interrupt = p_interrupt;
  r.k_atm_raw = (1.0 - p_interrupt) * r.k_raw;
  r.k_atm = std::max(0.0, r.k_atm_raw);
  return r;
}

}  // namespace cvatm
