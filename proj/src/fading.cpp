#include "cvatm/fading.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "cvatm/specfun.hpp"

namespace cvatm {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kSpeedOfLight = 299792458.0;
}  // namespace

double pulse_half_width(double prf, double duty_ratio) {
  if (!(prf > 0.0)) throw std::invalid_argument("prf: must be > 0");
  if (!(duty_ratio > 0.0) || duty_ratio > 1.0)
    throw std::invalid_argument("duty_ratio: must be in (0,1]");
  return duty_ratio / (2.0 * prf);
}

PulseShape broadened_half_width(double t0, const LinkScenario& s) {
  if (!(t0 > 0.0)) throw std::invalid_argument("pulse half-width: must be > 0");
  PulseShape p;
  p.half_width = t0;
  p.a1 = 0.39 * s.cn2 * s.distance * std::pow(s.outer_scale, 5.0 / 3.0) /
         (kSpeedOfLight * kSpeedOfLight);
  p.broadened_half_width = std::sqrt(t0 * t0 + 8.0 * p.a1);
  return p;
}

BroadeningResult mean_broadening_transmittance(const PulseShape& p) {
  BroadeningResult r;
  r.mean_transmittance = p.half_width / p.broadened_half_width;
  r.broadening_ratio = (p.broadened_half_width - p.half_width) / p.half_width;
  return r;
}

BeamStatistics beam_statistics(const ChannelParams& p, double beam_waist) {
  BeamStatistics st;
  const double om = p.fresnel;
  const double s2 = p.rytov_sq;
  const double w0sq = beam_waist * beam_waist;
  if (p.regime == Regime::weak) {
    double x = s2 * std::pow(om, 5.0 / 6.0);
    double n = 1.0 + 2.96 * x;
    double n2 = n * n;
    st.mean_theta = std::log(n2 / (om * om * std::sqrt(n2 + 1.2 * x)));
    st.var_x = 0.33 * w0sq * s2 * std::pow(om, -7.0 / 6.0);
    st.var_theta = std::log1p(1.2 * x / n2);
    st.cov_theta = std::log1p(-0.8 * x / n2);
  } else {
    double s1 = std::sqrt(s2);
    double gam = (1.0 + om * om) / (om * om);
    double s125 = std::pow(s1, 12.0 / 5.0);
    double s85 = std::pow(s1, 8.0 / 5.0);
    double ds = gam + 1.71 * s125 / om - 2.99 * s85 / om;
    double t = 3.24 * gam * s125 / om;
    st.mean_theta = std::log(ds * ds / std::sqrt(ds * ds + t));
    st.var_x = 0.75 * w0sq * s85 / om;
    st.var_theta = std::log1p(13.14 * gam * s125 / om / (ds * ds));
    st.cov_theta = std::log1p(0.65 * gam * s125 / om / (ds * ds));
  }
  st.var_y = st.var_x;
  return st;
}

BeamVector sample_beam_vector(const BeamStatistics& stats, RngStream& rng) {
  BeamVector v;
  v.x0 = std::sqrt(std::max(0.0, stats.var_x)) * rng.normal();
  v.y0 = std::sqrt(std::max(0.0, stats.var_y)) * rng.normal();
  // (theta1, theta2): equicorrelated pair via the eigenbasis of the 2x2
  // covariance; the correlation is clamped to [-1,1] (PSD floor).
  double var = std::max(0.0, stats.var_theta);
  double rho = 0.0;
  if (var > 0.0) rho = std::clamp(stats.cov_theta / var, -1.0, 1.0);
  double su = std::sqrt(std::max(0.0, 0.5 * (1.0 + rho) * var));
  double sv = std::sqrt(std::max(0.0, 0.5 * (1.0 - rho) * var));
  double z1 = rng.normal();
  double z2 = rng.normal();
  v.theta1 = stats.mean_theta + su * z1 + sv * z2;
  v.theta2 = stats.mean_theta + su * z1 - sv * z2;
  v.phi = rng.uniform() * (kPi / 2.0);
  return v;
}

namespace {

// Scale function R(xi) and shape function Q(xi) of the aperture model.
// x = a^2 xi^2; the x -> 0 limit is removable and is evaluated at a small
// floor value instead.
struct ScaleShape {
  double r;
  double q;
};

ScaleShape scale_shape(double aperture, double xi) {
  double x = aperture * aperture * xi * xi;
  if (x < 1e-12) x = 1e-12;
  double d0;  // 1 - exp(-x) I0(x), evaluated without cancellation
  if (x < 0.5) {
    double q = 0.25 * x * x;
    double term = 1.0;
    double i0m1 = 0.0;
    for (int k = 1; k < 40; ++k) {
      term *= q / (static_cast<double>(k) * k);
      i0m1 += term;
      if (term < 1e-18 * (1.0 + i0m1)) break;
    }
    d0 = -std::expm1(-x) - std::exp(-x) * i0m1;
  } else {
    d0 = 1.0 - specfun::bessel_i0_scaled(x);
  }
  double n0 = -2.0 * std::expm1(-0.5 * x);  // 2 (1 - exp(-x/2))
  double lr = std::log(n0 / d0);
  double q = 2.0 * x * specfun::bessel_i1_scaled(x) / d0 / lr;
  double r = std::pow(lr, -1.0 / q);
  return {r, q};
}

// Unclamped elliptical-spot transmittance.
double elliptical_raw(const BeamVector& v, double aperture, double beam_waist) {
  const double a = aperture;
  double w1 = beam_waist * std::exp(0.5 * v.theta1);
  double w2 = beam_waist * std::exp(0.5 * v.theta2);
  double r0 = std::hypot(v.x0, v.y0);
  double zeta = v.phi - std::atan2(v.y0, v.x0);
  double c2 = std::cos(zeta) * std::cos(zeta);
  double s2 = 1.0 - c2;

  // Effective spot size from the Lambert form, evaluated on the log scale so
  // extreme axis ratios cannot overflow the exponential.
  double sexp = std::log(4.0 * a * a / (w1 * w2)) +
                (a * a / (w1 * w1)) * (1.0 + 2.0 * c2) +
                (a * a / (w2 * w2)) * (1.0 + 2.0 * s2);
  double w_eff = 2.0 * a / std::sqrt(specfun::lambert_w_exp(sexp));

  // Transmittance of the centered beam.
  double inv1 = 1.0 / (w1 * w1);
  double inv2 = 1.0 / (w2 * w2);
  double u = a * a * (inv1 - inv2);
  double vv = a * a * (inv1 + inv2);
  double t0 = 1.0 - specfun::bessel_i0_scaled(u) * std::exp(std::abs(u) - vv);
  // Difference term, with semi-axes ordered so the base argument is positive.
  double wb = std::max(w1, w2);
  double ws = std::min(w1, w2);
  double xid = 1.0 / ws - 1.0 / wb;  // |1/W1 - 1/W2|
  if (a * a * xid * xid >= 1e-14) {
    double base = (wb + ws) * (wb + ws) / (wb * wb - ws * ws);
    ScaleShape rq = scale_shape(a, xid);
    double amp = -2.0 * std::expm1(-0.5 * a * a * xid * xid);
    t0 -= amp * std::exp(-std::pow(base / rq.r, rq.q));
  }

  // Off-center attenuation; equal to 1 exactly when r0 = 0.
  ScaleShape rq1 = scale_shape(a, 2.0 / w_eff);
  return t0 * std::exp(-std::pow((r0 / a) / rq1.r, rq1.q));
}

}  // namespace

double elliptical_transmittance(const BeamVector& v, double aperture_radius,
                                double beam_waist) {
  return std::clamp(elliptical_raw(v, aperture_radius, beam_waist), 0.0, 1.0);
}

double scintillation_index_weak(double r, const ChannelParams& p) {
  if (p.regime != Regime::weak)
    throw std::domain_error(
        "scintillation_index_weak: parameters are not in the weak regime");
  if (r < 0.0) throw std::invalid_argument("radial distance must be >= 0");
  std::complex<double> z(p.theta_bar, p.lambda_par);
  std::complex<double> rot = std::polar(1.0, 5.0 * kPi / 12.0);  // i^(5/6)
  std::complex<double> h =
      specfun::hyp2f1(-5.0 / 6.0, 11.0 / 6.0, 17.0 / 6.0, z);
  double lam56 = std::pow(p.lambda_par, 5.0 / 6.0);
  double lon = 3.86 * p.rytov_sq * (-11.0 / 16.0 * lam56 + (rot * h).real());
  double rad = 0.0;
  if (r > 0.0) {
    double w = p.w_at_receiver;
    rad = 2.65 * p.rytov_sq * lam56 *
          (1.0 - specfun::hyp1f1(-5.0 / 6.0, 1.0, 2.0 * r * r / (w * w)));
  }
  return lon + rad;
}

ScintillationParams scintillation_index_strong(const ChannelParams& p,
                                               const LinkScenario& s) {
  if (p.regime == Regime::weak)
    throw std::domain_error(
        "scintillation_index_strong: parameters are in the weak regime");
  ScintillationParams sp;
  const double s2 = p.rytov_sq;
  const double k = p.wavenumber;
  const double L = s.distance;
  const double th = p.theta;
  const double thb = p.theta_bar;
  const double lam = p.lambda_par;

  sp.q_inner = 10.89 * L / (k * s.inner_scale * s.inner_scale);
  sp.q_outer = 64.0 * kPi * kPi * L / (k * s.outer_scale * s.outer_scale);
  const double ql = sp.q_inner;

  double poly = 1.0 / 3.0 - thb / 2.0 + thb * thb / 5.0;
  double inv_eta = 0.38 / (1.0 - 3.21 * thb + 5.29 * thb * thb) +
                   0.47 * s2 * std::pow(ql, 1.0 / 6.0) *
                       std::pow(poly / (1.0 + 2.2 * thb), 6.0 / 7.0);
  sp.eta_x = 1.0 / inv_eta;

  auto large_scale_var = [&](double eta) {
    double q = eta * ql / (eta + ql);
    double rt = eta / (eta + ql);
    return 0.49 * s2 * poly * std::pow(q, 7.0 / 6.0) *
           (1.0 + 1.75 * std::sqrt(rt) - 0.25 * std::pow(rt, 7.0 / 12.0));
  };
  sp.sigma_lnx2_inner = large_scale_var(sp.eta_x);
  sp.eta_x0 = sp.eta_x * sp.q_outer / (sp.eta_x + sp.q_outer);
  sp.sigma_lnx2_outer = large_scale_var(sp.eta_x0);
  sp.sigma_lnx2 = sp.sigma_lnx2_inner - sp.sigma_lnx2_outer;

  sp.phi1 = std::atan(2.0 * lam / (1.0 + 2.0 * th));
  sp.phi2 = std::atan((1.0 + 2.0 * th) * ql / (3.0 + 2.0 * lam * ql));
  double t12 = (1.0 + 2.0 * th) * (1.0 + 2.0 * th);
  double big_s = t12 * ql * ql + (3.0 + 2.0 * lam * ql) * (3.0 + 2.0 * lam * ql);
  double bracket = 2.61 / std::pow(big_s, 0.25) *
                       std::sin(4.0 / 3.0 * sp.phi2 + sp.phi1) -
                   0.52 / std::pow(big_s, 7.0 / 24.0) *
                       std::sin(5.0 / 4.0 * sp.phi2 + sp.phi1) +
                   std::sin(11.0 / 6.0 * sp.phi2 + sp.phi1);
  double term1 = 0.4 *
                 std::pow(t12 + (2.0 * lam + 3.0 / ql) * (2.0 * lam + 3.0 / ql),
                          11.0 / 12.0) /
                 std::sqrt(t12 + 4.0 * lam * lam) * bracket;
  double term2 = 13.4 * lam / (std::pow(ql, 11.0 / 6.0) * (t12 + 4.0 * lam * lam));
  double term3 = 11.0 / 6.0 *
                 (std::pow((1.0 + 0.31 * lam * ql) / ql, 5.0 / 6.0) +
                  1.1 * std::pow(1.0 + 0.27 * lam * ql, 1.0 / 3.0) /
                      std::pow(ql, 5.0 / 6.0) -
                  0.19 * std::pow(1.0 + 0.24 * lam * ql, 1.0 / 4.0) /
                      std::pow(ql, 5.0 / 6.0));
  sp.sigma_g2 = 3.86 * s2 * (term1 - term2 - term3);
  sp.sigma_lny2 = 0.51 * sp.sigma_g2 /
                  std::pow(1.0 + 0.69 * std::pow(sp.sigma_g2, 6.0 / 5.0), 5.0 / 6.0);

  sp.sigma_i2_longitudinal = std::expm1(sp.sigma_lnx2 + sp.sigma_lny2);
  sp.alpha_gg = 1.0 / std::expm1(sp.sigma_lnx2);
  sp.beta_gg = 1.0 / std::expm1(sp.sigma_lny2);

  double s1 = std::sqrt(s2);
  sp.effective_waist =
      p.w_at_receiver * std::sqrt(1.0 + 1.63 * std::pow(s1, 12.0 / 5.0) * lam);
  sp.effective_lambda = 2.0 * L / (k * sp.effective_waist * sp.effective_waist);
  double outer_cut = 1.0 - 1.15 * std::pow(sp.effective_lambda * L /
                                               (k * s.outer_scale * s.outer_scale),
                                           1.0 / 6.0);
  sp.radial_coef = 4.42 * s2 * std::pow(sp.effective_lambda, 5.0 / 6.0) *
                   std::max(0.0, outer_cut);
  return sp;
}

double scintillation_index_strong_at(double r, const ScintillationParams& sp) {
  double rr = std::min(std::max(r, 0.0), sp.effective_waist);
  double ratio = rr / sp.effective_waist;
  return sp.sigma_i2_longitudinal + sp.radial_coef * ratio * ratio;
}

double effective_waist(const ChannelParams& p, Regime regime) {
  if (regime == Regime::weak) {
    return p.w_at_receiver *
           std::sqrt(1.0 + 1.33 * p.rytov_sq * std::pow(p.lambda_par, 5.0 / 6.0));
  }
  double s1 = std::sqrt(p.rytov_sq);
  return p.w_at_receiver *
         std::sqrt(1.0 + 1.63 * std::pow(s1, 12.0 / 5.0) * p.lambda_par);
}

double mean_irradiance(double r, const ChannelParams& p, double beam_waist,
                       Regime regime) {
  if (r < 0.0) throw std::invalid_argument("radial distance must be >= 0");
  double we = effective_waist(p, regime);
  double ratio = beam_waist / we;
  return ratio * ratio * std::exp(-2.0 * r * r / (we * we));
}

double draw_lognormal_unit(double sigma_i_sq, RngStream& rng) {
  double s = std::sqrt(std::max(0.0, sigma_i_sq));
  return std::exp(-0.5 * sigma_i_sq + s * rng.normal());
}

double draw_gamma_gamma_unit(double alpha, double beta, RngStream& rng) {
  return rng.gamma(alpha) / alpha * rng.gamma(beta) / beta;
}

ScintillationGrid build_scintillation_grid(const ChannelParams& p,
                                           const LinkScenario& s, int n_annuli,
                                           int n_sectors) {
  if (n_annuli < 1 || n_sectors < 1)
    throw std::invalid_argument("scintillation grid: cell counts must be >= 1");
  ScintillationGrid grid;
  grid.regime = p.regime;
  grid.n_annuli = n_annuli;
  grid.n_sectors = n_sectors;
  const double a = s.aperture_radius;
  const double we = effective_waist(p, p.regime);

  ScintillationParams sp;
  if (p.regime == Regime::strong_or_moderate) {
    sp = scintillation_index_strong(p, s);
    grid.alpha_gg = sp.alpha_gg;
  }
  const double inv_alpha_term =
      p.regime == Regime::strong_or_moderate ? 1.0 + 1.0 / sp.alpha_gg : 0.0;

  grid.cells.reserve(static_cast<size_t>(n_annuli) * n_sectors);
  double sum_w = 0.0;
  for (int j = 0; j < n_annuli; ++j) {
    double r_lo = a * j / n_annuli;
    double r_hi = a * (j + 1) / n_annuli;
    double rc = 0.5 * (r_lo + r_hi);
    // area * <I(rc)> / (pi W0^2 / 2), per sector
    double w_cell = 2.0 * (r_hi * r_hi - r_lo * r_lo) *
                    std::exp(-2.0 * rc * rc / (we * we)) /
                    (we * we * n_sectors);
    ScintillationGrid::Cell cell;
    cell.weight = w_cell;
    if (p.regime == Regime::weak) {
      double si2 = scintillation_index_weak(rc, p);
      cell.log_sigma = std::sqrt(std::max(0.0, si2));
      cell.log_mu = -0.5 * std::max(0.0, si2);
    } else {
      double si2 = scintillation_index_strong_at(rc, sp);
      // beta(r) chosen so the cell draw has variance si2 exactly while the
      // large-scale shape alpha is shared: (1+1/alpha)(1+1/beta)-1 = si2.
      double inv_beta = (1.0 + si2) / inv_alpha_term - 1.0;
      if (inv_beta <= 0.0) inv_beta = 1e-12;
      cell.beta = 1.0 / inv_beta;
      cell.inv_beta = inv_beta;
    }
    for (int m = 0; m < n_sectors; ++m) grid.cells.push_back(cell);
    sum_w += w_cell * n_sectors;
  }
  grid.deterministic_t = sum_w;
  return grid;
}

double sample_scintillation_transmittance(const ScintillationGrid& grid,
                                          RngStream& rng) {
  double t = 0.0;
  if (grid.regime == Regime::weak) {
    for (const auto& c : grid.cells) {
      t += c.weight * std::exp(c.log_mu + c.log_sigma * rng.normal());
    }
  } else {
    const double alpha = grid.alpha_gg;
    for (const auto& c : grid.cells) {
      double u = rng.gamma(alpha) / alpha * rng.gamma(c.beta) * c.inv_beta;
      t += c.weight * u;
    }
  }
  return std::clamp(t, 0.0, 1.0);
}

namespace {

double scintillation_raw(const ScintillationGrid& grid, RngStream& rng) {
  double t = 0.0;
  if (grid.regime == Regime::weak) {
    for (const auto& c : grid.cells) {
      t += c.weight * std::exp(c.log_mu + c.log_sigma * rng.normal());
    }
  } else {
    const double alpha = grid.alpha_gg;
    for (const auto& c : grid.cells) {
      double u = rng.gamma(alpha) / alpha * rng.gamma(c.beta) * c.inv_beta;
      t += c.weight * u;
    }
  }
  return t;
}

}  // namespace

FadingKernel build_fading_kernel(const LinkScenario& s, bool include_broadening,
                                 int n_annuli, int n_sectors) {
  s.validate();
  FadingKernel k;
  ChannelParams p = derive_params(s);
  k.extinction_t = extinction_transmittance(s.extinction, s.distance);
  k.aperture_radius = s.aperture_radius;
  k.beam_waist = s.beam_waist;
  k.stats = beam_statistics(p, s.beam_waist);
  k.grid = build_scintillation_grid(p, s, n_annuli, n_sectors);
  k.include_broadening = include_broadening;
  if (include_broadening) {
    PulseShape pulse =
        broadened_half_width(pulse_half_width(s.prf, s.duty_ratio), s);
    k.broadening_factor = mean_broadening_transmittance(pulse).mean_transmittance;
  }
  if (p.regime == Regime::strong_or_moderate && p.rytov_sq <= 10.0) {
    k.warnings.push_back(
        "moderate turbulence (1 <= rytov_sq <= 10): strong-fluctuation "
        "formulas applied in their transition regime");
  }
  return k;
}

double total_transmittance_sample(const FadingKernel& k, RngStream& rng,
                                  bool* clamped) {
  bool clip = false;
  BeamVector v = sample_beam_vector(k.stats, rng);
  double t_ell = elliptical_raw(v, k.aperture_radius, k.beam_waist);
  if (t_ell < 0.0 || t_ell > 1.0) {
    clip = true;
    t_ell = std::clamp(t_ell, 0.0, 1.0);
  }
  double t_sci = scintillation_raw(k.grid, rng);
  if (t_sci < 0.0 || t_sci > 1.0) {
    clip = true;
    t_sci = std::clamp(t_sci, 0.0, 1.0);
  }
  double t = k.extinction_t * t_ell * t_sci;
  if (k.include_broadening) t *= k.broadening_factor;
  if (t < 0.0 || t > 1.0) {
    clip = true;
    t = std::clamp(t, 0.0, 1.0);
  }
  if (clamped) *clamped = clip;
  return t;
}

}  // namespace cvatm
