#pragma once
// Special-function kernel: the minimal set of functions the transmittance and
// key-rate models need, implemented to double precision and validated against
// high-precision references. All functions are pure and thread-safe.
#include <complex>

namespace cvatm::specfun {

// Principal-branch Lambert W: solves w*exp(w) = x for x >= -1/e.
// Accuracy target 1e-12 relative. Throws std::domain_error below -1/e.
double lambert_w(double x);

// W(exp(s)) without forming exp(s); stable for arbitrarily large s.
// Used where the W argument is the exponential of a large expression.
double lambert_w_exp(double s);

// Modified Bessel functions of the first kind, integer order 0 and 1.
// Accuracy target 1e-10 relative.
double bessel_i0(double x);
double bessel_i1(double x);
// exp(-|x|)*I0(x), exp(-|x|)*I1(x): overflow-free for large |x|.
double bessel_i0_scaled(double x);
double bessel_i1_scaled(double x);
// Dispatch on order in {0, 1}; other orders are a domain error.
double bessel_i(int order, double x);

// Modified Bessel function of the second kind, real order nu, x > 0.
// Accuracy target 1e-8 relative. K_{-nu}(x) = K_nu(x).
double bessel_k(double nu, double x);
// ln K_nu(x): usable where K underflows (large nu with moderate x).
double bessel_k_ln(double nu, double x);

// Confluent hypergeometric 1F1(a; b; x) by direct series.
// Accuracy target 1e-9 relative over the model's argument range.
// Throws std::runtime_error if the series fails to converge in 500 terms.
double hyp1f1(double a, double b, double x);

// Gauss hypergeometric 2F1(a, b; c; z) for complex z with |z| < 1.
// Direct series inside |z| <= 0.75, linear 1-z transformation otherwise.
// Accuracy target 1e-8 relative over the model's argument range.
std::complex<double> hyp2f1(double a, double b, double c, std::complex<double> z);

// Gamma function (wraps the standard library; present so callers depend on
// one tested surface). Accuracy target 1e-12 relative.
double gamma_fn(double x);

// Standard normal CDF. Accuracy target 1e-12 absolute.
double std_normal_cdf(double x);

}  // namespace cvatm::specfun
