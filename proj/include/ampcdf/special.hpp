#pragma once

namespace ampcdf::special {

/// exp(-t) * I0(t) and exp(-t) * I1(t) for t >= 0.
double bessel_i0e(double t);
double bessel_i1e(double t);

/// log of the Poisson probability mass exp(-mean) mean^k / k!, accurate for
/// large k and mean (no cancellation between k*log(mean) and lgamma).
double log_poisson_pmf(double k, double mean);

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a), a > 0.
double gamma_q(double a, double x);

/// First-order Marcum Q function Q1(a, b), a, b >= 0. Absolute error below 1e-10.
double marcum_q1(double a, double b);

/// Rician distribution of |nu + n| where n is circular Gaussian with
/// per-quadrature standard deviation s.
double rician_pdf(double x, double nu, double s);
double rician_cdf(double x, double nu, double s);

} // namespace ampcdf::special
