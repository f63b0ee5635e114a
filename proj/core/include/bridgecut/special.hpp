#pragma once

#include <functional>

// Special functions and quadrature shared by the samplers, density
// evaluators and the statistical tests. Everything is plain double
// precision; accuracy targets are stated per function.

namespace bridgecut::special {

// Regularized lower/upper incomplete gamma P(a,x), Q(a,x) = 1 - P(a,x).
// Series for x < a+1, continued fraction otherwise; |error| ~ 1e-14.
double gammp(double a, double x);
double gammq(double a, double x);

// CDF of gamma(shape) scaled by rate: P(shape, rate*x).
double gamma_cdf(double x, double shape, double rate);
// Inverse of gamma_cdf in x for fixed (shape, rate); bisection, 1e-12.
double gamma_quantile(double p, double shape, double rate);

// Survival function of the chi-square distribution with k dof.
double chi2_sf(double x, double k);

// Kolmogorov distribution survival Q(lambda) = P(sup|B(t)| > lambda),
// the asymptotic null law of sqrt(n) * D_n.
double kolmogorov_sf(double lambda);

double rayleigh_cdf(double x);  // 1 - exp(-x^2/2)

// CDF of the inverse-local-time value tau_ell for alpha = 1/2, scale c:
// tau_ell has density f_ell(x) = (ell*c/2) (2*pi)^{-1/2} ... reduced to
// erfc(ell*c / (2 sqrt(x))) by the Levy first-passage identity.
double stable_half_cdf(double x, double ell, double c);

// Density of the standard positive alpha-stable variable S with
// E exp(-u S) = exp(-u^alpha), via the Zolotarev integral representation.
// Used only for general-alpha quadrature paths; ~1e-8 relative accuracy.
double stable_std_density(double alpha, double x);

// Adaptive Simpson quadrature with absolute tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, int max_depth = 28);

}  // namespace bridgecut::special
