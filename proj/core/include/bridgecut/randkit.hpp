#pragma once

#include <cstddef>
#include <vector>

#include "bridgecut/rng.hpp"

// Samplers and density evaluators for the distributions the toolkit is
// built on: beta, gamma, one-sided stable subordinator values, GEM(theta)
// stick-breaking, size-biased orderings, and the bridge-derived closed-form
// densities (split-point law, T_1 law, T-length intensity, joint
// length/local-time split density).

namespace bridgecut::randkit {

// Parameters of a one-sided stable subordinator (tau_ell), normalized by
// its Laplace transform: E exp(-xi * tau_ell) = exp(-ell * c * xi^alpha).
struct StableParams {
    double alpha;
    double c;
};

// The Brownian normalization: alpha = 1/2, c = sqrt(2), so that tau is the
// inverse local time at 0 of a standard Brownian motion.
StableParams brownian_params();

double laplace_exponent(const StableParams& p, double xi);

enum class OrderTag { StickOrder, Ranked, SizeBiased };

// A (possibly truncated) sequence of positive masses summing to 1 together
// with the undistributed residual.
struct LengthSequence {
    std::vector<double> values;
    double residual_mass = 0.0;
    OrderTag order_tag = OrderTag::StickOrder;

    double total() const;
};

double sample_beta(double a, double b, RngStream& rng);
double sample_gamma(double s, RngStream& rng);

// One sample of tau_level via Chambers-Mallows-Stuck, rescaled so the
// Laplace exponent is exactly level * c * xi^alpha.
double sample_stable(const StableParams& p, double level, RngStream& rng);

// Stick-breaking with i.i.d. beta(1, theta) sticks; stops once the
// remaining mass drops below tail_tolerance (recorded as residual_mass).
LengthSequence gem_lengths(double theta, double tail_tolerance,
                           RngStream& rng);

// Nonincreasing rearrangement; ties keep their original relative order.
LengthSequence rank_lengths(const LengthSequence& seq);

// Successive draws without replacement, each index picked with probability
// proportional to its remaining weight.
std::vector<std::size_t> size_biased_order(const std::vector<double>& weights,
                                           RngStream& rng);

double density_beta(double u, double a, double b);

// Density of the first zero after an independent uniform(0,1) time, i.e.
// the law of the split point at level u. Closed form for alpha = 1/2:
//   u*(1-u) / (2 * ((1-x)u^2 + x(1-u)^2)^{3/2});
// for other alpha it is computed by quadrature over the local-time level.
double density_tau_br(double u, double x, double alpha = 0.5);

// Density of T_1 in the Brownian case: (h(x) + h(1-x))/2 with
// h(x) = x^{-1/2} + log(x^{-1/2} - 1).
double density_T1(double x);

// Mean intensity of T-interval lengths: alpha * x^{-1} (1-x)^{alpha-1}.
double intensity_T_lengths(double x, double alpha = 0.5);

// The integral I(a,b) = int_0^1 (x(1-x))^{-1/2} / (a sqrt(x) + b sqrt(1-x)) dx
// in closed form, and the joint density
//   (ab/sqrt(2 pi)) I(a,b) exp(-a^2/2 - b^2/2)
// of the (scaled) local times of the two sides of a split bridge.
double split_integral_I(double a, double b);
double joint_density_split(double a, double b);

}  // namespace bridgecut::randkit
