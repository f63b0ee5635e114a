#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bridgecut/randkit.hpp"
#include "bridgecut/rng.hpp"
#include "bridgecut/statlab.hpp"

// The bivariate point process of (scaled length, scaled local time) pairs
// shared by both partitions: constructions, biased reorderings, Palm-formula
// checks, and the marked-subordinator mechanism behind them.

namespace bridgecut::pointproc {

enum class PointOrder { Unordered, XBiased, YBiased };

enum class Coord { X, Y };

struct MarkedPointSet {
    std::vector<std::pair<double, double>> points;  // (x, y), all > 0
    PointOrder order = PointOrder::Unordered;
    double xi = 1.0;
    double alpha = 0.5;
    double c = 1.4142135623730951;
    double dropped_mass = 0.0;  // x-mass of truncated tail sticks

    double sum_x() const;
    double sum_y() const;
    std::string to_csv() const;  // header x,y,order_index
};

// Points (G lambda_j, G^alpha (lambda_j / tau_j)^alpha) with G ~ Gamma(alpha)/xi,
// (lambda_j) ~ GEM(alpha) in stick order and tau_j i.i.d. stable(alpha):
// a Poisson process with intensity
//   nu(dx, dy) = alpha x^{-1} e^{-xi x} dx P(x^alpha tau_1^{-alpha} in dy)
// listed in X-biased order. Sticks below tail_tolerance are dropped and
// their x-mass recorded.
MarkedPointSet construct_points_D(double xi, const randkit::StableParams& p,
                                  double tail_tolerance, RngStream& rng);

// Size-biased reshuffle by the chosen coordinate's weights.
MarkedPointSet reorder_biased(const MarkedPointSet& ps, Coord coordinate,
                              RngStream& rng);

// Palm-formula checks over replicate point sets (split by order tag):
//  - X-biased sets: (Y_1, Sigma_Y - Y_1) must look like a size-biased pick,
//    which here reduces to Sigma_Y ~ Exp(c xi^alpha) with Y_1 uniform on
//    (0, Sigma_Y); tested as an 8x8 equal-probability chi-square.
//  - Y-biased sets: E[X_1 / Sigma_X] must equal 1/2 -- and must *not* equal
//    the 2/3 that X-biased order would give (rejection test).
// Fewer than 10^5 sets of a kind adds a low-power warning report.
std::vector<statlab::StatReport> palm_checks(
    const std::vector<MarkedPointSet>& samples, std::uint64_t seed);

// The marked-subordinator mechanism: simulate the jumps of the inverse
// local time above a cutoff as a Poisson process in (local time, jump),
// mark each jump with probability 1 - exp(-xi * jump), and record
//   L = local time of the first marked jump,
//   G = sum of unmarked jumps before it (small jumps compensated in mean),
//   tau_u = sum of unmarked jumps over local time (0, 1].
// Reports: L vs Exp(c xi^alpha) (KS); (G, L) against the joint density
// c xi^alpha e^{-xi t} f_l(t) (6x6 chi-square, alpha = 1/2 only);
// tau_u vs its tilted-stable law (KS, alpha = 1/2 only); and
// E exp(-tau_u) against exp(c xi^alpha - c (1+xi)^alpha) (z-test).
// jump_cutoff <= 0 picks the default: discarded mean < 1e-4 * E[G];
// a cutoff discarding more than 1e-3 * E[G] adds a bias warning.
std::vector<statlab::StatReport> verify_lemma_gp(double xi,
                                                 const randkit::StableParams& p,
                                                 double jump_cutoff,
                                                 std::size_t reps,
                                                 RngStream& rng);

// One replicate of L = sum_j (Q_j / sigma_j)^alpha for (Q_j) ~ GEM(alpha)
// and i.i.d. stable sigma_j: total and first-term fraction. The total must
// match the local time at 0 of the standardized bridge (Rayleigh for
// alpha = 1/2) and the fractions (L_j / L) are GEM(1), independent of L.
struct StableSumSample {
    double total = 0.0;
    double first_fraction = 0.0;
};
StableSumSample sample_stable_sum(const randkit::StableParams& p,
                                  double tail_tolerance, RngStream& rng);

}  // namespace bridgecut::pointproc
