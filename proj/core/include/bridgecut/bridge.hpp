#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "bridgecut/rng.hpp"

// Discretized Brownian bridge and motion, excursion extraction, the
// excursion-count local time estimator, the continuum D- and T-cut
// constructions, pseudo-bridge simulation, the fragment-swap rearrangement,
// and 3-d Bessel first-passage simulation.

namespace bridgecut::bridge {

enum class PathKind { Bridge, Motion, PseudoBridge, Fragment };

struct DiscretePath {
    std::size_t m = 0;   // grid cells; values has m+1 entries
    double dt = 0.0;     // duration / m
    PathKind kind = PathKind::Bridge;
    std::vector<double> values;

    double duration() const { return dt * static_cast<double>(m); }
};

// Grid zeros are points with value exactly 0 or a sign change to the next
// point (the crossing is assigned to the earlier grid point). Gaps of a
// single cell between zeros are treated as zero set, not excursions.
struct ExcursionSet {
    std::vector<std::size_t> zeros;  // ascending grid indices
    std::vector<std::pair<std::size_t, std::size_t>> intervals;
    std::vector<double> lengths;  // (end - start) * dt

    double total_length() const;
};

enum class CountingMode {
    // Each excursion's weight is split between the zero-set gaps flanking
    // it, where local time actually accrues. Symmetric under time
    // reversal, which kills the O(1/N) bias of end counting in
    // inverse-local-time functionals.
    Symmetrized,
    EndOfExcursion,
};

struct LocalTimeProfile {
    double epsilon = 0.0;
    double alpha = 0.5;
    double c = 0.0;
    double dt = 0.0;
    double weight = 0.0;             // calibrated mass per counted excursion
    std::vector<double> cumulative;  // size m+1; L at each grid time
    std::vector<std::size_t> zeros;  // grid zeros of the measured path

    double total() const { return cumulative.back(); }
    double increment(std::size_t i0, std::size_t i1) const {
        return cumulative[i1] - cumulative[i0];
    }
};

struct Fragment {
    double start = 0.0;       // time in the source path
    double end = 0.0;
    double length = 0.0;      // end - start
    double local_time = 0.0;  // profile increment, 0 when no profile given
    std::size_t start_index = 0;
    std::size_t end_index = 0;
    DiscretePath path;        // standardized: values / sqrt(length), unit time
};

DiscretePath simulate_bridge(std::size_t m, RngStream& rng);
DiscretePath simulate_motion(std::size_t m, RngStream& rng);

ExcursionSet excursions(const DiscretePath& path);

// epsilon policy: a fixed multiple of the grid step, so the crossing-count
// calibration below is the same constant at every resolution.
double default_epsilon(double dt);

// L(t) = (Gamma(1-alpha)/c) eps^alpha N_{t,eps}, with N the excursion count.
LocalTimeProfile local_time_profile(const DiscretePath& path, double epsilon,
                                    CountingMode mode = CountingMode::Symmetrized);

// Time at which the profile crosses the given fraction of its total. The
// crossing is interpolated across the flat stretch whose mass the level
// lands in, then committed to the nearest grid zero: the continuum inverse
// lives on the zero set, and always exiting at the jump index would skew
// every value toward the right end of its gap. Rational fractions that tie
// the count lattice exactly resolve to the stretch midpoint first.
double inverse_local_time(const LocalTimeProfile& profile, double fraction);

// Cut at the first grid zero at or after a uniform pick in the remainder,
// repeatedly; a terminal sliver shorter than 2 dt is merged into the last
// fragment. Fragment local times are filled when a profile is supplied.
std::vector<Fragment> d_partition(const DiscretePath& path, RngStream& rng,
                                  const LocalTimeProfile* profile = nullptr);

// Cut where normalized local time first exceeds stick-breaking levels
// 1 - prod(1 - U_i); stops once the residual stick mass drops below
// tail_tolerance or the path is exhausted.
std::vector<Fragment> t_partition(const DiscretePath& path,
                                  const LocalTimeProfile& profile,
                                  RngStream& rng,
                                  double tail_tolerance = 1e-9);

Fragment standardize_fragment(const DiscretePath& path, std::size_t i0,
                              std::size_t i1);

struct PseudoBridgeResult {
    DiscretePath path;          // rescaled to [0,1]; exactly m cells
    double tau = 0.0;           // inverse local time at 1, original units
    double stopped_level = 0.0; // local time spent: exactly 1 by construction
    double epsilon_ratio = 0.0; // eps / dt convention for re-measurement
    double weight = 0.0;        // mass per counted excursion at the path scale
    std::size_t excursion_count = 0;
};

// Brownian motion run to the inverse local time tau_1, rescaled to [0,1],
// sampled through its excursion decomposition: excursion lengths are the
// jumps of the 1/2-stable subordinator over unit local time (drawn exactly,
// largest first), shapes are scaled Bessel(3) bridges, signs fair coins,
// and the left-to-right order is an independent uniform shuffle. Work and
// memory are O(m) per path no matter how large tau comes out, which a
// step-doubling random walk cannot guarantee against the heavy tail of
// tau_1.
PseudoBridgeResult simulate_pseudo_bridge(std::size_t m, RngStream& rng);

// x[0,G] : x[D,1] : x[G,D] with (G, D) the excursion interval straddling u.
// Pure index permutation of the samples, so any value histogram is
// bit-identical before and after.
DiscretePath path_swap(const DiscretePath& x, double u);

// First passage of the 3-d Bessel process to 1, via the radial part of a
// Cartesian 3-d Brownian motion with a boundary-crossing correction.
double simulate_bessel3_hitting(std::size_t m, RngStream& rng);

// Sample-count histogram of path values over the given bin edges.
std::vector<std::uint64_t> occupation_histogram(const DiscretePath& path,
                                                const std::vector<double>& edges);

double path_max_abs(const DiscretePath& path);

// Last grid zero at or before the final index (the start of any incomplete
// final excursion); m if the endpoint itself is a zero.
std::size_t last_zero_index(const DiscretePath& path);

}  // namespace bridgecut::bridge
