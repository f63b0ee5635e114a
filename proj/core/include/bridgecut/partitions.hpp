#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "bridgecut/rng.hpp"

// Exchangeable interval partitions of [0,1], the discrete D- and T-cut
// constructions on them, exact set-partition laws (arbitrary-precision
// rationals), the permutation cycle-count law, Kallenberg normalized local
// time, and length-intensity histograms.

namespace bridgecut::partitions {

// n intervals identified by name 0..n-1. order[pos] is the name placed at
// left-to-right position pos; endpoints has size n+1 with endpoints[0] = 0
// and endpoints[n] = 1.
struct IntervalPartition {
    std::vector<double> lengths;       // by name
    std::vector<std::uint32_t> order;  // position -> name
    std::vector<double> endpoints;     // by position, cumulative
    std::vector<double> marks;         // optional, by name; empty if unused

    std::size_t size() const { return lengths.size(); }
    double length_at(std::size_t pos) const { return lengths[order[pos]]; }
};

struct SetPartition {
    std::uint32_t n = 0;
    std::vector<std::vector<std::uint32_t>> blocks;  // 0-based elements

    // Sorts each block and lists blocks by least element; equality of
    // unordered partitions is equality of canonical forms.
    void canonicalize();
    bool valid() const;
};

// Cut construction output. Interval j of the coarser partition carries the
// names of the merged sub-intervals as a block of length-rank indices
// (0 = longest), in cut order.
struct CutPartition {
    std::vector<double> lengths;        // merged lengths, cut order
    std::vector<std::uint32_t> counts;  // sub-intervals per merged interval
    SetPartition blocks;                // rank-index blocks, cut order
    std::uint32_t count() const {
        return static_cast<std::uint32_t>(lengths.size());
    }
};

struct ExactDist {
    std::vector<std::int64_t> support;
    std::vector<mpq_class> probabilities;

    mpq_class total() const;
    mpq_class at(std::int64_t outcome) const;  // 0 if absent
    std::string to_json(const std::string& name) const;
};

IntervalPartition make_exchangeable(const std::vector<double>& lengths,
                                    RngStream& rng);

// Cut at first interval endpoint at or right of a uniform pick in the
// remainder, repeatedly. Picks landing exactly on an endpoint (possible in
// floats, null event in the continuum) resolve to the interval on the right.
CutPartition discrete_d_partition(const IntervalPartition& ip, RngStream& rng);

// Successive uniform picks from the remaining right endpoints until 1.
CutPartition discrete_t_partition(const IntervalPartition& ip, RngStream& rng);

// Probability that the D-construction produces exactly the given ordered
// block sequence (blocks of rank indices over the ranked lengths):
// (1/n!) prod_j (|A_j|-1)! * lambda(A_j) / sum_{i>=j} lambda(A_i).
double exact_d_block_probability(
    const std::vector<double>& ranked_lengths,
    const std::vector<std::vector<std::uint32_t>>& ordered_blocks);

// Same, summed over all orderings of the blocks: the law of the unordered
// partition, which must match pt_formula.
double exact_d_block_probability_symmetrized(
    const std::vector<double>& ranked_lengths,
    const std::vector<std::vector<std::uint32_t>>& blocks);

// sum_sigma prod_j lambda(A_sigma(j)) / sum_{i>=j} lambda(A_sigma(i)) == 1:
// total probability of picking the blocks in some size-biased order.
double stick_identity_sum(const std::vector<double>& block_lengths);

// P(Pi = {A_1..A_k}) = (1/n!) prod_j (|A_j|-1)! for an unordered partition
// of [n]; depends only on the block sizes.
mpq_class pt_formula(std::uint32_t n, const std::vector<std::uint32_t>& block_sizes);

// Cycle-count law of a uniform permutation: P(K_n = k) = |s(n,k)|/n! via
// the signless Stirling recurrence.
ExactDist stirling_cycle_dist(std::uint32_t n);

// Same law built independently as the convolution of Bernoulli(1/i),
// i = 1..n.
ExactDist bernoulli_convolution_dist(std::uint32_t n);

// Exact law of the number of D-blocks for given exact ranked lengths,
// by subset dynamic programming over ordered block sequences.
ExactDist exact_d_count_distribution(const std::vector<mpq_class>& lengths);

// Exact law of the number of T-picks (uniform picks from remaining
// endpoints until the last); depends only on n.
ExactDist exact_t_count_distribution(std::uint32_t n);

// Exact unordered-block law of the D-construction, summed over ordered
// sequences; keys are canonical rank-index partitions.
std::map<std::vector<std::vector<std::uint32_t>>, mpq_class>
exact_d_block_law(const std::vector<mpq_class>& lengths);

// Fraction of the top_n longest intervals with right endpoint <= u.
double kallenberg_local_time(const IntervalPartition& ip, std::uint32_t top_n,
                             double u);

struct Histogram {
    std::vector<double> edges;   // size bins+1
    std::vector<double> counts;  // size bins; summed over replicates
};

// Summed histogram of all interval lengths across replicates, on uniform
// bins over (lo, hi).
Histogram empirical_intensity(const std::vector<std::vector<double>>& lengths,
                              double lo, double hi, std::uint32_t bins);

}  // namespace bridgecut::partitions
