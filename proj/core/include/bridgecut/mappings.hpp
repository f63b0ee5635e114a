#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "bridgecut/rng.hpp"

// Uniform random mappings [n] -> [n], their functional digraphs (cyclic
// core, rooted trees, basins), the two component orderings, the +-1 walk
// encodings, and exhaustive small-n enumeration oracles. Vertices are
// 0-based throughout; "least element" always means the smallest label.

namespace bridgecut::mappings {

struct Mapping {
    std::uint32_t n = 0;
    std::vector<std::uint32_t> image;  // image[v] = M(v), entries in [0, n)
};

enum class OrderingMode { CyclesFirst, BasinsFirst };

struct FunctionalDigraph {
    std::uint32_t n = 0;
    std::vector<std::uint8_t> is_cyclic;
    // Cycles listed with their least element first, following the mapping.
    std::vector<std::vector<std::uint32_t>> cycles;
    std::vector<std::uint32_t> cycle_of;   // cyclic vertex -> cycle index
    std::vector<std::uint32_t> root_of;    // vertex -> cyclic root of its tree
    std::vector<std::uint32_t> basin_of;   // vertex -> cycle index
    std::vector<std::uint64_t> basin_size; // per cycle index
    std::vector<std::uint64_t> tree_size;  // per vertex; valid at tree roots
    std::vector<std::uint32_t> height;     // per vertex; h_n(c) at cyclic c
    // Tree children (noncyclic preimages) in increasing label order, CSR.
    std::vector<std::uint32_t> child_start;  // size n+1
    std::vector<std::uint32_t> child_list;   // size = number of noncyclic

    std::uint64_t cyclic_count() const;

    const std::uint32_t* children_begin(std::uint32_t v) const {
        return child_list.data() + child_start[v];
    }
    const std::uint32_t* children_end(std::uint32_t v) const {
        return child_list.data() + child_start[v + 1];
    }
};

// One ordered component: a cycle together with its tree roots listed
// around the cycle so that the listing ends at the distinguished root.
struct OrderedComponent {
    std::uint32_t cycle_index = 0;
    std::vector<std::uint32_t> roots;
};

struct MappingWalk {
    std::vector<std::int8_t> steps;  // +-1, length 2n
    std::vector<std::size_t> component_boundaries;  // step index where each
                                                    // basin segment starts
    std::vector<std::size_t> zero_return_indices;   // steps after which the
                                                    // level is back at 0
};

struct ScaledWalkStats {
    // Per component, in ordering-mode order.
    std::vector<double> basin_fraction;   // |B_{n,j}| / n
    std::vector<double> cycle_scaled;     // |C_{n,j}| / sqrt(n)
    double total_cyclic_scaled = 0.0;     // |C_n| / sqrt(n)
    double max_level_scaled = 0.0;        // (max walk level) / sqrt(n)
};

Mapping sample_uniform_mapping(std::uint32_t n, RngStream& rng);

FunctionalDigraph analyze_digraph(const Mapping& m);

std::vector<OrderedComponent> order_components(const FunctionalDigraph& d,
                                               OrderingMode mode);

// DFS entry/exit coding: +1 entering a vertex, -1 leaving, children in
// increasing label order; appends 2 * |tree(root)| steps.
void encode_tree_walk(const FunctionalDigraph& d, std::uint32_t root,
                      std::vector<std::int8_t>& out);

MappingWalk build_mapping_walk(const FunctionalDigraph& d, OrderingMode mode);

ScaledWalkStats scaled_walk_statistics(const MappingWalk& w,
                                       const FunctionalDigraph& d,
                                       OrderingMode mode);

Mapping sample_single_cycle_mapping(std::uint32_t n, RngStream& rng);

// Exhaustive enumeration over all n^n mappings (n <= 7). Tables map an
// outcome to the number of mappings realizing it; the common denominator
// is n^n.
struct ExactMappingTables {
    std::uint32_t n = 0;
    std::uint64_t total = 0;  // n^n
    std::map<std::uint32_t, std::uint64_t> cycles_count;        // K_n
    std::map<std::uint32_t, std::uint64_t> cyclic_points_count; // |C_n|
    // Joint law of (|C_n|, K_n); conditionally on |C_n| = m the cycle count
    // must follow the permutation cycle law on [m].
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t>
        cyclic_and_cycles;
    std::map<std::uint64_t, std::uint64_t> first_basin_cycles;  // |B_{n,1}|, CyclesFirst
    std::map<std::uint64_t, std::uint64_t> first_basin_basins;  // |B_{n,1}|, BasinsFirst
    // Cycle-size sequences in ordering order.
    std::map<std::vector<std::uint32_t>, std::uint64_t> cycle_seq_cycles;
    std::map<std::vector<std::uint32_t>, std::uint64_t> cycle_seq_basins;
    // CyclesFirst tree-size sequences keyed by (cycle count of the mapping,
    // sequence); used for the exchangeability check.
    std::map<std::pair<std::uint32_t, std::vector<std::uint64_t>>,
             std::uint64_t>
        tree_seq_cycles_first;
};

ExactMappingTables enumerate_exact(std::uint32_t n);

}  // namespace bridgecut::mappings
