#include "bridgecut/mappings.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bridgecut::mappings {

std::uint64_t FunctionalDigraph::cyclic_count() const {
    std::uint64_t k = 0;
    for (auto b : is_cyclic) k += b;
    return k;
}

Mapping sample_uniform_mapping(std::uint32_t n, RngStream& rng) {
    if (n == 0)
        throw std::invalid_argument("sample_uniform_mapping: n must be >= 1");
    Mapping m;
    m.n = n;
    m.image.resize(n);
    for (std::uint32_t v = 0; v < n; ++v)
        m.image[v] = static_cast<std::uint32_t>(rng.uniform_index(n));
    return m;
}

FunctionalDigraph analyze_digraph(const Mapping& m) {
    const std::uint32_t n = m.n;
    if (n == 0 || m.image.size() != n)
        throw std::invalid_argument("analyze_digraph: malformed mapping");
    for (auto v : m.image)
        if (v >= n)
            throw std::invalid_argument("analyze_digraph: image out of range");

    FunctionalDigraph d;
    d.n = n;
    d.is_cyclic.assign(n, 1);
    d.tree_size.assign(n, 1);
    d.height.assign(n, 0);

    // Peel vertices of in-degree 0 until only the cyclic core remains.
    // Peel order visits every noncyclic vertex after all of its tree
    // children, so subtree sizes and heights accumulate in the same pass.
    std::vector<std::uint32_t> indeg(n, 0);
    for (std::uint32_t v = 0; v < n; ++v) indeg[m.image[v]]++;
    std::vector<std::uint32_t> queue;
    queue.reserve(n);
    for (std::uint32_t v = 0; v < n; ++v)
        if (indeg[v] == 0) queue.push_back(v);
    std::vector<std::uint32_t> peel_order;
    peel_order.reserve(n);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        std::uint32_t v = queue[head];
        d.is_cyclic[v] = 0;
        peel_order.push_back(v);
        std::uint32_t p = m.image[v];
        d.tree_size[p] += d.tree_size[v];
        d.height[p] = std::max(d.height[p], d.height[v] + 1);
        if (--indeg[p] == 0) queue.push_back(p);
    }

    // Cycles, least element first.
    d.cycle_of.assign(n, 0);
    std::vector<std::uint8_t> seen(n, 0);
    for (std::uint32_t v = 0; v < n; ++v) {
        if (!d.is_cyclic[v] || seen[v]) continue;
        std::vector<std::uint32_t> cyc;
        std::uint32_t w = v;
        do {
            seen[w] = 1;
            cyc.push_back(w);
            w = m.image[w];
        } while (w != v);
        // v is the least element of this cycle: any smaller cyclic vertex
        // in it would already have been seen.
        std::uint32_t ci = static_cast<std::uint32_t>(d.cycles.size());
        for (auto u : cyc) d.cycle_of[u] = ci;
        d.cycles.push_back(std::move(cyc));
    }

    // Roots and basins: walk the peel order backwards so every vertex sees
    // its parent resolved first.
    d.root_of.assign(n, 0);
    for (std::uint32_t v = 0; v < n; ++v)
        if (d.is_cyclic[v]) d.root_of[v] = v;
    for (auto it = peel_order.rbegin(); it != peel_order.rend(); ++it) {
        std::uint32_t v = *it;
        std::uint32_t p = m.image[v];
        d.root_of[v] = d.is_cyclic[p] ? p : d.root_of[p];
    }
    d.basin_of.resize(n);
    d.basin_size.assign(d.cycles.size(), 0);
    for (std::uint32_t v = 0; v < n; ++v) {
        d.basin_of[v] = d.cycle_of[d.root_of[v]];
        d.basin_size[d.basin_of[v]]++;
    }

    // Tree children in increasing label order: bucket by parent with the
    // source index ascending.
    d.child_start.assign(n + 1, 0);
    for (std::uint32_t v = 0; v < n; ++v)
        if (!d.is_cyclic[v]) d.child_start[m.image[v] + 1]++;
    for (std::uint32_t v = 0; v < n; ++v)
        d.child_start[v + 1] += d.child_start[v];
    d.child_list.resize(d.child_start[n]);
    std::vector<std::uint32_t> cursor(d.child_start.begin(),
                                      d.child_start.end() - 1);
    for (std::uint32_t v = 0; v < n; ++v)
        if (!d.is_cyclic[v]) d.child_list[cursor[m.image[v]]++] = v;

    return d;
}

std::vector<OrderedComponent> order_components(const FunctionalDigraph& d,
                                               OrderingMode mode) {
    const std::size_t k = d.cycles.size();
    // Pick the distinguished root of each component, then order components
    // by that mode's key. Both modes list tree roots around the cycle so
    // the listing ends at the distinguished root.
    std::vector<std::uint32_t> anchor(k);  // distinguished root per cycle
    std::vector<std::uint32_t> key(k);     // ordering key per cycle
    if (mode == OrderingMode::CyclesFirst) {
        for (std::size_t j = 0; j < k; ++j) {
            anchor[j] = d.cycles[j][0];  // least cyclic element
            key[j] = anchor[j];
        }
    } else {
        // Least element of each basin, and the root of the tree containing
        // that element.
        std::vector<std::uint32_t> least(k, d.n);
        std::vector<std::uint32_t> root_at_least(k, 0);
        for (std::uint32_t v = 0; v < d.n; ++v) {
            std::uint32_t b = d.basin_of[v];
            if (v < least[b]) {
                least[b] = v;
                root_at_least[b] = d.root_of[v];
            }
        }
        for (std::size_t j = 0; j < k; ++j) {
            anchor[j] = root_at_least[j];
            key[j] = least[j];
        }
    }
    std::vector<std::uint32_t> order(k);
    for (std::uint32_t j = 0; j < k; ++j) order[j] = j;
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t a, std::uint32_t b) { return key[a] < key[b]; });

    std::vector<OrderedComponent> out;
    out.reserve(k);
    for (auto j : order) {
        OrderedComponent comp;
        comp.cycle_index = j;
        const auto& cyc = d.cycles[j];
        // Locate the anchor inside the stored cycle, then emit the cycle
        // in mapping order starting just after it: M(a), M^2(a), ..., a.
        std::size_t pos = 0;
        while (cyc[pos] != anchor[j]) ++pos;
        comp.roots.reserve(cyc.size());
        for (std::size_t t = 1; t <= cyc.size(); ++t)
            comp.roots.push_back(cyc[(pos + t) % cyc.size()]);
        out.push_back(std::move(comp));
    }
    return out;
}

void encode_tree_walk(const FunctionalDigraph& d, std::uint32_t root,
                      std::vector<std::int8_t>& out) {
    // Iterative DFS; child lists are already in increasing label order.
    struct Frame {
        std::uint32_t v;
        const std::uint32_t* next;
    };
    static thread_local std::vector<Frame> stack;
    stack.clear();
    out.push_back(+1);
    stack.push_back({root, d.children_begin(root)});
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.next == d.children_end(f.v)) {
            out.push_back(-1);
            stack.pop_back();
            continue;
        }
        std::uint32_t c = *f.next++;
        out.push_back(+1);
        stack.push_back({c, d.children_begin(c)});
    }
}

MappingWalk build_mapping_walk(const FunctionalDigraph& d,
                               OrderingMode mode) {
    MappingWalk w;
    w.steps.reserve(2 * d.n);
    auto comps = order_components(d, mode);
    for (const auto& comp : comps) {
        w.component_boundaries.push_back(w.steps.size());
        for (auto root : comp.roots) {
            encode_tree_walk(d, root, w.steps);
            w.zero_return_indices.push_back(w.steps.size());
        }
    }
    return w;
}

ScaledWalkStats scaled_walk_statistics(const MappingWalk& w,
                                       const FunctionalDigraph& d,
                                       OrderingMode mode) {
    ScaledWalkStats s;
    const double n = static_cast<double>(d.n);
    const double sq = std::sqrt(n);
    auto comps = order_components(d, mode);
    for (const auto& comp : comps) {
        s.basin_fraction.push_back(d.basin_size[comp.cycle_index] / n);
        s.cycle_scaled.push_back(d.cycles[comp.cycle_index].size() / sq);
    }
    s.total_cyclic_scaled = static_cast<double>(d.cyclic_count()) / sq;
    std::int64_t level = 0, maxlevel = 0;
    for (auto st : w.steps) {
        level += st;
        maxlevel = std::max(maxlevel, level);
    }
    s.max_level_scaled = static_cast<double>(maxlevel) / sq;
    return s;
}

Mapping sample_single_cycle_mapping(std::uint32_t n, RngStream& rng) {
    for (;;) {
        Mapping m = sample_uniform_mapping(n, rng);
        FunctionalDigraph d = analyze_digraph(m);
        if (d.cycles.size() == 1) return m;
    }
}

ExactMappingTables enumerate_exact(std::uint32_t n) {
    if (n == 0 || n > 7)
        throw std::invalid_argument(
            "enumerate_exact: n must be in [1,7] (n^n cost guard)");
    ExactMappingTables t;
    t.n = n;
    t.total = 1;
    for (std::uint32_t i = 0; i < n; ++i) t.total *= n;

    Mapping m;
    m.n = n;
    m.image.assign(n, 0);
    for (std::uint64_t code = 0; code < t.total; ++code) {
        FunctionalDigraph d = analyze_digraph(m);

        const auto k = static_cast<std::uint32_t>(d.cycles.size());
        const auto cm = static_cast<std::uint32_t>(d.cyclic_count());
        t.cycles_count[k]++;
        t.cyclic_points_count[cm]++;
        t.cyclic_and_cycles[{cm, k}]++;

        for (auto mode : {OrderingMode::CyclesFirst, OrderingMode::BasinsFirst}) {
            auto comps = order_components(d, mode);
            std::vector<std::uint32_t> cyc_seq;
            cyc_seq.reserve(comps.size());
            for (const auto& c : comps)
                cyc_seq.push_back(
                    static_cast<std::uint32_t>(d.cycles[c.cycle_index].size()));
            std::uint64_t b1 = d.basin_size[comps[0].cycle_index];
            if (mode == OrderingMode::CyclesFirst) {
                t.first_basin_cycles[b1]++;
                t.cycle_seq_cycles[cyc_seq]++;
                std::vector<std::uint64_t> tree_seq;
                for (const auto& c : comps)
                    for (auto root : c.roots)
                        tree_seq.push_back(d.tree_size[root]);
                t.tree_seq_cycles_first[{static_cast<std::uint32_t>(
                                             d.cycles.size()),
                                         std::move(tree_seq)}]++;
            } else {
                t.first_basin_basins[b1]++;
                t.cycle_seq_basins[cyc_seq]++;
            }
        }

        // Odometer increment over the image array.
        std::uint32_t pos = 0;
        while (pos < n && ++m.image[pos] == n) m.image[pos++] = 0;
    }
    return t;
}

}  // namespace bridgecut::mappings
