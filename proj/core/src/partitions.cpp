#include "bridgecut/partitions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace bridgecut::partitions {

void SetPartition::canonicalize() {
    for (auto& b : blocks) std::sort(b.begin(), b.end());
    std::sort(blocks.begin(), blocks.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

bool SetPartition::valid() const {
    std::vector<std::uint8_t> seen(n, 0);
    std::uint32_t covered = 0;
    for (const auto& b : blocks) {
        if (b.empty()) return false;
        for (auto e : b) {
            if (e >= n || seen[e]) return false;
            seen[e] = 1;
            ++covered;
        }
    }
    return covered == n;
}

mpq_class ExactDist::total() const {
    mpq_class s = 0;
    for (const auto& p : probabilities) s += p;
    return s;
}

mpq_class ExactDist::at(std::int64_t outcome) const {
    for (std::size_t i = 0; i < support.size(); ++i)
        if (support[i] == outcome) return probabilities[i];
    return mpq_class(0);
}

std::string ExactDist::to_json(const std::string& name) const {
    std::ostringstream os;
    os << "{\"name\":\"" << name << "\",\"outcomes\":[";
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (i) os << ",";
        os << "{\"value\":" << support[i] << ",\"num\":\""
           << probabilities[i].get_num().get_str() << "\",\"den\":\""
           << probabilities[i].get_den().get_str() << "\"}";
    }
    os << "]}";
    return os.str();
}

IntervalPartition make_exchangeable(const std::vector<double>& lengths,
                                    RngStream& rng) {
    if (lengths.empty())
        throw std::invalid_argument("make_exchangeable: empty length list");
    double sum = 0.0;
    for (double l : lengths) {
        if (!(l > 0.0))
            throw std::invalid_argument("make_exchangeable: nonpositive length");
        sum += l;
    }
    IntervalPartition ip;
    ip.lengths.reserve(lengths.size());
    for (double l : lengths) ip.lengths.push_back(l / sum);

    const std::size_t n = lengths.size();
    ip.order.resize(n);
    std::iota(ip.order.begin(), ip.order.end(), 0u);
    for (std::size_t i = n; i > 1; --i)
        std::swap(ip.order[i - 1], ip.order[rng.uniform_index(i)]);

    ip.endpoints.resize(n + 1);
    ip.endpoints[0] = 0.0;
    for (std::size_t pos = 0; pos < n; ++pos)
        ip.endpoints[pos + 1] = ip.endpoints[pos] + ip.lengths[ip.order[pos]];
    ip.endpoints[n] = 1.0;
    return ip;
}

namespace {

// position -> rank of the interval placed there (0 = longest, ties by name)
std::vector<std::uint32_t> ranks_by_position(const IntervalPartition& ip) {
    const std::size_t n = ip.size();
    std::vector<std::uint32_t> names(n);
    std::iota(names.begin(), names.end(), 0u);
    std::stable_sort(names.begin(), names.end(),
                     [&](std::uint32_t a, std::uint32_t b) {
                         return ip.lengths[a] > ip.lengths[b];
                     });
    std::vector<std::uint32_t> rank_of_name(n);
    for (std::uint32_t r = 0; r < n; ++r) rank_of_name[names[r]] = r;
    std::vector<std::uint32_t> out(n);
    for (std::size_t pos = 0; pos < n; ++pos)
        out[pos] = rank_of_name[ip.order[pos]];
    return out;
}

CutPartition collect_blocks(const IntervalPartition& ip,
                            const std::vector<std::size_t>& cut_positions) {
    // cut_positions lists the last position of each coarse interval.
    auto rank_at = ranks_by_position(ip);
    CutPartition out;
    out.blocks.n = static_cast<std::uint32_t>(ip.size());
    std::size_t start = 0;
    for (auto last : cut_positions) {
        out.lengths.push_back(ip.endpoints[last + 1] - ip.endpoints[start]);
        out.counts.push_back(static_cast<std::uint32_t>(last - start + 1));
        std::vector<std::uint32_t> block;
        block.reserve(last - start + 1);
        for (std::size_t pos = start; pos <= last; ++pos)
            block.push_back(rank_at[pos]);
        out.blocks.blocks.push_back(std::move(block));
        start = last + 1;
    }
    return out;
}

}  // namespace

CutPartition discrete_d_partition(const IntervalPartition& ip, RngStream& rng) {
    const std::size_t n = ip.size();
    if (n == 0) throw std::invalid_argument("discrete_d_partition: empty");
    std::vector<std::size_t> cuts;
    std::size_t start = 0;
    while (start < n) {
        double v = rng.uniform(ip.endpoints[start], 1.0);
        // First endpoint strictly greater than v; the containing interval's
        // position is one less. Exact endpoint hits fall to the right.
        auto it = std::upper_bound(ip.endpoints.begin() + start + 1,
                                   ip.endpoints.end(), v);
        std::size_t pos = static_cast<std::size_t>(it - ip.endpoints.begin()) - 1;
        if (pos >= n) pos = n - 1;
        cuts.push_back(pos);
        start = pos + 1;
    }
    return collect_blocks(ip, cuts);
}

CutPartition discrete_t_partition(const IntervalPartition& ip, RngStream& rng) {
    const std::size_t n = ip.size();
    if (n == 0) throw std::invalid_argument("discrete_t_partition: empty");
    std::vector<std::size_t> cuts;
    std::size_t start = 0;  // first endpoint position still available is start+1
    while (start < n) {
        std::size_t pick = start + rng.uniform_index(n - start);  // in [start, n)
        cuts.push_back(pick);
        start = pick + 1;
    }
    return collect_blocks(ip, cuts);
}

namespace {

void check_blocks(std::size_t n,
                  const std::vector<std::vector<std::uint32_t>>& blocks) {
    std::vector<std::uint8_t> seen(n, 0);
    std::size_t covered = 0;
    for (const auto& b : blocks) {
        if (b.empty())
            throw std::invalid_argument("block probability: empty block");
        for (auto e : b) {
            if (e >= n || seen[e])
                throw std::invalid_argument(
                    "block probability: blocks must partition the index set");
            seen[e] = 1;
            ++covered;
        }
    }
    if (covered != n)
        throw std::invalid_argument(
            "block probability: blocks must cover the index set");
}

double factorial_d(std::uint32_t k) {
    double f = 1.0;
    for (std::uint32_t i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace

double exact_d_block_probability(
    const std::vector<double>& ranked_lengths,
    const std::vector<std::vector<std::uint32_t>>& ordered_blocks) {
    const std::size_t n = ranked_lengths.size();
    check_blocks(n, ordered_blocks);
    std::vector<double> mass(ordered_blocks.size());
    for (std::size_t j = 0; j < ordered_blocks.size(); ++j) {
        double m = 0.0;
        for (auto e : ordered_blocks[j]) m += ranked_lengths[e];
        mass[j] = m;
    }
    double tail = std::accumulate(mass.begin(), mass.end(), 0.0);
    double p = 1.0 / factorial_d(static_cast<std::uint32_t>(n));
    for (std::size_t j = 0; j < ordered_blocks.size(); ++j) {
        p *= factorial_d(static_cast<std::uint32_t>(ordered_blocks[j].size()) - 1);
        p *= mass[j] / tail;
        tail -= mass[j];
    }
    return p;
}

double exact_d_block_probability_symmetrized(
    const std::vector<double>& ranked_lengths,
    const std::vector<std::vector<std::uint32_t>>& blocks) {
    std::vector<std::size_t> perm(blocks.size());
    std::iota(perm.begin(), perm.end(), 0u);
    double total = 0.0;
    std::vector<std::vector<std::uint32_t>> arranged(blocks.size());
    do {
        for (std::size_t j = 0; j < blocks.size(); ++j)
            arranged[j] = blocks[perm[j]];
        total += exact_d_block_probability(ranked_lengths, arranged);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

double stick_identity_sum(const std::vector<double>& block_lengths) {
    if (block_lengths.empty())
        throw std::invalid_argument("stick_identity_sum: empty");
    std::vector<std::size_t> perm(block_lengths.size());
    std::iota(perm.begin(), perm.end(), 0u);
    double total = 0.0;
    do {
        double tail =
            std::accumulate(block_lengths.begin(), block_lengths.end(), 0.0);
        double p = 1.0;
        for (auto idx : perm) {
            p *= block_lengths[idx] / tail;
            tail -= block_lengths[idx];
        }
        total += p;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

namespace {

mpz_class factorial_z(std::uint32_t k) {
    mpz_class f = 1;
    for (std::uint32_t i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace

mpq_class pt_formula(std::uint32_t n,
                     const std::vector<std::uint32_t>& block_sizes) {
    std::uint32_t total = 0;
    mpz_class num = 1;
    for (auto s : block_sizes) {
        if (s == 0) throw std::invalid_argument("pt_formula: empty block");
        total += s;
        num *= factorial_z(s - 1);
    }
    if (total != n)
        throw std::invalid_argument("pt_formula: sizes do not sum to n");
    mpq_class q(num, factorial_z(n));
    q.canonicalize();
    return q;
}

ExactDist stirling_cycle_dist(std::uint32_t n) {
    if (n == 0) throw std::invalid_argument("stirling_cycle_dist: n >= 1");
    // Signless Stirling first kind: s(m+1,k) = s(m,k-1) + m*s(m,k)
    std::vector<mpz_class> row(n + 1, 0);
    row[0] = 1;  // s(0,0)
    for (std::uint32_t m = 0; m < n; ++m) {
        std::vector<mpz_class> next(n + 1, 0);
        for (std::uint32_t k = 0; k <= m; ++k) {
            if (row[k] == 0) continue;
            next[k + 1] += row[k];
            next[k] += mpz_class(m) * row[k];
        }
        row = std::move(next);
    }
    ExactDist d;
    mpz_class nf = factorial_z(n);
    for (std::uint32_t k = 1; k <= n; ++k) {
        d.support.push_back(k);
        mpq_class q(row[k], nf);
        q.canonicalize();
        d.probabilities.push_back(q);
    }
    return d;
}

ExactDist bernoulli_convolution_dist(std::uint32_t n) {
    if (n == 0)
        throw std::invalid_argument("bernoulli_convolution_dist: n >= 1");
    // K_n = sum of independent Bernoulli(1/i), i = 1..n.
    std::vector<mpq_class> pmf(n + 1, mpq_class(0));
    pmf[0] = 1;
    for (std::uint32_t i = 1; i <= n; ++i) {
        mpq_class p(1, i);
        mpq_class q(i - 1, i);
        for (std::uint32_t k = std::min(i, n); k >= 1; --k)
            pmf[k] = pmf[k] * q + pmf[k - 1] * p;
        pmf[0] = pmf[0] * q;
    }
    ExactDist d;
    for (std::uint32_t k = 1; k <= n; ++k) {
        d.support.push_back(k);
        pmf[k].canonicalize();
        d.probabilities.push_back(pmf[k]);
    }
    return d;
}

ExactDist exact_d_count_distribution(const std::vector<mpq_class>& lengths) {
    const std::uint32_t n = static_cast<std::uint32_t>(lengths.size());
    if (n == 0 || n > 16)
        throw std::invalid_argument(
            "exact_d_count_distribution: n in [1,16] (2^n subset DP)");
    // Given remaining set S, the next emitted block is A with probability
    //   (|A|-1)! (|S|-|A|)!/|S|! * lambda(A)/lambda(S)
    // (orderings of A as an arrangement prefix, uniform pick in the prefix's
    // last interval). The positional factor telescopes over the whole block
    // sequence to 1/n!, so the DP tracks only
    //   F(S, k) = sum_A (|A|-1)! lambda(A)/lambda(S) F(S\A, k-1)
    // and the final masses are divided by n! once.
    for (const auto& l : lengths)
        if (l <= 0)
            throw std::invalid_argument(
                "exact_d_count_distribution: lengths must be positive");
    const std::uint32_t full = (1u << n) - 1u;
    std::vector<mpq_class> mass(full + 1, mpq_class(0));
    for (std::uint32_t s = 1; s <= full; ++s) {
        std::uint32_t low = s & (s - 1);
        std::uint32_t bit_index = 0;
        std::uint32_t bit = s ^ low;
        while ((1u << bit_index) != bit) ++bit_index;
        mass[s] = mass[low] + lengths[bit_index];
    }
    // dp[s][k] over subsets; k <= popcount(s)
    std::vector<std::vector<mpq_class>> dp(full + 1);
    dp[0] = {mpq_class(1)};
    for (std::uint32_t s = 1; s <= full; ++s) {
        const int pc = __builtin_popcount(s);
        dp[s].assign(pc + 1, mpq_class(0));
        // Any nonempty subset of S can be the first emitted block.
        for (std::uint32_t a = s; a != 0; a = (a - 1) & s) {
            const int ka = __builtin_popcount(a);
            mpq_class w = factorial_z(ka - 1) * mass[a] / mass[s];
            const std::uint32_t rest = s ^ a;
            for (std::size_t k = 0; k < dp[rest].size(); ++k) {
                if (dp[rest][k] == 0) continue;
                dp[s][k + 1] += w * dp[rest][k];
            }
        }
    }
    ExactDist d;
    const mpz_class nfact = factorial_z(n);
    for (int k = 1; k <= __builtin_popcount(full); ++k) {
        d.support.push_back(k);
        mpq_class q = dp[full][k] / nfact;
        q.canonicalize();
        d.probabilities.push_back(q);
    }
    return d;
}

ExactDist exact_t_count_distribution(std::uint32_t n) {
    if (n == 0)
        throw std::invalid_argument("exact_t_count_distribution: n >= 1");
    // State: m endpoints remain in (t, 1]. A uniform pick is the last one
    // with probability 1/m (stop), or leaves m' < m endpoints, each m'
    // equally likely.
    std::vector<std::vector<mpq_class>> pmf(n + 1);
    pmf[0] = {};  // unused
    for (std::uint32_t m = 1; m <= n; ++m) {
        pmf[m].assign(m + 1, mpq_class(0));
        pmf[m][1] = mpq_class(1, m);
        for (std::uint32_t rest = 1; rest < m; ++rest)
            for (std::uint32_t k = 1; k < pmf[rest].size(); ++k)
                if (pmf[rest][k] != 0)
                    pmf[m][k + 1] += mpq_class(1, m) * pmf[rest][k];
    }
    ExactDist d;
    for (std::uint32_t k = 1; k <= n; ++k) {
        d.support.push_back(k);
        mpq_class q = pmf[n][k];
        q.canonicalize();
        d.probabilities.push_back(q);
    }
    return d;
}

std::map<std::vector<std::vector<std::uint32_t>>, mpq_class>
exact_d_block_law(const std::vector<mpq_class>& lengths) {
    const std::uint32_t n = static_cast<std::uint32_t>(lengths.size());
    if (n == 0 || n > 10)
        throw std::invalid_argument("exact_d_block_law: n in [1,10]");
    std::map<std::vector<std::vector<std::uint32_t>>, mpq_class> law;
    // Recursive enumeration of ordered block sequences with exact weights.
    std::vector<std::uint32_t> remaining(n);
    std::iota(remaining.begin(), remaining.end(), 0u);

    mpq_class total_mass = 0;
    for (const auto& l : lengths) total_mass += l;

    struct Rec {
        const std::vector<mpq_class>& len;
        std::map<std::vector<std::vector<std::uint32_t>>, mpq_class>& law;
        std::vector<std::vector<std::uint32_t>> seq;

        void go(std::vector<std::uint32_t> rem, mpq_class rem_mass,
                mpq_class weight) {
            if (rem.empty()) {
                auto key = seq;
                for (auto& b : key) std::sort(b.begin(), b.end());
                std::sort(key.begin(), key.end(),
                          [](const auto& a, const auto& b) {
                              return a.front() < b.front();
                          });
                law[key] += weight;
                return;
            }
            const std::uint32_t m = static_cast<std::uint32_t>(rem.size());
            // first block = any nonempty subset of rem
            for (std::uint32_t sub = 1; sub < (1u << m); ++sub) {
                std::vector<std::uint32_t> block, rest;
                mpq_class bmass = 0;
                for (std::uint32_t i = 0; i < m; ++i) {
                    if (sub & (1u << i)) {
                        block.push_back(rem[i]);
                        bmass += len[rem[i]];
                    } else {
                        rest.push_back(rem[i]);
                    }
                }
                const auto bsz = static_cast<std::uint32_t>(block.size());
                mpq_class w = weight * factorial_z(bsz - 1) * bmass / rem_mass;
                seq.push_back(std::move(block));
                go(std::move(rest), rem_mass - bmass, w);
                seq.pop_back();
            }
        }
    } rec{lengths, law, {}};
    rec.go(remaining, total_mass, mpq_class(mpz_class(1), factorial_z(n)));
    for (auto& [key, q] : law) q.canonicalize();
    return law;
}

double kallenberg_local_time(const IntervalPartition& ip, std::uint32_t top_n,
                             double u) {
    const std::size_t n = ip.size();
    if (top_n == 0 || top_n > n)
        throw std::invalid_argument("kallenberg_local_time: bad top_n");
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    auto rank_at = ranks_by_position(ip);
    std::uint32_t hits = 0;
    for (std::size_t pos = 0; pos < n; ++pos)
        if (rank_at[pos] < top_n && ip.endpoints[pos + 1] <= u) ++hits;
    return static_cast<double>(hits) / top_n;
}

Histogram empirical_intensity(const std::vector<std::vector<double>>& lengths,
                              double lo, double hi, std::uint32_t bins) {
    if (!(lo >= 0.0 && hi > lo && bins > 0))
        throw std::invalid_argument("empirical_intensity: bad bin spec");
    Histogram h;
    h.edges.resize(bins + 1);
    const double w = (hi - lo) / bins;
    for (std::uint32_t b = 0; b <= bins; ++b) h.edges[b] = lo + w * b;
    h.counts.assign(bins, 0.0);
    for (const auto& rep : lengths)
        for (double x : rep) {
            if (x < lo || x >= hi) continue;
            auto b = static_cast<std::size_t>((x - lo) / w);
            if (b >= bins) b = bins - 1;
            h.counts[b] += 1.0;
        }
    return h;
}

}  // namespace bridgecut::partitions
