#include "bridgecut/bridge.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bridgecut::bridge {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Grid zero set: exact zeros, plus sign-bit changes assigned to the earlier
// grid point. Signed zeros carry the side they stand on, which keeps the
// detection identical when a fragment replaces a crossing sample with the
// zero it represents.
std::vector<std::size_t> grid_zeros(const std::vector<double>& v) {
    std::vector<std::size_t> z;
    const std::size_t m = v.size() - 1;
    for (std::size_t i = 0; i <= m; ++i) {
        if (v[i] == 0.0 ||
            (i < m && std::signbit(v[i]) != std::signbit(v[i + 1]))) {
            z.push_back(i);
        }
    }
    return z;
}

// A grid walk undercounts excursions longer than eps = K dt in two
// measured ways: a per-count detection loss ~ 0.44/K, and a flat loss of
// roughly one excursion at the path ends (~0.84 counts when both ends are
// zeros, ~1.09 for free motion). Both were fitted against the exact
// local-time means E L = sqrt(pi/2), sqrt(2/pi) at 10^5 replicates over
// K in {8, 16, 32} and m in {2^14, 2^16}; every cell of that grid matches
// the fit within one standard error, and being additive the edge term
// corrects conditionally on L, not just on average.
constexpr double kGridLoss = 0.442;
constexpr double kEdgeCountsZeroEnded = 0.844;
constexpr double kEdgeCountsMotion = 1.091;

double edge_counts(PathKind kind) {
    return kind == PathKind::Motion ? kEdgeCountsMotion : kEdgeCountsZeroEnded;
}

// Excursion-count weight: (Gamma(1-alpha)/c) * eps^alpha at the Brownian
// normalization alpha = 1/2, c = sqrt(2), i.e. sqrt(pi/2) * sqrt(eps),
// inflated by the per-count detection loss.
double count_weight(double eps, double dt) {
    const double raw = std::sqrt(kPi / 2.0) * std::sqrt(eps);
    return raw / (1.0 - kGridLoss * (dt / eps));
}

}  // namespace

double ExcursionSet::total_length() const {
    double s = 0.0;
    for (double x : lengths) s += x;
    return s;
}

DiscretePath simulate_bridge(std::size_t m, RngStream& rng) {
    if (m < 2) throw std::invalid_argument("simulate_bridge: m must be >= 2");
    DiscretePath p;
    p.m = m;
    p.dt = 1.0 / static_cast<double>(m);
    p.kind = PathKind::Bridge;
    p.values.resize(m + 1);
    const double sd = std::sqrt(p.dt);
    p.values[0] = 0.0;
    for (std::size_t i = 1; i <= m; ++i)
        p.values[i] = p.values[i - 1] + sd * rng.normal();
    const double wm = p.values[m];
    for (std::size_t i = 1; i <= m; ++i)
        p.values[i] -= (static_cast<double>(i) / static_cast<double>(m)) * wm;
    // the i = m term subtracts wm exactly, so the path ends at 0.0
    return p;
}

DiscretePath simulate_motion(std::size_t m, RngStream& rng) {
    if (m < 2) throw std::invalid_argument("simulate_motion: m must be >= 2");
    DiscretePath p;
    p.m = m;
    p.dt = 1.0 / static_cast<double>(m);
    p.kind = PathKind::Motion;
    p.values.resize(m + 1);
    const double sd = std::sqrt(p.dt);
    p.values[0] = 0.0;
    for (std::size_t i = 1; i <= m; ++i)
        p.values[i] = p.values[i - 1] + sd * rng.normal();
    return p;
}

ExcursionSet excursions(const DiscretePath& path) {
    ExcursionSet ex;
    ex.zeros = grid_zeros(path.values);
    for (std::size_t k = 0; k + 1 < ex.zeros.size(); ++k) {
        const std::size_t a = ex.zeros[k];
        const std::size_t b = ex.zeros[k + 1];
        // single-cell gaps between zeros belong to the zero set
        if (b - a < 2) continue;
        ex.intervals.emplace_back(a, b);
        ex.lengths.push_back(static_cast<double>(b - a) * path.dt);
    }
    return ex;
}

double default_epsilon(double dt) {
    if (dt <= 0.0) throw std::invalid_argument("default_epsilon: dt <= 0");
    return 16.0 * dt;
}

LocalTimeProfile local_time_profile(const DiscretePath& path, double epsilon,
                                    CountingMode mode) {
    if (epsilon < path.dt)
        throw std::invalid_argument("local_time_profile: epsilon below grid step");
    LocalTimeProfile lp;
    lp.epsilon = epsilon;
    lp.alpha = 0.5;
    lp.c = std::sqrt(2.0);
    lp.dt = path.dt;
    lp.weight = count_weight(epsilon, path.dt);
    const double w = lp.weight;

    std::vector<double> diff(path.m + 1, 0.0);
    const ExcursionSet ex = excursions(path);
    std::vector<std::pair<std::size_t, std::size_t>> counted;
    for (std::size_t k = 0; k < ex.intervals.size(); ++k)
        if (ex.lengths[k] > epsilon) counted.push_back(ex.intervals[k]);
    const double edge =
        ex.zeros.empty() ? 0.0 : 0.5 * edge_counts(path.kind) * w;
    if (mode == CountingMode::Symmetrized && !counted.empty()) {
        // Local time accrues on the zero-set gaps between counted
        // excursions, never inside them, so each excursion's mass is split
        // between its two flanking gaps and an atom is committed at the
        // index that ENDS its gap (the next excursion's first interior
        // cell, or the last zero for the terminal gap).  The inversion
        // spreads a jump across the flat stretch below it, which is then
        // exactly the gap the mass belongs to.  The end-of-path losses
        // fold into the first and last gap, keeping the profile symmetric
        // under time reversal.
        diff[counted.front().first + 1] += 0.5 * w + edge;
        for (std::size_t k = 1; k < counted.size(); ++k)
            diff[counted[k].first + 1] += w;
        diff[std::max<std::size_t>(ex.zeros.back(), 1)] += 0.5 * w + edge;
    } else if (mode == CountingMode::Symmetrized && !ex.zeros.empty()) {
        // nothing counted: only the end losses remain
        diff[std::min<std::size_t>(ex.zeros.front() + 1, path.m)] += edge;
        diff[std::max<std::size_t>(ex.zeros.back(), 1)] += edge;
    } else if (mode != CountingMode::Symmetrized) {
        for (const auto& [a, b] : counted) diff[b] += w;
        if (!ex.zeros.empty()) {
            diff[std::min<std::size_t>(ex.zeros.front() + 1, path.m)] += edge;
            diff[std::max<std::size_t>(ex.zeros.back(), 1)] += edge;
        }
    }
    lp.cumulative.resize(path.m + 1);
    double acc = 0.0;
    for (std::size_t i = 0; i <= path.m; ++i) {
        acc += diff[i];
        lp.cumulative[i] = acc;
    }
    lp.zeros = ex.zeros;
    return lp;
}

Fragment standardize_fragment(const DiscretePath& path, std::size_t i0,
                              std::size_t i1) {
    if (i0 >= i1 || i1 > path.m)
        throw std::invalid_argument("standardize_fragment: bad index range");
    Fragment f;
    f.start_index = i0;
    f.end_index = i1;
    f.start = static_cast<double>(i0) * path.dt;
    f.end = static_cast<double>(i1) * path.dt;
    f.length = static_cast<double>(i1 - i0) * path.dt;
    const std::size_t mf = i1 - i0;
    f.path.m = mf;
    f.path.dt = 1.0 / static_cast<double>(mf);
    f.path.kind = PathKind::Fragment;
    f.path.values.resize(mf + 1);
    const double scale = 1.0 / std::sqrt(f.length);
    for (std::size_t j = 0; j <= mf; ++j)
        f.path.values[j] = path.values[i0 + j] * scale;
    // cuts are zeros of the source path; commit the endpoint samples to
    // signed zeros so the fragment's zero set matches the source's exactly
    f.path.values[0] = std::copysign(0.0, f.path.values[0]);
    f.path.values[mf] = std::copysign(0.0, f.path.values[mf]);
    return f;
}

namespace {

// Shared inversion kernel, in grid-index units.  A jump of the cumulative
// profile at index j carries the local time accrued over the flat stretch
// below it, so a level landing inside that jump interpolates across the
// stretch instead of piling onto the jump index; always exiting at the
// jump would skew every cut toward the right end of its zero-set gap.
// Levels that tie a lattice value exactly (simple fractions of the total
// do) sit on a whole flat stretch and take its midpoint.
double inverse_position(const std::vector<double>& cum, double target) {
    // Simple fractions of the total (1/2 in particular) land on the count
    // lattice up to accumulation roundoff; a fuzzy band turns those into
    // honest ties so they take the flat stretch's midpoint instead of an
    // arbitrary end.  Jumps are >= 0.4 count, far above the band.
    const double tol = 1e-9 * std::max(1.0, cum.back());
    auto lo = std::lower_bound(cum.begin(), cum.end(), target - tol);
    if (lo == cum.end()) return static_cast<double>(cum.size() - 1);
    auto hi = std::upper_bound(cum.begin(), cum.end(), target + tol);
    if (hi != lo)
        return 0.5 * (static_cast<double>(lo - cum.begin()) +
                      static_cast<double>(hi - cum.begin()) - 1.0);
    const std::size_t j = static_cast<std::size_t>(lo - cum.begin());
    // j >= 1: cum[0] = 0 <= target would have tied above
    const double base = cum[j - 1];
    auto s_it = std::lower_bound(cum.begin(), cum.begin() +
                                     static_cast<std::ptrdiff_t>(j), base);
    const double s = static_cast<double>(s_it - cum.begin());
    const double frac =
        std::clamp((target - base) / (cum[j] - base), 0.0, 1.0);
    return s + frac * (static_cast<double>(j - 1) - s);
}

// Nearest element of the (sorted) grid-zero set to a continuous position.
std::size_t snap_to_zero(const std::vector<std::size_t>& zeros, double pos) {
    auto zit = std::lower_bound(zeros.begin(), zeros.end(),
                                static_cast<std::size_t>(pos + 0.5));
    if (zit == zeros.end()) return zeros.back();
    if (zit == zeros.begin()) return zeros.front();
    return (static_cast<double>(*zit) - pos <
            pos - static_cast<double>(*(zit - 1)))
               ? *zit
               : *(zit - 1);
}

std::size_t inverse_cut_index(const LocalTimeProfile& profile,
                              double target) {
    const double pos = inverse_position(profile.cumulative, target);
    if (profile.zeros.empty() ||
        pos >= static_cast<double>(profile.cumulative.size() - 1))
        return profile.cumulative.size() - 1;
    return snap_to_zero(profile.zeros, pos);
}

}  // namespace

double inverse_local_time(const LocalTimeProfile& profile, double fraction) {
    const double target = fraction * profile.total();
    return static_cast<double>(inverse_cut_index(profile, target)) *
           profile.dt;
}

std::vector<Fragment> d_partition(const DiscretePath& path, RngStream& rng,
                                  const LocalTimeProfile* profile) {
    const std::vector<std::size_t> zeros = grid_zeros(path.values);
    if (zeros.empty() || zeros.back() != path.m)
        throw std::invalid_argument("d_partition: path does not end at a zero");
    const double T = path.duration();
    std::vector<Fragment> out;
    std::size_t start = 0;
    while (start < path.m) {
        const double v = rng.uniform(static_cast<double>(start) * path.dt, T);
        // first zero at a time >= v; v > start*dt a.s., so it exceeds start
        auto it = std::lower_bound(
            zeros.begin(), zeros.end(), v,
            [&](std::size_t z, double val) { return static_cast<double>(z) * path.dt < val; });
        std::size_t cut = (it == zeros.end()) ? path.m : *it;
        if (cut <= start) {  // exact tie with the current cut: step forward
            auto zi = std::upper_bound(zeros.begin(), zeros.end(), start);
            cut = (zi == zeros.end()) ? path.m : *zi;
        }
        // a remainder under two cells is below resolution: absorb it
        if (path.m - cut < 2) cut = path.m;
        Fragment f = standardize_fragment(path, start, cut);
        if (profile) f.local_time = profile->increment(start, cut);
        out.push_back(std::move(f));
        start = cut;
    }
    return out;
}

std::vector<Fragment> t_partition(const DiscretePath& path,
                                  const LocalTimeProfile& profile,
                                  RngStream& rng, double tail_tolerance) {
    if (profile.cumulative.size() != path.m + 1)
        throw std::invalid_argument("t_partition: profile/path size mismatch");
    const double total = profile.total();
    if (!(total > 0.0))
        throw std::runtime_error(
            "t_partition: zero total local time; grid too coarse for epsilon");

    std::vector<Fragment> out;
    std::size_t start = 0;
    double residual = 1.0;
    while (true) {
        residual *= 1.0 - rng.uniform01();
        const double target = (1.0 - residual) * total;
        const std::size_t cut = inverse_cut_index(profile, target);
        if (cut >= path.m) {
            out.push_back(standardize_fragment(path, start, path.m));
            out.back().local_time = profile.increment(start, path.m);
            break;
        }
        if (cut > start) {
            // equal cuts happen when two sticks land in one jump of the
            // discrete profile; the mass simply merges into one fragment
            Fragment f = standardize_fragment(path, start, cut);
            f.local_time = profile.increment(start, cut);
            out.push_back(std::move(f));
            start = cut;
        }
        if (residual < tail_tolerance) {
            out.push_back(standardize_fragment(path, start, path.m));
            out.back().local_time = profile.increment(start, path.m);
            break;
        }
    }
    return out;
}

PseudoBridgeResult simulate_pseudo_bridge(std::size_t m, RngStream& rng) {
    if (m < 64)
        throw std::invalid_argument("simulate_pseudo_bridge: m must be >= 64");
    const double pi = kPi;
    const double md = static_cast<double>(m);

    // Excursion lengths of the motion up to tau_1 are the jumps of the
    // 1/2-stable subordinator over unit local time. The tail of the Levy
    // measure is N(x) = sqrt(2/(pi x)), so the jumps in decreasing order are
    // 2/(pi Gamma_i^2) at unit-rate Poisson arrivals Gamma_i. Jumps too
    // short to span a grid cell go into an aggregate dust term; given the
    // last arrival, the dust is a fresh small-jump subordinator whose mean
    // 2/(pi Gamma) dominates its sd, so matched-moment Gaussian noise
    // represents it.
    std::vector<double> jumps;
    double gamma = 0.0;
    double total = 0.0;
    double dust = 0.0;
    const std::size_t budget =
        4096 + 64 * static_cast<std::size_t>(std::sqrt(8.0 * md));
    for (;;) {
        gamma += rng.exponential();
        const double lam = 2.0 / (pi * gamma * gamma);
        if (lam * (8.0 * md) < total + lam) {
            // lam and everything after it is dust
            const double mean = lam + 2.0 / (pi * gamma);
            const double sd =
                std::sqrt(4.0 / (3.0 * pi * pi * gamma * gamma * gamma));
            dust = std::max(0.0, mean + sd * rng.normal());
            break;
        }
        jumps.push_back(lam);
        total += lam;
        if (jumps.size() > budget)
            throw std::runtime_error(
                "simulate_pseudo_bridge: jump budget exceeded");
    }
    const double tau = total + dust;
    const double dt = tau / md;

    // integer cell counts by largest remainder, so they sum to m exactly
    const std::size_t k = jumps.size();
    std::vector<std::size_t> cells(k, 0);
    std::vector<std::pair<double, std::size_t>> rem;
    rem.reserve(k + 1);
    std::size_t used = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const double c = jumps[i] / dt;
        cells[i] = static_cast<std::size_t>(c);
        used += cells[i];
        rem.emplace_back(c - std::floor(c), i);
    }
    std::size_t dust_cells = static_cast<std::size_t>(dust / dt);
    used += dust_cells;
    rem.emplace_back(dust / dt - std::floor(dust / dt), k);
    std::sort(rem.begin(), rem.end(), std::greater<>());
    for (std::size_t j = 0; used < m; ++j) {
        const std::size_t idx = rem[j % rem.size()].second;
        if (idx == k)
            ++dust_cells;
        else
            ++cells[idx];
        ++used;
    }
    // sub-cell excursions are part of the grid zero set
    for (std::size_t i = 0; i < k; ++i) {
        if (cells[i] <= 1) {
            dust_cells += cells[i];
            cells[i] = 0;
        }
    }

    // uniform left-to-right order: excursions arrive at i.i.d. uniform
    // local-time marks, so any interleaving with the dust cells is a
    // uniform shuffle
    std::vector<std::uint32_t> items;
    items.reserve(k + dust_cells);
    for (std::size_t i = 0; i < k; ++i)
        if (cells[i] >= 2) items.push_back(static_cast<std::uint32_t>(i));
    const std::uint32_t kDust = 0xFFFFFFFFu;
    for (std::size_t i = 0; i < dust_cells; ++i) items.push_back(kDust);
    for (std::size_t i = items.size(); i > 1; --i)
        std::swap(items[i - 1], items[rng.uniform_index(i)]);

    PseudoBridgeResult res;
    res.path.m = m;
    res.path.dt = 1.0 / md;
    res.path.kind = PathKind::PseudoBridge;
    res.path.values.assign(m + 1, 0.0);

    // each excursion is sign * sqrt(length) * (normalized excursion), and a
    // normalized excursion is the radius of a 3-d Brownian bridge; emitting
    // values pre-divided by sqrt(tau) makes the cell scale sqrt(n/m)
    std::vector<double> bx, by, bz;
    std::size_t pos = 0;
    std::size_t count16 = 0;
    for (std::uint32_t id : items) {
        if (id == kDust) {
            res.path.values[++pos] = 0.0;
            continue;
        }
        const std::size_t n = cells[id];
        if (n > 16) ++count16;
        bx.assign(n + 1, 0.0);
        by.assign(n + 1, 0.0);
        bz.assign(n + 1, 0.0);
        for (std::size_t j = 1; j <= n; ++j) {
            bx[j] = bx[j - 1] + rng.normal();
            by[j] = by[j - 1] + rng.normal();
            bz[j] = bz[j - 1] + rng.normal();
        }
        const double sign = rng.uniform01() < 0.5 ? -1.0 : 1.0;
        // sqrt(n dt / tau) for the excursion scale times 1/sqrt(n) to
        // standardize the unit-step walk bridge
        const double scale = sign / std::sqrt(md);
        const double nd = static_cast<double>(n);
        for (std::size_t j = 1; j < n; ++j) {
            const double fx = bx[j] - (static_cast<double>(j) / nd) * bx[n];
            const double fy = by[j] - (static_cast<double>(j) / nd) * by[n];
            const double fz = bz[j] - (static_cast<double>(j) / nd) * bz[n];
            res.path.values[pos + j] =
                scale * std::sqrt(fx * fx + fy * fy + fz * fz);
        }
        pos += n;
        res.path.values[pos] = 0.0;
    }
    if (pos != m)
        throw std::logic_error("simulate_pseudo_bridge: cell accounting");

    res.tau = tau;
    res.stopped_level = 1.0;
    res.epsilon_ratio = 16.0;
    res.weight = count_weight(16.0 * dt, dt);
    res.excursion_count = count16;
    return res;
}

DiscretePath path_swap(const DiscretePath& x, double u) {
    if (!(u > 0.0 && u < x.duration()))
        throw std::invalid_argument("path_swap: u outside the path interior");
    const std::vector<std::size_t> zeros = grid_zeros(x.values);
    if (zeros.empty()) throw std::invalid_argument("path_swap: no zeros");
    const double pos = u / x.dt;
    // g: last zero at or before u; d: first zero at or after u
    auto it = std::lower_bound(zeros.begin(), zeros.end(), pos,
                               [](std::size_t z, double p) {
                                   return static_cast<double>(z) < p;
                               });
    std::size_t d, g;
    if (it == zeros.end()) {
        d = x.m;
        g = zeros.back();
    } else if (static_cast<double>(*it) == pos || it == zeros.begin()) {
        d = *it;
        g = *it;
    } else {
        d = *it;
        g = *(it - 1);
    }

    DiscretePath y;
    y.m = x.m;
    y.dt = x.dt;
    y.kind = x.kind;
    if (g >= d) {  // u sits on the zero set: nothing to move
        y.values = x.values;
        return y;
    }
    y.values.reserve(x.m + 1);
    // x[0,g], then x[d,end], then the straddling excursion x[g,d]; each
    // sample index is used exactly once, so value histograms are preserved
    // bit for bit
    y.values.insert(y.values.end(), x.values.begin(),
                    x.values.begin() + static_cast<std::ptrdiff_t>(g + 1));
    y.values.insert(y.values.end(),
                    x.values.begin() + static_cast<std::ptrdiff_t>(d + 1),
                    x.values.end());
    y.values.insert(y.values.end(),
                    x.values.begin() + static_cast<std::ptrdiff_t>(g + 1),
                    x.values.begin() + static_cast<std::ptrdiff_t>(d + 1));
    return y;
}

double simulate_bessel3_hitting(std::size_t m, RngStream& rng) {
    if (m < 2)
        throw std::invalid_argument("simulate_bessel3_hitting: m must be >= 2");
    const double dt = 1.0 / static_cast<double>(m);
    const double sd = std::sqrt(dt);
    const std::size_t max_steps = 512 * m;
    double x = 0.0, y = 0.0, z = 0.0, rprev = 0.0;
    for (std::size_t step = 1; step <= max_steps; ++step) {
        x += sd * rng.normal();
        y += sd * rng.normal();
        z += sd * rng.normal();
        const double r = std::sqrt(x * x + y * y + z * z);
        const double t = static_cast<double>(step) * dt;
        if (r >= 1.0) {
            const double frac = (1.0 - rprev) / (r - rprev);
            return t - dt + frac * dt;
        }
        // the radius is locally a Brownian motion near the level; correct
        // for crossings inside the step with the standard bridge probability
        const double pcross = std::exp(-2.0 * (1.0 - rprev) * (1.0 - r) / dt);
        if (rng.uniform01() < pcross) return t - 0.5 * dt;
        rprev = r;
    }
    throw std::runtime_error("simulate_bessel3_hitting: step budget exceeded");
}

std::vector<std::uint64_t> occupation_histogram(const DiscretePath& path,
                                                const std::vector<double>& edges) {
    if (edges.size() < 2)
        throw std::invalid_argument("occupation_histogram: need >= 2 edges");
    std::vector<std::uint64_t> counts(edges.size() - 1, 0);
    for (double val : path.values) {
        auto it = std::upper_bound(edges.begin(), edges.end(), val);
        if (it == edges.begin() || it == edges.end()) continue;
        ++counts[static_cast<std::size_t>(it - edges.begin()) - 1];
    }
    return counts;
}

double path_max_abs(const DiscretePath& path) {
    double mx = 0.0;
    for (double v : path.values) mx = std::max(mx, std::fabs(v));
    return mx;
}

std::size_t last_zero_index(const DiscretePath& path) {
    const std::vector<std::size_t> z = grid_zeros(path.values);
    return z.empty() ? 0 : z.back();
}

}  // namespace bridgecut::bridge
