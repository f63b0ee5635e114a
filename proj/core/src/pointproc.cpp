#include "bridgecut/pointproc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "bridgecut/special.hpp"

namespace bridgecut::pointproc {

namespace {

constexpr double kSqrtPi = 1.7724538509055160;

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// CDF of the xi-tilted stable(1/2) value at local time ell: an inverse
// Gaussian with mu = c ell / (2 sqrt(xi)), lambda = c^2 ell^2 / 2, whose
// normalizing constant e^{lambda/mu} equals e^{psi(xi) ell} exactly.
double tilted_half_cdf(double t, double ell, double c, double xi) {
    if (t <= 0.0) return 0.0;
    const double lambda = 0.5 * c * c * ell * ell;
    const double mu = 0.5 * c * ell / std::sqrt(xi);
    const double s = std::sqrt(lambda / t);
    return normal_cdf(s * (t / mu - 1.0)) +
           std::exp(2.0 * lambda / mu) * normal_cdf(-s * (t / mu + 1.0));
}

// e^{-xi t} f_ell(t) for the stable(1/2) density f_ell at Laplace
// normalization E e^{-xi tau_ell} = e^{-ell c sqrt(xi)}.
double tilted_half_density(double t, double ell, double c, double xi) {
    if (t <= 0.0 || ell <= 0.0) return 0.0;
    const double a = 0.25 * c * c * ell * ell;
    const double arg = -xi * t - a / t;
    if (arg < -700.0) return 0.0;
    return 0.5 * c * ell / kSqrtPi * std::pow(t, -1.5) * std::exp(arg);
}

}  // namespace

double MarkedPointSet::sum_x() const {
    double s = 0.0;
    for (const auto& p : points) s += p.first;
    return s;
}

double MarkedPointSet::sum_y() const {
    double s = 0.0;
    for (const auto& p : points) s += p.second;
    return s;
}

std::string MarkedPointSet::to_csv() const {
    std::ostringstream os;
    os << "x,y,order_index\n";
    os.precision(17);
    for (std::size_t i = 0; i < points.size(); ++i)
        os << points[i].first << ',' << points[i].second << ',' << i << '\n';
    return os.str();
}

MarkedPointSet construct_points_D(double xi, const randkit::StableParams& p,
                                  double tail_tolerance, RngStream& rng) {
    if (xi <= 0.0) throw std::invalid_argument("construct_points_D: xi <= 0");
    MarkedPointSet ps;
    ps.order = PointOrder::XBiased;
    ps.xi = xi;
    ps.alpha = p.alpha;
    ps.c = p.c;

    const double g = randkit::sample_gamma(p.alpha, rng) / xi;
    const double ga = std::pow(g, p.alpha);
    randkit::LengthSequence gem = randkit::gem_lengths(p.alpha, tail_tolerance, rng);
    ps.points.reserve(gem.values.size());
    for (double lambda : gem.values) {
        const double tau = randkit::sample_stable(p, 1.0, rng);
        ps.points.emplace_back(g * lambda, ga * std::pow(lambda / tau, p.alpha));
    }
    ps.dropped_mass = g * gem.residual_mass;
    return ps;
}

MarkedPointSet reorder_biased(const MarkedPointSet& ps, Coord coordinate,
                              RngStream& rng) {
    if (ps.points.empty())
        throw std::invalid_argument("reorder_biased: empty point set");
    std::vector<double> w(ps.points.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = coordinate == Coord::X ? ps.points[i].first : ps.points[i].second;
    const std::vector<std::size_t> perm = randkit::size_biased_order(w, rng);
    MarkedPointSet out = ps;
    for (std::size_t i = 0; i < perm.size(); ++i) out.points[i] = ps.points[perm[i]];
    out.order = coordinate == Coord::X ? PointOrder::XBiased : PointOrder::YBiased;
    return out;
}

std::vector<statlab::StatReport> palm_checks(
    const std::vector<MarkedPointSet>& samples, std::uint64_t seed) {
    std::vector<statlab::StatReport> reports;
    std::vector<const MarkedPointSet*> xb, yb;
    for (const auto& s : samples) {
        if (s.order == PointOrder::XBiased) xb.push_back(&s);
        if (s.order == PointOrder::YBiased) yb.push_back(&s);
    }
    constexpr std::size_t kPower = 100000;

    if (!xb.empty()) {
        // Under X-biased order (Y_1, Sigma_Y - Y_1) must satisfy the
        // size-biased-pick identity; with rho_Y(y) = y^{-1} e^{-psi y} and
        // f_Y = Exp(psi) that collapses to: Sigma_Y ~ Exp(psi) and
        // Y_1 | Sigma_Y ~ Uniform(0, Sigma_Y). Equal-probability 8x8 grid.
        const double psi = randkit::laplace_exponent(
            {xb.front()->alpha, xb.front()->c}, xb.front()->xi);
        std::vector<std::uint64_t> counts(64, 0);
        for (const auto* s : xb) {
            const double sy = s->sum_y();
            const double u = s->points.front().second / sy;
            const auto row = static_cast<std::size_t>(std::min(
                7.0, 8.0 * (1.0 - std::exp(-psi * sy))));
            const auto col = static_cast<std::size_t>(std::min(7.0, 8.0 * u));
            ++counts[8 * row + col];
        }
        const std::vector<double> probs(64, 1.0 / 64.0);
        const auto cs = statlab::chi_square_counts(counts, probs);
        reports.push_back(statlab::report_pvalue(
            "palm_xbiased_y1_size_biased", cs.statistic, cs.p_value, 0.01,
            xb.size(), seed, "8x8 grid, dof=" + std::to_string(cs.dof)));
        if (xb.size() < kPower) {
            reports.push_back(statlab::report_threshold(
                "palm_xbiased_power", static_cast<double>(xb.size()),
                static_cast<double>(kPower) - 1.0, xb.size(), seed,
                "fewer than 1e5 X-biased replicates"));
            reports.back().decision = statlab::Decision::Warn;
        }
    }

    if (!yb.empty()) {
        // Under Y-biased order the X-sequence is *not* X-biased:
        // E[X_1 / Sigma_X] is 1/2 (the first coordinate behaves like the
        // second partition's first length), not the 2/3 of X-biased order.
        std::vector<double> fr(yb.size());
        for (std::size_t i = 0; i < yb.size(); ++i)
            fr[i] = yb[i]->points.front().first / yb[i]->sum_x();
        const auto ms = statlab::mean_with_se(fr);
        const double z_half = (ms.mean - 0.5) / ms.se;
        reports.push_back(statlab::report_pvalue(
            "palm_ybiased_mean_is_half", std::fabs(z_half),
            std::erfc(std::fabs(z_half) / std::sqrt(2.0)), 0.01, yb.size(),
            seed, "mean " + std::to_string(ms.mean)));
        const double z_td = (2.0 / 3.0 - ms.mean) / ms.se;
        reports.push_back(statlab::report_must_reject(
            "palm_ybiased_rejects_two_thirds", z_td,
            0.5 * std::erfc(z_td / std::sqrt(2.0)), 0.01, yb.size(), seed,
            "z against the X-biased mean 2/3"));
        if (yb.size() < kPower) {
            reports.push_back(statlab::report_threshold(
                "palm_ybiased_power", static_cast<double>(yb.size()),
                static_cast<double>(kPower) - 1.0, yb.size(), seed,
                "fewer than 1e5 Y-biased replicates"));
            reports.back().decision = statlab::Decision::Warn;
        }
    }
    return reports;
}

std::vector<statlab::StatReport> verify_lemma_gp(double xi,
                                                 const randkit::StableParams& p,
                                                 double jump_cutoff,
                                                 std::size_t reps,
                                                 RngStream& rng) {
    if (xi <= 0.0 || reps == 0)
        throw std::invalid_argument("verify_lemma_gp: bad arguments");
    const double alpha = p.alpha, c = p.c;
    const double psi = randkit::laplace_exponent(p, xi);
    const double gam1a = std::tgamma(1.0 - alpha);
    const double mean_g = alpha / xi;  // E Sigma_X for G ~ Gamma(alpha)/xi

    // mean of the discarded sub-cutoff jumps per unit local time
    auto small_mean = [&](double d) {
        return c * alpha / gam1a * std::pow(d, 1.0 - alpha) / (1.0 - alpha);
    };
    double delta = jump_cutoff;
    if (delta <= 0.0) {
        // discarded mean over E[L] local time below 1e-4 of E[G]
        const double target = 1e-4 * mean_g * psi * gam1a * (1.0 - alpha) /
                              (c * alpha);
        delta = std::pow(target, 1.0 / (1.0 - alpha));
    }
    std::vector<statlab::StatReport> reports;
    const double bias = small_mean(delta) / psi / mean_g;
    if (bias > 1e-3)
        reports.push_back(statlab::report_threshold(
            "gp_cutoff_bias", bias, 1e-3, reps, rng.root_seed(),
            "warn: cutoff discards too much jump mass"));

    const double rate = c / gam1a * std::pow(delta, -alpha);
    const double comp = small_mean(delta);

    std::vector<double> ls(reps), gs(reps), tauus(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        double ell = 0.0, g = 0.0, tauu = 0.0, l = 0.0;
        bool found = false;
        while (!found || ell <= 1.0) {
            ell += rng.exponential(rate);
            const double jump = delta * std::pow(rng.uniform01(), -1.0 / alpha);
            if (rng.uniform01() < -std::expm1(-xi * jump)) {
                if (!found) {
                    l = ell;
                    found = true;
                }
            } else {
                if (!found) g += jump;
                if (ell <= 1.0) tauu += jump;
            }
        }
        ls[r] = l;
        gs[r] = g + comp * l;
        tauus[r] = tauu + comp;
    }

    {
        auto ks = statlab::ks_one_sample(
            ls, [&](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-psi * x); });
        reports.push_back(statlab::report_pvalue(
            "gp_local_time_exponential", ks.statistic, ks.p_value, 0.01, reps,
            rng.root_seed(), "L vs Exp(c xi^alpha)"));
    }

    const bool half = std::fabs(alpha - 0.5) < 1e-12;
    if (half) {
        // (G, L) against psi e^{-xi t} f_l(t) dt dl on a 6x6 grid whose
        // edges are the exact marginal quantiles (L exponential, G gamma);
        // interior cells by quadrature, outer row/column by completing the
        // exact 1/6 marginals.
        std::array<double, 7> le{}, te{};
        for (int i = 1; i < 6; ++i) {
            le[i] = -std::log1p(-i / 6.0) / psi;
            te[i] = special::gamma_quantile(i / 6.0, alpha, xi);
        }
        std::array<std::array<double, 6>, 6> probs{};
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j)
                probs[i][j] = special::integrate(
                    [&](double ell) {
                        return psi * std::exp(-psi * ell) *
                               special::integrate(
                                   [&](double t) {
                                       return tilted_half_density(t, ell, c, xi) *
                                              std::exp(psi * ell);
                                   },
                                   te[j], te[j + 1], 1e-11);
                    },
                    le[i], le[i + 1], 1e-9);
        for (int i = 0; i < 5; ++i) {
            double row = 0.0;
            for (int j = 0; j < 5; ++j) row += probs[i][j];
            probs[i][5] = 1.0 / 6.0 - row;
        }
        for (int j = 0; j < 6; ++j) {
            double col = 0.0;
            for (int i = 0; i < 5; ++i) col += probs[i][j];
            probs[5][j] = 1.0 / 6.0 - col;
        }
        std::vector<std::uint64_t> counts(36, 0);
        for (std::size_t r = 0; r < reps; ++r) {
            std::size_t i = 0, j = 0;
            while (i < 5 && ls[r] > le[i + 1]) ++i;
            while (j < 5 && gs[r] > te[j + 1]) ++j;
            ++counts[6 * i + j];
        }
        std::vector<double> flat(36);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) flat[6 * i + j] = probs[i][j];
        const auto cs = statlab::chi_square_counts(counts, flat);
        reports.push_back(statlab::report_pvalue(
            "gp_joint_g_l_chi_square", cs.statistic, cs.p_value, 0.01, reps,
            rng.root_seed(), "6x6 grid, dof=" + std::to_string(cs.dof)));

        auto ks = statlab::ks_one_sample(tauus, [&](double x) {
            return tilted_half_cdf(x, 1.0, c, xi);
        });
        reports.push_back(statlab::report_pvalue(
            "gp_unmarked_sum_tilted_law", ks.statistic, ks.p_value, 0.01, reps,
            rng.root_seed(), "tau_u_1 vs e^{psi - xi t} f_1(t)"));
    }

    {
        // E e^{-tau_u_1} = e^{psi(xi) - psi(1 + xi)}
        std::vector<double> lap(reps);
        for (std::size_t r = 0; r < reps; ++r) lap[r] = std::exp(-tauus[r]);
        const auto ms = statlab::mean_with_se(lap);
        const double want =
            std::exp(psi - randkit::laplace_exponent(p, 1.0 + xi));
        const double z = (ms.mean - want) / ms.se;
        reports.push_back(statlab::report_pvalue(
            "gp_unmarked_sum_laplace", std::fabs(z),
            std::erfc(std::fabs(z) / std::sqrt(2.0)), 0.01, reps, rng.root_seed(),
            "mean " + std::to_string(ms.mean) + " want " +
                std::to_string(want)));
    }
    return reports;
}

StableSumSample sample_stable_sum(const randkit::StableParams& p,
                                  double tail_tolerance, RngStream& rng) {
    randkit::LengthSequence gem =
        randkit::gem_lengths(p.alpha, tail_tolerance, rng);
    StableSumSample out;
    double first = 0.0;
    for (std::size_t j = 0; j < gem.values.size(); ++j) {
        const double sigma = randkit::sample_stable(p, 1.0, rng);
        const double term = std::pow(gem.values[j] / sigma, p.alpha);
        if (j == 0) first = term;
        out.total += term;
    }
    out.first_fraction = first / out.total;
    return out;
}

}  // namespace bridgecut::pointproc
