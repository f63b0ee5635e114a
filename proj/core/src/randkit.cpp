#include "bridgecut/randkit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "bridgecut/special.hpp"

namespace bridgecut::randkit {

namespace {
constexpr double kPi = std::numbers::pi;
}

StableParams brownian_params() { return {0.5, std::numbers::sqrt2}; }

double laplace_exponent(const StableParams& p, double xi) {
    return p.c * std::pow(xi, p.alpha);
}

double LengthSequence::total() const {
    return std::accumulate(values.begin(), values.end(), 0.0) + residual_mass;
}

double sample_gamma(double s, RngStream& rng) {
    if (s <= 0.0) throw std::invalid_argument("sample_gamma: s must be > 0");
    // Marsaglia-Tsang squeeze; shapes below 1 are boosted by one and
    // corrected with a power of an independent uniform.
    double boost = 1.0;
    if (s < 1.0) {
        boost = std::pow(rng.uniform01(), 1.0 / s);
        s += 1.0;
    }
    const double d = s - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        double u = rng.uniform01();
        double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return boost * d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v)))
            return boost * d * v;
    }
}

double sample_beta(double a, double b, RngStream& rng) {
    if (a <= 0.0 || b <= 0.0)
        throw std::invalid_argument("sample_beta: parameters must be > 0");
    double ga = sample_gamma(a, rng);
    double gb = sample_gamma(b, rng);
    return ga / (ga + gb);
}

double sample_stable(const StableParams& p, double level, RngStream& rng) {
    if (p.alpha <= 0.0 || p.alpha >= 1.0 || p.c <= 0.0)
        throw std::invalid_argument("sample_stable: bad StableParams");
    if (level <= 0.0)
        throw std::invalid_argument("sample_stable: level must be > 0");
    const double a = p.alpha;
    // Chambers-Mallows-Stuck for the standard one-sided stable S with
    // E exp(-u S) = exp(-u^alpha); then tau_ell = (ell c)^{1/alpha} S.
    double U = kPi * rng.uniform01();
    double E = rng.exponential();
    double S = std::sin(a * U) / std::pow(std::sin(U), 1.0 / a) *
               std::pow(std::sin((1.0 - a) * U) / E, (1.0 - a) / a);
    return std::pow(level * p.c, 1.0 / a) * S;
}

LengthSequence gem_lengths(double theta, double tail_tolerance,
                           RngStream& rng) {
    if (theta <= 0.0)
        throw std::invalid_argument("gem_lengths: theta must be > 0");
    if (tail_tolerance <= 0.0 || tail_tolerance >= 1.0)
        throw std::invalid_argument("gem_lengths: tail_tolerance in (0,1)");
    LengthSequence seq;
    seq.order_tag = OrderTag::StickOrder;
    double remaining = 1.0;
    // E log(1-W) = -(H(theta-ish)) < 0, so the residual decays
    // geometrically; the cap only guards degenerate float behavior.
    for (int j = 0; j < 100000 && remaining >= tail_tolerance; ++j) {
        double w = sample_beta(1.0, theta, rng);
        seq.values.push_back(w * remaining);
        remaining *= (1.0 - w);
    }
    seq.residual_mass = remaining;
    return seq;
}

LengthSequence rank_lengths(const LengthSequence& seq) {
    LengthSequence out = seq;
    std::stable_sort(out.values.begin(), out.values.end(),
                     std::greater<double>());
    out.order_tag = OrderTag::Ranked;
    return out;
}

std::vector<std::size_t> size_biased_order(const std::vector<double>& weights,
                                           RngStream& rng) {
    if (weights.empty())
        throw std::invalid_argument("size_biased_order: empty weights");
    for (double w : weights)
        if (w <= 0.0)
            throw std::invalid_argument(
                "size_biased_order: weights must be > 0");
    // Exponential race: sorting E_i / w_i ascending realizes successive
    // proportional-to-remaining-weight picks in one pass.
    std::vector<std::pair<double, std::size_t>> keys(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i)
        keys[i] = {rng.exponential() / weights[i], i};
    std::sort(keys.begin(), keys.end());
    std::vector<std::size_t> order(weights.size());
    for (std::size_t i = 0; i < keys.size(); ++i) order[i] = keys[i].second;
    return order;
}

double density_beta(double u, double a, double b) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    double logd = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                  (a - 1.0) * std::log(u) + (b - 1.0) * std::log1p(-u);
    return std::exp(logd);
}

namespace {

// tau_ell density for scale (alpha, c) via the standard stable density.
double stable_level_density(double alpha, double c, double ell, double x) {
    double k = std::pow(ell * c, 1.0 / alpha);
    return special::stable_std_density(alpha, x / k) / k;
}

}  // namespace

double density_tau_br(double u, double x, double alpha) {
    if (u <= 0.0 || u >= 1.0 || x <= 0.0 || x >= 1.0)
        throw std::domain_error("density_tau_br: u and x must be in (0,1)");
    const double ub = 1.0 - u;
    const double xb = 1.0 - x;
    if (alpha == 0.5) {
        double s = xb * u * u + x * ub * ub;
        return u * ub / (2.0 * std::pow(s, 1.5));
    }
    // General alpha: c Gamma(alpha) * int_0^inf f_{u ell}(x) f_{ub ell}(xb) d ell
    // with numerically evaluated stable densities.
    const double c = std::numbers::sqrt2;  // normalization constant cancels
    auto integrand = [&](double t) {
        // map ell = t/(1-t)
        double ell = t / (1.0 - t);
        double jac = 1.0 / ((1.0 - t) * (1.0 - t));
        if (ell <= 0.0) return 0.0;
        return stable_level_density(alpha, c, u * ell, x) *
               stable_level_density(alpha, c, ub * ell, xb) * jac;
    };
    double I = special::integrate(integrand, 1e-9, 1.0 - 1e-9, 1e-9);
    return c * std::tgamma(alpha) * I;
}

double density_T1(double x) {
    if (x <= 0.0 || x >= 1.0)
        throw std::domain_error("density_T1: x must be in (0,1)");
    auto h = [](double y) {
        double r = 1.0 / std::sqrt(y);
        return r + std::log(r - 1.0);
    };
    return 0.5 * (h(x) + h(1.0 - x));
}

double intensity_T_lengths(double x, double alpha) {
    if (x <= 0.0 || x >= 1.0)
        throw std::domain_error("intensity_T_lengths: x must be in (0,1)");
    return alpha / x * std::pow(1.0 - x, alpha - 1.0);
}

double split_integral_I(double a, double b) {
    double r = std::hypot(a, b);
    return std::log((r + a) * (r + b) / ((r - a) * (r - b))) / r;
}

double joint_density_split(double a, double b) {
    if (a <= 0.0 || b <= 0.0) return 0.0;
    return a * b / std::sqrt(2.0 * kPi) * split_integral_I(a, b) *
           std::exp(-0.5 * (a * a + b * b));
}

}  // namespace bridgecut::randkit
