#include "bridgecut/statlab.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "bridgecut/special.hpp"

namespace bridgecut::statlab {

std::string decision_name(Decision d) {
    switch (d) {
        case Decision::Pass: return "pass";
        case Decision::Fail: return "fail";
        case Decision::Warn: return "warn";
    }
    return "?";
}

std::string StatReport::to_json() const {
    nlohmann::json j;
    j["name"] = name;
    j["statistic"] = statistic;
    j["threshold"] = threshold;
    if (p_value >= 0.0) j["p_value"] = p_value;
    j["n"] = n;
    if (n2 > 0) j["n2"] = n2;
    j["decision"] = decision_name(decision);
    j["seed"] = seed;
    j["runtime_s"] = runtime_s;
    if (!note.empty()) j["note"] = note;
    return j.dump();
}

std::string StatReport::csv_header() {
    return "name,statistic,threshold,p_value,n,n2,decision,seed,runtime_s,"
           "note";
}

std::string StatReport::csv_row() const {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%zu,%zu", statistic,
                  threshold, p_value, n, n2);
    std::string note_escaped = note;
    std::replace(note_escaped.begin(), note_escaped.end(), ',', ';');
    return name + "," + buf + "," + decision_name(decision) + "," +
           std::to_string(seed) + "," + std::to_string(runtime_s) + "," +
           note_escaped;
}

KsResult ks_one_sample(std::vector<double> samples,
                       const std::function<double(double)>& cdf) {
    if (samples.size() < 100)
        throw std::invalid_argument("ks_one_sample: need >= 100 samples");
    std::sort(samples.begin(), samples.end());
    const std::size_t n = samples.size();
    double d = 0.0;
    double prev_f = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        double f = cdf(samples[i]);
        if (f < prev_f - 1e-12)
            throw std::invalid_argument("ks_one_sample: cdf not monotone");
        prev_f = std::max(prev_f, f);
        double lo = static_cast<double>(i) / n;
        double hi = static_cast<double>(i + 1) / n;
        d = std::max(d, std::max(f - lo, hi - f));
    }
    KsResult r;
    r.statistic = d;
    r.n = n;
    r.p_value = special::kolmogorov_sf(std::sqrt(static_cast<double>(n)) * d);
    return r;
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.size() < 100 || b.size() < 100)
        throw std::invalid_argument("ks_two_sample: need >= 100 samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const std::size_t n = a.size(), m = b.size();
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < n && j < m) {
        double x = std::min(a[i], b[j]);
        while (i < n && a[i] <= x) ++i;
        while (j < m && b[j] <= x) ++j;
        double diff = std::fabs(static_cast<double>(i) / n -
                                static_cast<double>(j) / m);
        d = std::max(d, diff);
    }
    KsResult r;
    r.statistic = d;
    r.n = n;
    r.n2 = m;
    double neff = static_cast<double>(n) * m / (n + m);
    r.p_value = special::kolmogorov_sf(std::sqrt(neff) * d);
    return r;
}

ChiSquareResult chi_square_counts(const std::vector<std::uint64_t>& observed,
                                  const std::vector<double>& expected_probs) {
    if (observed.size() != expected_probs.size() || observed.empty())
        throw std::invalid_argument("chi_square_counts: size mismatch");
    std::uint64_t total = 0;
    for (auto c : observed) total += c;
    const double N = static_cast<double>(total);

    // Pool cells whose expected count is below 5 into one rest cell.
    double stat = 0.0;
    double pooled_exp = 0.0;
    std::uint64_t pooled_obs = 0;
    std::size_t used = 0, merged = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        double e = expected_probs[i] * N;
        if (e < 5.0) {
            pooled_exp += e;
            pooled_obs += observed[i];
            ++merged;
            continue;
        }
        double diff = observed[i] - e;
        stat += diff * diff / e;
        ++used;
    }
    if (pooled_exp > 0.0) {
        if (pooled_exp >= 5.0) {
            double diff = pooled_obs - pooled_exp;
            stat += diff * diff / pooled_exp;
            ++used;
        }
        // else: drop the sliver; its mass is negligible by construction
    }
    ChiSquareResult r;
    r.statistic = stat;
    r.dof = used > 1 ? used - 1 : 1;
    r.merged_bins = merged;
    r.n = total;
    r.p_value = special::chi2_sf(stat, static_cast<double>(r.dof));
    return r;
}

ChiSquareResult chi_square_equiprob(
    const std::vector<double>& samples,
    const std::function<double(double)>& quantile, std::size_t bins) {
    if (bins < 2) throw std::invalid_argument("chi_square_equiprob: bins");
    std::vector<double> edges(bins - 1);
    for (std::size_t k = 1; k < bins; ++k)
        edges[k - 1] = quantile(static_cast<double>(k) / bins);
    std::vector<std::uint64_t> counts(bins, 0);
    for (double x : samples) {
        std::size_t idx = std::upper_bound(edges.begin(), edges.end(), x) -
                          edges.begin();
        counts[idx]++;
    }
    std::vector<double> probs(bins, 1.0 / static_cast<double>(bins));
    return chi_square_counts(counts, probs);
}

WeightedMean weighted_mean(const std::vector<double>& values,
                           const std::vector<double>& weights) {
    if (values.size() != weights.size() || values.empty())
        throw std::invalid_argument("weighted_mean: size mismatch");
    double sw = 0.0, swf = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (weights[i] <= 0.0)
            throw std::invalid_argument("weighted_mean: weights must be > 0");
        sw += weights[i];
        swf += weights[i] * values[i];
    }
    if (sw == 0.0) throw std::invalid_argument("weighted_mean: zero weight");
    WeightedMean r;
    r.mean = swf / sw;
    r.sum_weights = sw;
    double var = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        double d = weights[i] * (values[i] - r.mean);
        var += d * d;
    }
    r.se = std::sqrt(var) / sw;
    return r;
}

MeanResult mean_with_se(const std::vector<double>& values) {
    MeanResult r;
    const std::size_t n = values.size();
    if (n == 0) return r;
    double s = 0.0;
    for (double v : values) s += v;
    r.mean = s / n;
    double var = 0.0;
    for (double v : values) var += (v - r.mean) * (v - r.mean);
    r.se = n > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;
    return r;
}

double pearson_correlation(const std::vector<double>& a,
                           const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2)
        throw std::invalid_argument("pearson_correlation: size mismatch");
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= a.size();
    mb /= b.size();
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

StatReport report_threshold(const std::string& name, double statistic,
                            double threshold, std::size_t n,
                            std::uint64_t seed, const std::string& note) {
    StatReport r;
    r.name = name;
    r.statistic = statistic;
    r.threshold = threshold;
    r.n = n;
    r.seed = seed;
    r.note = note;
    r.decision = statistic <= threshold ? Decision::Pass : Decision::Fail;
    return r;
}

StatReport report_pvalue(const std::string& name, double statistic,
                         double p_value, double level, std::size_t n,
                         std::uint64_t seed, const std::string& note) {
    StatReport r;
    r.name = name;
    r.statistic = statistic;
    r.threshold = level;
    r.p_value = p_value;
    r.n = n;
    r.seed = seed;
    r.note = note;
    r.decision = p_value >= level ? Decision::Pass : Decision::Fail;
    return r;
}

StatReport report_must_reject(const std::string& name, double statistic,
                              double p_value, double level, std::size_t n,
                              std::uint64_t seed, const std::string& note) {
    StatReport r;
    r.name = name;
    r.statistic = statistic;
    r.threshold = level;
    r.p_value = p_value;
    r.n = n;
    r.seed = seed;
    r.note = note.empty() ? "negative control: rejection required" : note;
    r.decision = p_value < level ? Decision::Pass : Decision::Fail;
    return r;
}

StatReport report_exact(const std::string& name, bool ok, std::size_t n,
                        std::uint64_t seed, const std::string& note) {
    StatReport r;
    r.name = name;
    r.statistic = ok ? 0.0 : 1.0;
    r.threshold = 0.5;
    r.n = n;
    r.seed = seed;
    r.note = note;
    r.decision = ok ? Decision::Pass : Decision::Fail;
    return r;
}

std::string reports_to_json(const std::vector<StatReport>& reports,
                            const std::string& suite_name) {
    nlohmann::json j;
    j["suite"] = suite_name;
    bool all = true;
    auto arr = nlohmann::json::array();
    for (const auto& r : reports) {
        arr.push_back(nlohmann::json::parse(r.to_json()));
        all = all && r.passed();
    }
    j["reports"] = arr;
    j["all_passed"] = all;
    return j.dump(2);
}

std::string reports_to_csv(const std::vector<StatReport>& reports) {
    std::string out = StatReport::csv_header() + "\n";
    for (const auto& r : reports) out += r.csv_row() + "\n";
    return out;
}

}  // namespace bridgecut::statlab
