#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

// Statistical verification machinery: KS and chi-square tests, weighted
// means with delta-method errors, and the StatReport record every suite
// emits. Decisions are always computed from statistic vs threshold.

namespace bridgecut::statlab {

enum class Decision { Pass, Fail, Warn };

struct StatReport {
    std::string name;
    double statistic = 0.0;
    double threshold = 0.0;  // the bound the statistic was compared against
    double p_value = -1.0;   // -1 when the check is a plain threshold test
    std::size_t n = 0;
    std::size_t n2 = 0;  // second sample size for two-sample tests
    Decision decision = Decision::Fail;
    std::uint64_t seed = 0;
    double runtime_s = 0.0;
    std::string note;

    bool passed() const { return decision != Decision::Fail; }
    std::string to_json() const;
    static std::string csv_header();
    std::string csv_row() const;
};

std::string decision_name(Decision d);

struct KsResult {
    double statistic = 0.0;  // sup |ECDF - CDF|
    double p_value = 1.0;    // asymptotic
    std::size_t n = 0;
    std::size_t n2 = 0;
};

// One-sample KS against a callable CDF; asymptotic p-value. Requires
// at least 100 samples.
KsResult ks_one_sample(std::vector<double> samples,
                       const std::function<double(double)>& cdf);

// Two-sample KS with effective size nm/(n+m).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

struct ChiSquareResult {
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t dof = 0;
    std::size_t merged_bins = 0;  // cells pooled for low expected counts
    std::size_t n = 0;
};

// Pearson chi-square of observed counts against expected probabilities.
// Cells with expected count < 5 are pooled into a single rest cell
// (merged_bins counts how many were pooled); dof = used_cells - 1.
ChiSquareResult chi_square_counts(const std::vector<std::uint64_t>& observed,
                                  const std::vector<double>& expected_probs);

// Histogram samples into equal-probability bins of a distribution given by
// its quantile function, then chi-square against the uniform cell law.
ChiSquareResult chi_square_equiprob(
    const std::vector<double>& samples,
    const std::function<double(double)>& quantile, std::size_t bins);

struct WeightedMean {
    double mean = 0.0;
    double se = 0.0;  // delta-method standard error
    double sum_weights = 0.0;
};

WeightedMean weighted_mean(const std::vector<double>& values,
                           const std::vector<double>& weights);

struct MeanResult {
    double mean = 0.0;
    double se = 0.0;
};

MeanResult mean_with_se(const std::vector<double>& values);

double pearson_correlation(const std::vector<double>& a,
                           const std::vector<double>& b);

// Report builders: the decision is derived from the comparison, never set
// by hand.
StatReport report_threshold(const std::string& name, double statistic,
                            double threshold, std::size_t n,
                            std::uint64_t seed, const std::string& note = "");
StatReport report_pvalue(const std::string& name, double statistic,
                         double p_value, double level, std::size_t n,
                         std::uint64_t seed, const std::string& note = "");
// For negative controls: passes when p_value < level (rejection expected).
StatReport report_must_reject(const std::string& name, double statistic,
                              double p_value, double level, std::size_t n,
                              std::uint64_t seed,
                              const std::string& note = "");
StatReport report_exact(const std::string& name, bool ok, std::size_t n,
                        std::uint64_t seed, const std::string& note = "");

// Serialize a suite of reports.
std::string reports_to_json(const std::vector<StatReport>& reports,
                            const std::string& suite_name);
std::string reports_to_csv(const std::vector<StatReport>& reports);

}  // namespace bridgecut::statlab
