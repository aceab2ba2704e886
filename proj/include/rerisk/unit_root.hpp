#pragma once

#include <Eigen/Core>

#include <string_view>
#include <vector>

namespace rerisk {

/// Quantile table of a test statistic: rows of (sample size, tail
/// probability, critical value). Sample size 0 stands for the asymptotic row
/// ("inf" in the CSV).
class CriticalValueTable {
public:
    struct Row {
        double sample_size = 0.0;
        double tail_probability = 0.0;
        double critical_value = 0.0;
    };

    /// Parses the CSV layout shipped in data/critical_values. Lines starting
    /// with '#' are comments; the header line is required.
    static CriticalValueTable parse(std::string_view csv);

    [[nodiscard]] const std::vector<Row>& rows() const { return rows_; }
    /// Distinct tail probabilities in ascending order.
    [[nodiscard]] std::vector<double> probabilities() const;
    /// Critical value at `probability`, interpolated linearly in 1/n between
    /// tabulated sample sizes (n beyond the largest finite size moves toward
    /// the asymptotic row).
    [[nodiscard]] double critical_value(double probability, double sample_size) const;
    /// Tail probability of `statistic`, interpolated linearly between
    /// tabulated quantiles and clamped to the tabulated probability range.
    [[nodiscard]] double tail_probability(double statistic, double sample_size) const;

private:
    std::vector<Row> rows_;
};

/// Dickey-Fuller tau (constant, no trend); shared by ADF and Phillips-Perron.
[[nodiscard]] const CriticalValueTable& dickey_fuller_table();
/// KPSS level-stationarity upper-tail table.
[[nodiscard]] const CriticalValueTable& kpss_table();

struct AdfResult {
    double statistic = 0.0;
    double p_value = 1.0;
    int lags = 0;
    Eigen::Index nobs = 0;
};

struct PpResult {
    double statistic = 0.0;  ///< Z(t)
    double p_value = 1.0;
    int bandwidth = 0;
    Eigen::Index nobs = 0;
};

struct KpssResult {
    double statistic = 0.0;
    double p_value = 0.1;  ///< clamped to [0.01, 0.10]
    int bandwidth = 0;
    bool reject_5pct = false;
    bool reject_1pct = false;
};

struct UnitRootReport {
    AdfResult adf;
    PpResult pp;
    KpssResult kpss;
};

/// Newey-West bandwidth floor(4 (n/100)^(2/9)).
[[nodiscard]] int newey_west_bandwidth(Eigen::Index n);

/// ADF regression dy_t = a + g y_{t-1} + sum_i d_i dy_{t-i}. The lag order
/// minimises BIC over 0..max_lag on a common sample (max_lag defaults to
/// ceil(12 (n/100)^(1/4))), then the chosen order is re-estimated on all
/// usable observations. Returns the t-statistic of g.
[[nodiscard]] AdfResult adf_test(const Eigen::Ref<const Eigen::VectorXd>& y, int max_lag = -1);

/// Phillips-Perron Z(t) with constant, Bartlett kernel, Newey-West bandwidth.
[[nodiscard]] PpResult pp_test(const Eigen::Ref<const Eigen::VectorXd>& y);

/// KPSS level-stationarity statistic with Bartlett long-run variance.
[[nodiscard]] KpssResult kpss_test(const Eigen::Ref<const Eigen::VectorXd>& y);

/// All three tests; requires n >= 30.
[[nodiscard]] UnitRootReport unit_root_tests(const Eigen::Ref<const Eigen::VectorXd>& y);

}  // namespace rerisk
