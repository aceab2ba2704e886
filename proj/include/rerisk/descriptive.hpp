#pragma once

#include <Eigen/Core>

#include <cmath>
#include <vector>

#include "rerisk/error.hpp"
#include "rerisk/series.hpp"

namespace rerisk {

/// 5% critical value of chi-square(2), the Jarque-Bera reference distribution.
inline constexpr double k_jarque_bera_critical_5pct = 5.991464547107979;

template <typename Derived>
double sample_mean(const Eigen::DenseBase<Derived>& x) {
    return x.derived().mean();
}

/// Variance with the n-1 denominator.
template <typename Derived>
double sample_variance(const Eigen::DenseBase<Derived>& x) {
    const Eigen::Index n = x.size();
    if (n < 2) throw InsufficientDataError("variance needs at least two observations");
    return (x.derived().array() - x.derived().mean()).square().sum() / static_cast<double>(n - 1);
}

template <typename Derived>
double sample_sd(const Eigen::DenseBase<Derived>& x) {
    return std::sqrt(sample_variance(x));
}

/// Covariance with the n-1 denominator.
template <typename DerivedX, typename DerivedY>
double sample_covariance(const Eigen::DenseBase<DerivedX>& x, const Eigen::DenseBase<DerivedY>& y) {
    const Eigen::Index n = x.size();
    if (n != y.size()) throw AlignmentError("covariance of series with different lengths");
    if (n < 2) throw InsufficientDataError("covariance needs at least two observations");
    return ((x.derived().array() - x.derived().mean()) * (y.derived().array() - y.derived().mean())).sum() /
           static_cast<double>(n - 1);
}

/// Moment and normality summary of one return series.
struct StatSummary {
    double mean = 0.0;
    double sd = 0.0;  ///< n-1 denominator
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    double jarque_bera = 0.0;
    double autocorr1 = 0.0;
    Eigen::Index n = 0;
};

/// Moments, Jarque-Bera (n/6)(S^2 + K^2/4) and lag-1 autocorrelation.
/// Skewness and excess kurtosis use n-denominator central moments.
/// Throws InsufficientDataError for n < 4 and DegenerateVarianceError for a
/// constant series (whose sd is 0 but whose shape moments are undefined).
[[nodiscard]] StatSummary describe(const ReturnSeries& s);
[[nodiscard]] StatSummary describe(const Eigen::Ref<const Eigen::VectorXd>& x);

struct CorrelogramEntry {
    int lag = 0;
    double value = 0.0;
    double band = 0.0;  ///< 1.96 / sqrt(n)
};

/// Sample autocorrelations at lags 0..max_lag (n denominators throughout).
[[nodiscard]] std::vector<CorrelogramEntry> autocorrelogram(const ReturnSeries& x, int max_lag);

/// Cross-correlations at lags -max_lag..max_lag. The entry at lag k estimates
/// corr(x_{t+k}, y_t), so positive lags measure y leading x.
/// Throws AlignmentError unless x and y share a grid, LengthError unless
/// max_lag < n/2.
[[nodiscard]] std::vector<CorrelogramEntry> correlogram(const ReturnSeries& x, const ReturnSeries& y, int max_lag);

/// cov(s, market) / var(market).
[[nodiscard]] double ols_beta(const ReturnSeries& s, const ReturnSeries& market);
[[nodiscard]] double ols_beta(const Eigen::Ref<const Eigen::VectorXd>& s, const Eigen::Ref<const Eigen::VectorXd>& market);

/// Pieces of the Scholes-Williams estimator, all estimated on the common
/// window t = 2..n-1 so that lag, lead and contemporaneous slopes are comparable.
struct ScholesWilliams {
    double lag_beta = 0.0;              ///< slope on market_{t-1}
    double contemporaneous_beta = 0.0;  ///< slope on market_t
    double lead_beta = 0.0;             ///< slope on market_{t+1}
    double market_autocorr = 0.0;       ///< corr(market_t, market_{t-1})
    double beta = 0.0;                  ///< (lag + contemporaneous + lead) / (1 + 2 rho)
};

[[nodiscard]] ScholesWilliams scholes_williams(const ReturnSeries& s, const ReturnSeries& market);
[[nodiscard]] double scholes_williams_beta(const ReturnSeries& s, const ReturnSeries& market);

struct CrossSectionRow {
    int year = 0;
    int n_assets = 0;
    double mean_of_means = 0.0;
    double mean_of_sds = 0.0;
    double mean_beta = 0.0;
    double sd_beta = 0.0;  ///< n-1 across assets; 0 for a single asset
};

/// Annual cross-sectional summary. An asset enters a year only with all 12
/// months of that year available (and the market covering them); years with
/// no qualifying asset are omitted.
[[nodiscard]] std::vector<CrossSectionRow> cross_sectional_summary(const std::vector<ReturnSeries>& assets,
                                                                   const ReturnSeries& market);

}  // namespace rerisk
