#include "rerisk/descriptive.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace rerisk {

namespace {

void require_same_grid(const ReturnSeries& a, const ReturnSeries& b) {
    if (!(a.grid() == b.grid())) {
        throw AlignmentError("series '" + a.label() + "' (" + a.grid().describe() + ") and '" + b.label() + "' (" +
                             b.grid().describe() + ") are not aligned");
    }
}

double slope(const Eigen::Ref<const Eigen::VectorXd>& y, const Eigen::Ref<const Eigen::VectorXd>& x) {
    const double vx = sample_variance(x);
    if (!(vx > 0.0)) throw DegenerateVarianceError("regressor has zero variance");
    return sample_covariance(y, x) / vx;
}

}  // namespace

StatSummary describe(const Eigen::Ref<const Eigen::VectorXd>& x) {
    const Eigen::Index n = x.size();
    if (n < 4) throw InsufficientDataError("describe needs at least 4 observations, got " + std::to_string(n));
    StatSummary out;
    out.n = n;
    out.mean = x.mean();
    const Eigen::ArrayXd d = x.array() - out.mean;
    const double m2 = d.square().mean();
    out.sd = std::sqrt(d.square().sum() / static_cast<double>(n - 1));
    if (!(m2 > 1e-28 * std::max(1.0, out.mean * out.mean))) {
        throw DegenerateVarianceError("series has zero variance; skewness and kurtosis are undefined");
    }
    const double m3 = d.cube().mean();
    const double m4 = d.square().square().mean();
    out.skewness = m3 / std::pow(m2, 1.5);
    out.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    out.jarque_bera = static_cast<double>(n) / 6.0 *
                      (out.skewness * out.skewness + 0.25 * out.excess_kurtosis * out.excess_kurtosis);
    out.autocorr1 = (d.tail(n - 1) * d.head(n - 1)).sum() / d.square().sum();
    return out;
}

StatSummary describe(const ReturnSeries& s) {
    try {
        return describe(s.values());
    } catch (const DegenerateVarianceError& e) {
        throw DegenerateVarianceError("series '" + s.label() + "': " + e.what());
    }
}

std::vector<CorrelogramEntry> autocorrelogram(const ReturnSeries& x, int max_lag) {
    const auto full = correlogram(x, x, max_lag);
    return {full.begin() + max_lag, full.end()};
}

std::vector<CorrelogramEntry> correlogram(const ReturnSeries& x, const ReturnSeries& y, int max_lag) {
    require_same_grid(x, y);
    const Eigen::Index n = x.size();
    if (max_lag < 0 || 2 * static_cast<Eigen::Index>(max_lag) >= n) {
        throw LengthError("correlogram: max_lag must be below n/2 (n = " + std::to_string(n) + ")");
    }
    const Eigen::ArrayXd dx = x.values().array() - x.values().mean();
    const Eigen::ArrayXd dy = y.values().array() - y.values().mean();
    const double denom = std::sqrt(dx.square().sum() * dy.square().sum());
    if (!(denom > 0.0)) throw DegenerateVarianceError("correlogram of a constant series");
    const double band = 1.96 / std::sqrt(static_cast<double>(n));

    std::vector<CorrelogramEntry> out;
    out.reserve(static_cast<std::size_t>(2 * max_lag + 1));
    for (int k = -max_lag; k <= max_lag; ++k) {
        const Eigen::Index m = n - std::abs(k);
        // corr(x_{t+k}, y_t)
        const double num = k >= 0 ? (dx.tail(m) * dy.head(m)).sum() : (dx.head(m) * dy.tail(m)).sum();
        out.push_back({k, num / denom, band});
    }
    return out;
}

double ols_beta(const Eigen::Ref<const Eigen::VectorXd>& s, const Eigen::Ref<const Eigen::VectorXd>& market) {
    if (s.size() != market.size()) throw AlignmentError("beta: series lengths differ");
    const double vm = sample_variance(market);
    if (!(vm > 0.0)) throw DegenerateVarianceError("beta: market has zero variance");
    return sample_covariance(s, market) / vm;
}

double ols_beta(const ReturnSeries& s, const ReturnSeries& market) {
    require_same_grid(s, market);
    return ols_beta(s.values(), market.values());
}

ScholesWilliams scholes_williams(const ReturnSeries& s, const ReturnSeries& market) {
    require_same_grid(s, market);
    const Eigen::Index n = s.size();
    if (n < 5) throw InsufficientDataError("Scholes-Williams beta needs at least 5 observations");
    const Eigen::Index m = n - 2;
    const auto& y = s.values();
    const auto& x = market.values();
    const auto y_mid = y.segment(1, m);

    ScholesWilliams out;
    out.lag_beta = slope(y_mid, x.segment(0, m));
    out.contemporaneous_beta = slope(y_mid, x.segment(1, m));
    out.lead_beta = slope(y_mid, x.segment(2, m));
    const auto x_now = x.segment(1, m);
    const auto x_prev = x.segment(0, m);
    out.market_autocorr =
        sample_covariance(x_now, x_prev) / std::sqrt(sample_variance(x_now) * sample_variance(x_prev));
    const double denom = 1.0 + 2.0 * out.market_autocorr;
    if (std::fabs(denom) < 1e-8) throw SingularMatrixError("Scholes-Williams denominator 1 + 2 rho is zero");
    out.beta = (out.lag_beta + out.contemporaneous_beta + out.lead_beta) / denom;
    return out;
}

double scholes_williams_beta(const ReturnSeries& s, const ReturnSeries& market) {
    return scholes_williams(s, market).beta;
}

std::vector<CrossSectionRow> cross_sectional_summary(const std::vector<ReturnSeries>& assets,
                                                     const ReturnSeries& market) {
    struct Accum {
        std::vector<double> means, sds, betas;
    };
    std::map<int, Accum> years;
    for (const auto& a : assets) {
        const int first_year = a.grid().start().year();
        const int last_year = a.grid().last().year();
        for (int year = first_year; year <= last_year; ++year) {
            const YearMonth jan(year, 1);
            const YearMonth dec(year, 12);
            if (!a.grid().contains(jan) || !a.grid().contains(dec)) continue;
            if (!market.grid().contains(jan) || !market.grid().contains(dec)) continue;
            const auto r = a.values().segment(*a.grid().index_of(jan), 12);
            const auto m = market.values().segment(*market.grid().index_of(jan), 12);
            auto& acc = years[year];
            acc.means.push_back(r.mean());
            acc.sds.push_back(sample_sd(r));
            acc.betas.push_back(ols_beta(r, m));
        }
    }

    std::vector<CrossSectionRow> rows;
    for (const auto& [year, acc] : years) {
        const auto count = static_cast<Eigen::Index>(acc.means.size());
        const Eigen::Map<const Eigen::VectorXd> means(acc.means.data(), count);
        const Eigen::Map<const Eigen::VectorXd> sds(acc.sds.data(), count);
        const Eigen::Map<const Eigen::VectorXd> betas(acc.betas.data(), count);
        CrossSectionRow row;
        row.year = year;
        row.n_assets = static_cast<int>(count);
        row.mean_of_means = means.mean();
        row.mean_of_sds = sds.mean();
        row.mean_beta = betas.mean();
        row.sd_beta = count > 1 ? sample_sd(betas) : 0.0;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace rerisk
