#pragma once

#include <Eigen/Core>

#include <span>
#include <string>
#include <vector>

#include "rerisk/calendar.hpp"

namespace rerisk {

/// Monthly simple returns in percent per month on a gap-free grid.
///
/// Invariants (checked on construction): one value per grid month, every
/// value finite and strictly greater than -100.
class ReturnSeries {
public:
    ReturnSeries() = default;
    ReturnSeries(std::string label, TimeGrid grid, Eigen::VectorXd values);

    [[nodiscard]] const std::string& label() const { return label_; }
    [[nodiscard]] const TimeGrid& grid() const { return grid_; }
    [[nodiscard]] const Eigen::VectorXd& values() const { return values_; }
    [[nodiscard]] Eigen::Index size() const { return values_.size(); }
    [[nodiscard]] double operator[](Eigen::Index i) const { return values_[i]; }

    /// Sub-series over [first, first + count).
    [[nodiscard]] ReturnSeries slice(Eigen::Index first, Eigen::Index count) const;
    [[nodiscard]] ReturnSeries relabeled(std::string label) const;

private:
    std::string label_;
    TimeGrid grid_;
    Eigen::VectorXd values_;
};

/// Natural log of an index level; one more point than the returns it came from.
class LogPriceSeries {
public:
    LogPriceSeries() = default;
    LogPriceSeries(std::string label, TimeGrid grid, Eigen::VectorXd values);

    [[nodiscard]] const std::string& label() const { return label_; }
    [[nodiscard]] const TimeGrid& grid() const { return grid_; }
    [[nodiscard]] const Eigen::VectorXd& values() const { return values_; }
    [[nodiscard]] Eigen::Index size() const { return values_.size(); }

private:
    std::string label_;
    TimeGrid grid_;
    Eigen::VectorXd values_;
};

/// Date-aligned block of return series. Stored column-major as a
/// (months x series) matrix so that covariance and regression code can work
/// on it directly.
class Panel {
public:
    Panel() = default;
    Panel(TimeGrid grid, std::vector<std::string> labels, Eigen::MatrixXd values);
    /// All series must share one grid (AlignmentError otherwise).
    explicit Panel(const std::vector<ReturnSeries>& series);

    [[nodiscard]] const TimeGrid& grid() const { return grid_; }
    [[nodiscard]] const std::vector<std::string>& labels() const { return labels_; }
    [[nodiscard]] const Eigen::MatrixXd& values() const { return values_; }
    [[nodiscard]] Eigen::Index length() const { return values_.rows(); }
    [[nodiscard]] Eigen::Index width() const { return values_.cols(); }

    [[nodiscard]] ReturnSeries series(Eigen::Index column) const;
    /// Throws ValidationError for unknown labels.
    [[nodiscard]] ReturnSeries series(const std::string& label) const;
    [[nodiscard]] Eigen::Index column_of(const std::string& label) const;
    [[nodiscard]] Panel select(const std::vector<std::string>& labels) const;
    [[nodiscard]] std::vector<ReturnSeries> to_series() const;

private:
    TimeGrid grid_;
    std::vector<std::string> labels_;
    Eigen::MatrixXd values_;
};

/// One constituent observation. `market_cap` is the capitalisation at the end
/// of the month before `month`, i.e. the weight basis for `return_pct`.
struct ConstituentRecord {
    std::string id;
    YearMonth month;
    double return_pct = 0.0;
    double market_cap = 0.0;
};

/// Cap-weighted index: r_t = sum_i cap_{i,t-1} r_{i,t} / sum_j cap_{j,t-1}.
/// Constituents with zero prior cap carry zero weight. Throws GapError for a
/// month with no positively-capitalised constituent and ValidationError for
/// negative caps, non-finite returns or duplicate (id, month) records.
[[nodiscard]] ReturnSeries build_value_weighted_index(std::span<const ConstituentRecord> records,
                                                      std::string label);

/// Trailing mean over `window` months. The output grid starts window-1 months
/// later and the label gains a "_MA<window>" suffix.
[[nodiscard]] ReturnSeries moving_average(const ReturnSeries& s, int window);

/// p_0 = log(base), p_t = p_{t-1} + log(1 + r_t / 100). The grid starts one
/// month before the returns (the base month).
[[nodiscard]] LogPriceSeries cumulate_log_price(const ReturnSeries& s, double base = 100.0);

/// Inverse of cumulate_log_price: r_t = 100 (exp(p_t - p_{t-1}) - 1).
[[nodiscard]] ReturnSeries simple_returns(const LogPriceSeries& p);

/// Log returns 100 (p_t - p_{t-1}); the series unit-root tests are run on.
[[nodiscard]] Eigen::VectorXd log_differences(const LogPriceSeries& p);

/// Truncates every series to the common span of months.
[[nodiscard]] Panel align(const std::vector<ReturnSeries>& series);

}  // namespace rerisk
