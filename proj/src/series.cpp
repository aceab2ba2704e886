#include "rerisk/series.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_set>
#include <utility>

#include "rerisk/error.hpp"

namespace rerisk {

namespace {

void check_returns(const std::string& label, const TimeGrid& grid, const Eigen::VectorXd& values) {
    if (values.size() != grid.length()) {
        throw ValidationError("series '" + label + "': " + std::to_string(values.size()) +
                              " values for a grid of " + std::to_string(grid.length()) + " months");
    }
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw ValidationError("series '" + label + "': non-finite value at " +
                                  grid.at(i).to_string());
        }
        if (values[i] <= -100.0) {
            throw ValidationError("series '" + label + "': return of " + std::to_string(values[i]) +
                                  "% at " + grid.at(i).to_string() + " loses more than everything");
        }
    }
}

}  // namespace

ReturnSeries::ReturnSeries(std::string label, TimeGrid grid, Eigen::VectorXd values)
    : label_(std::move(label)), grid_(grid), values_(std::move(values)) {
    check_returns(label_, grid_, values_);
}

ReturnSeries ReturnSeries::slice(Eigen::Index first, Eigen::Index count) const {
    if (first < 0 || count < 1 || first + count > size()) {
        throw LengthError("series '" + label_ + "': slice out of range");
    }
    return {label_, TimeGrid(grid_.at(first), count), values_.segment(first, count)};
}

ReturnSeries ReturnSeries::relabeled(std::string label) const {
    ReturnSeries out = *this;
    out.label_ = std::move(label);
    return out;
}

LogPriceSeries::LogPriceSeries(std::string label, TimeGrid grid, Eigen::VectorXd values)
    : label_(std::move(label)), grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.length()) throw ValidationError("log price length does not match grid");
    if (!values_.allFinite()) throw ValidationError("log price series '" + label_ + "' has non-finite values");
}

Panel::Panel(TimeGrid grid, std::vector<std::string> labels, Eigen::MatrixXd values)
    : grid_(grid), labels_(std::move(labels)), values_(std::move(values)) {
    if (labels_.empty()) throw ValidationError("panel needs at least one series");
    if (values_.rows() != grid_.length() || values_.cols() != static_cast<Eigen::Index>(labels_.size())) {
        throw ValidationError("panel matrix shape does not match grid and labels");
    }
    std::set<std::string> seen;
    for (const auto& l : labels_) {
        if (!seen.insert(l).second) throw ValidationError("duplicate series label '" + l + "' in panel");
    }
    for (Eigen::Index j = 0; j < values_.cols(); ++j) check_returns(labels_[j], grid_, values_.col(j));
}

Panel::Panel(const std::vector<ReturnSeries>& series) {
    if (series.empty()) throw ValidationError("panel needs at least one series");
    grid_ = series.front().grid();
    values_.resize(grid_.length(), static_cast<Eigen::Index>(series.size()));
    std::set<std::string> seen;
    for (std::size_t j = 0; j < series.size(); ++j) {
        const auto& s = series[j];
        if (!(s.grid() == grid_)) {
            throw AlignmentError("series '" + s.label() + "' spans " + s.grid().describe() +
                                 ", panel spans " + grid_.describe());
        }
        if (!seen.insert(s.label()).second) {
            throw ValidationError("duplicate series label '" + s.label() + "' in panel");
        }
        labels_.push_back(s.label());
        values_.col(static_cast<Eigen::Index>(j)) = s.values();
    }
}

ReturnSeries Panel::series(Eigen::Index column) const {
    return {labels_.at(static_cast<std::size_t>(column)), grid_, values_.col(column)};
}

ReturnSeries Panel::series(const std::string& label) const { return series(column_of(label)); }

Eigen::Index Panel::column_of(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw ValidationError("no series '" + label + "' in panel");
    return std::distance(labels_.begin(), it);
}

Panel Panel::select(const std::vector<std::string>& labels) const {
    Eigen::MatrixXd out(length(), static_cast<Eigen::Index>(labels.size()));
    for (std::size_t j = 0; j < labels.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = values_.col(column_of(labels[j]));
    return {grid_, labels, std::move(out)};
}

std::vector<ReturnSeries> Panel::to_series() const {
    std::vector<ReturnSeries> out;
    out.reserve(labels_.size());
    for (Eigen::Index j = 0; j < width(); ++j) out.push_back(series(j));
    return out;
}

ReturnSeries build_value_weighted_index(std::span<const ConstituentRecord> records, std::string label) {
    if (records.empty()) throw GapError("index '" + label + "': no constituent records");

    struct MonthSums {
        double weighted = 0.0;
        double cap = 0.0;
    };
    std::map<long, MonthSums> months;
    std::set<std::pair<std::string, long>> seen;
    for (const auto& r : records) {
        if (!(r.market_cap >= 0.0) || !std::isfinite(r.market_cap)) {
            throw ValidationError("constituent '" + r.id + "' has invalid market cap at " + r.month.to_string());
        }
        if (!std::isfinite(r.return_pct)) {
            throw ValidationError("constituent '" + r.id + "' has non-finite return at " + r.month.to_string());
        }
        if (!seen.emplace(r.id, r.month.serial()).second) {
            throw ValidationError("duplicate record for constituent '" + r.id + "' at " + r.month.to_string());
        }
        auto& m = months[r.month.serial()];
        m.weighted += r.market_cap * r.return_pct;
        m.cap += r.market_cap;
    }

    const long first = months.begin()->first;
    const long last = months.rbegin()->first;
    Eigen::VectorXd values(last - first + 1);
    for (long t = first; t <= last; ++t) {
        auto it = months.find(t);
        if (it == months.end() || it->second.cap <= 0.0) {
            throw GapError("index '" + label + "': no capitalised constituent in " +
                           YearMonth::from_serial(t).to_string());
        }
        values[t - first] = it->second.weighted / it->second.cap;
    }
    return {std::move(label), TimeGrid(YearMonth::from_serial(first), values.size()), std::move(values)};
}

ReturnSeries moving_average(const ReturnSeries& s, int window) {
    if (window < 1) throw ValidationError("moving average window must be at least 1");
    if (s.size() < window) {
        throw LengthError("series '" + s.label() + "' has " + std::to_string(s.size()) +
                          " months, shorter than window " + std::to_string(window));
    }
    const Eigen::Index n = s.size() - window + 1;
    Eigen::VectorXd out(n);
    const auto& v = s.values();
    for (Eigen::Index t = 0; t < n; ++t) out[t] = v.segment(t, window).mean();
    return {s.label() + "_MA" + std::to_string(window), s.grid().drop_front(window - 1), std::move(out)};
}

LogPriceSeries cumulate_log_price(const ReturnSeries& s, double base) {
    if (!(base > 0.0) || !std::isfinite(base)) throw ValidationError("log price base level must be positive");
    Eigen::VectorXd p(s.size() + 1);
    p[0] = std::log(base);
    for (Eigen::Index t = 0; t < s.size(); ++t) p[t + 1] = p[t] + std::log1p(s[t] / 100.0);
    return {s.label(), TimeGrid(s.grid().start().plus(-1), p.size()), std::move(p)};
}

ReturnSeries simple_returns(const LogPriceSeries& p) {
    if (p.size() < 2) throw LengthError("log price series '" + p.label() + "' needs two points");
    const auto& v = p.values();
    Eigen::VectorXd r = 100.0 * (v.tail(v.size() - 1) - v.head(v.size() - 1)).array().exp().matrix();
    r.array() -= 100.0;
    return {p.label(), p.grid().drop_front(1), std::move(r)};
}

Eigen::VectorXd log_differences(const LogPriceSeries& p) {
    const auto& v = p.values();
    return 100.0 * (v.tail(v.size() - 1) - v.head(v.size() - 1));
}

Panel align(const std::vector<ReturnSeries>& series) {
    if (series.empty()) throw AlignmentError("nothing to align");
    YearMonth start = series.front().grid().start();
    YearMonth end = series.front().grid().last();
    for (const auto& s : series) {
        start = std::max(start, s.grid().start());
        end = std::min(end, s.grid().last());
    }
    if (end < start) {
        std::string spans;
        for (const auto& s : series) spans += " " + s.label() + "=" + s.grid().describe();
        throw AlignmentError("series share no common month:" + spans);
    }
    std::vector<ReturnSeries> cut;
    cut.reserve(series.size());
    const Eigen::Index length = end.serial() - start.serial() + 1;
    for (const auto& s : series) cut.push_back(s.slice(*s.grid().index_of(start), length));
    return Panel(cut);
}

}  // namespace rerisk
