#include "rerisk/unit_root.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <string>

#include "rerisk/error.hpp"
#include "rerisk/least_squares.hpp"
#include "rerisk/special.hpp"

namespace rerisk {

namespace {

#include "rerisk/critical_value_tables.inc"

double parse_number(std::string_view field, int line) {
    if (field == "inf") return 0.0;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ParseError("critical value table line " + std::to_string(line) + ": bad number '" + std::string(field) +
                         "'");
    }
    return v;
}

// Bartlett-weighted long-run variance of u (no demeaning), n denominators.
double bartlett_long_run_variance(const Eigen::VectorXd& u, int bandwidth) {
    const Eigen::Index n = u.size();
    double s = u.squaredNorm();
    for (int j = 1; j <= bandwidth && j < n; ++j) {
        const double w = 1.0 - static_cast<double>(j) / (bandwidth + 1.0);
        s += 2.0 * w * u.tail(n - j).dot(u.head(n - j));
    }
    return s / static_cast<double>(n);
}

struct AdfRegression {
    double t_stat = 0.0;
    double ssr = 0.0;
    Eigen::Index nobs = 0;
    Eigen::Index regressors = 0;
};

// Regression of dy_t on [1, y_{t-1}, dy_{t-1}..dy_{t-lags}] for t >= first.
AdfRegression adf_regression(const Eigen::VectorXd& y, const Eigen::VectorXd& dy, int lags, Eigen::Index first) {
    const Eigen::Index n = y.size();
    const Eigen::Index m = n - first;
    Eigen::MatrixXd X(m, 2 + lags);
    X.col(0).setOnes();
    X.col(1) = y.segment(first - 1, m);
    // dy[i] = y[i+1] - y[i], so dy_{t-j} = dy[t-j-1].
    for (int j = 1; j <= lags; ++j) X.col(1 + j) = dy.segment(first - j - 1, m);
    const Eigen::VectorXd target = dy.segment(first - 1, m);
    const auto fit = least_squares(X, target);
    AdfRegression out;
    out.nobs = m;
    out.regressors = X.cols();
    out.ssr = fit.residuals.squaredNorm();
    const double s2 = out.ssr / static_cast<double>(m - X.cols());
    out.t_stat = fit.coef(1, 0) / std::sqrt(s2 * fit.xtx_inv(1, 1));
    return out;
}

}  // namespace

CriticalValueTable CriticalValueTable::parse(std::string_view csv) {
    CriticalValueTable table;
    bool header_seen = false;
    int line_no = 0;
    while (!csv.empty()) {
        const auto eol = csv.find('\n');
        std::string_view line = csv.substr(0, eol);
        csv = eol == std::string_view::npos ? std::string_view{} : csv.substr(eol + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            if (line != "sample_size,tail_probability,critical_value") {
                throw ParseError("critical value table: unexpected header at line " + std::to_string(line_no));
            }
            header_seen = true;
            continue;
        }
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 == std::string_view::npos ? c1 : c1 + 1);
        if (c1 == std::string_view::npos || c2 == std::string_view::npos) {
            throw ParseError("critical value table line " + std::to_string(line_no) + ": expected three fields");
        }
        table.rows_.push_back({parse_number(line.substr(0, c1), line_no),
                               parse_number(line.substr(c1 + 1, c2 - c1 - 1), line_no),
                               parse_number(line.substr(c2 + 1), line_no)});
    }
    if (table.rows_.empty()) throw ParseError("critical value table is empty");
    return table;
}

std::vector<double> CriticalValueTable::probabilities() const {
    std::vector<double> p;
    for (const auto& r : rows_) {
        if (std::find(p.begin(), p.end(), r.tail_probability) == p.end()) p.push_back(r.tail_probability);
    }
    std::sort(p.begin(), p.end());
    return p;
}

double CriticalValueTable::critical_value(double probability, double sample_size) const {
    // (1/n, value) pairs for this probability, asymptotic row at 1/n = 0.
    std::vector<std::pair<double, double>> points;
    for (const auto& r : rows_) {
        if (std::fabs(r.tail_probability - probability) < 1e-12) {
            points.emplace_back(r.sample_size > 0.0 ? 1.0 / r.sample_size : 0.0, r.critical_value);
        }
    }
    if (points.empty()) throw ValidationError("critical value table has no row for that probability");
    std::sort(points.begin(), points.end());
    const double x = sample_size > 0.0 ? 1.0 / sample_size : 0.0;
    if (x <= points.front().first) return points.front().second;
    if (x >= points.back().first) return points.back().second;
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (x <= points[i].first) {
            const auto [x0, y0] = points[i - 1];
            const auto [x1, y1] = points[i];
            return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
        }
    }
    return points.back().second;
}

double CriticalValueTable::tail_probability(double statistic, double sample_size) const {
    std::vector<std::pair<double, double>> curve;  // (critical value, probability)
    for (double p : probabilities()) curve.emplace_back(critical_value(p, sample_size), p);
    std::sort(curve.begin(), curve.end());
    if (statistic <= curve.front().first) return curve.front().second;
    if (statistic >= curve.back().first) return curve.back().second;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        if (statistic <= curve[i].first) {
            const auto [c0, p0] = curve[i - 1];
            const auto [c1, p1] = curve[i];
            return p0 + (p1 - p0) * (statistic - c0) / (c1 - c0);
        }
    }
    return curve.back().second;
}

const CriticalValueTable& dickey_fuller_table() {
    static const CriticalValueTable table = CriticalValueTable::parse(k_table_adf_constant);
    return table;
}

const CriticalValueTable& kpss_table() {
    static const CriticalValueTable table = CriticalValueTable::parse(k_table_kpss_level);
    return table;
}

int newey_west_bandwidth(Eigen::Index n) {
    return static_cast<int>(std::floor(4.0 * std::pow(static_cast<double>(n) / 100.0, 2.0 / 9.0)));
}

AdfResult adf_test(const Eigen::Ref<const Eigen::VectorXd>& y_in, int max_lag) {
    const Eigen::VectorXd y = y_in;
    const Eigen::Index n = y.size();
    if (n < 10) throw InsufficientDataError("ADF test needs at least 10 observations");
    if (max_lag < 0) max_lag = static_cast<int>(std::ceil(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
    max_lag = std::min<int>(max_lag, static_cast<int>(n / 2 - 2));
    if (max_lag < 0) throw InsufficientDataError("ADF test: series too short for any lag");
    const Eigen::VectorXd dy = y.tail(n - 1) - y.head(n - 1);

    int best_lag = 0;
    double best_bic = std::numeric_limits<double>::infinity();
    const Eigen::Index common_first = max_lag + 1;
    for (int lag = 0; lag <= max_lag; ++lag) {
        const auto r = adf_regression(y, dy, lag, common_first);
        const auto m = static_cast<double>(r.nobs);
        const double llf = -0.5 * m * (std::log(2.0 * special::k_pi) + std::log(r.ssr / m) + 1.0);
        const double bic = -2.0 * llf + std::log(m) * static_cast<double>(r.regressors);
        if (bic < best_bic) {
            best_bic = bic;
            best_lag = lag;
        }
    }

    const auto r = adf_regression(y, dy, best_lag, best_lag + 1);
    AdfResult out;
    out.statistic = r.t_stat;
    out.lags = best_lag;
    out.nobs = r.nobs;
    out.p_value = dickey_fuller_table().tail_probability(out.statistic, static_cast<double>(r.nobs));
    return out;
}

PpResult pp_test(const Eigen::Ref<const Eigen::VectorXd>& y) {
    const Eigen::Index n = y.size();
    if (n < 10) throw InsufficientDataError("Phillips-Perron test needs at least 10 observations");
    const Eigen::Index m = n - 1;
    Eigen::MatrixXd X(m, 2);
    X.col(0) = y.head(m);
    X.col(1).setOnes();
    const Eigen::VectorXd target = y.tail(m);
    const auto fit = least_squares(X, target);
    const Eigen::VectorXd u = fit.residuals.col(0);

    const int bandwidth = newey_west_bandwidth(n);
    const double lam2 = bartlett_long_run_variance(u, bandwidth);
    const double s2 = u.squaredNorm() / static_cast<double>(m - 2);
    const double s = std::sqrt(s2);
    const double gamma0 = u.squaredNorm() / static_cast<double>(m);
    const double se = std::sqrt(s2 * fit.xtx_inv(0, 0));
    const double t = (fit.coef(0, 0) - 1.0) / se;

    PpResult out;
    out.bandwidth = bandwidth;
    out.nobs = m;
    out.statistic = std::sqrt(gamma0 / lam2) * t -
                    0.5 * ((lam2 - gamma0) / std::sqrt(lam2)) * (static_cast<double>(m) * se / s);
    out.p_value = dickey_fuller_table().tail_probability(out.statistic, static_cast<double>(m));
    return out;
}

KpssResult kpss_test(const Eigen::Ref<const Eigen::VectorXd>& y) {
    const Eigen::Index n = y.size();
    if (n < 10) throw InsufficientDataError("KPSS test needs at least 10 observations");
    const Eigen::VectorXd e = y.array() - y.mean();
    double partial = 0.0;
    double eta = 0.0;
    for (Eigen::Index t = 0; t < n; ++t) {
        partial += e[t];
        eta += partial * partial;
    }
    const auto nd = static_cast<double>(n);
    eta /= nd * nd;

    KpssResult out;
    out.bandwidth = newey_west_bandwidth(n);
    const double lrv = bartlett_long_run_variance(e, out.bandwidth);
    if (!(lrv > 0.0)) throw DegenerateVarianceError("KPSS: zero long-run variance");
    out.statistic = eta / lrv;
    const auto& table = kpss_table();
    out.p_value = table.tail_probability(out.statistic, nd);
    out.reject_5pct = out.statistic > table.critical_value(0.05, nd);
    out.reject_1pct = out.statistic > table.critical_value(0.01, nd);
    return out;
}

UnitRootReport unit_root_tests(const Eigen::Ref<const Eigen::VectorXd>& y) {
    if (y.size() < 30) throw InsufficientDataError("unit-root tests need at least 30 observations");
    return {adf_test(y), pp_test(y), kpss_test(y)};
}

}  // namespace rerisk
