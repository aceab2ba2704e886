#include "rerisk/var.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "rerisk/error.hpp"
#include "rerisk/gpd.hpp"
#include "rerisk/least_squares.hpp"
#include "rerisk/random.hpp"
#include "rerisk/special.hpp"

namespace rerisk {

namespace {

std::vector<int> checked_ordering(std::vector<int> ordering, Eigen::Index k) {
    if (ordering.empty()) {
        ordering.resize(static_cast<std::size_t>(k));
        std::iota(ordering.begin(), ordering.end(), 0);
        return ordering;
    }
    std::vector<int> sorted = ordering;
    std::sort(sorted.begin(), sorted.end());
    for (Eigen::Index i = 0; i < k; ++i) {
        if (static_cast<Eigen::Index>(sorted.size()) != k || sorted[static_cast<std::size_t>(i)] != i) {
            throw ValidationError("Cholesky ordering must be a permutation of the series indices");
        }
    }
    return ordering;
}

std::vector<Eigen::MatrixXd> orthogonal_responses(const VarFit& f, int h, const Eigen::MatrixXd& impact) {
    auto psi = ma_coefficients(f, h);
    for (auto& m : psi) m = m * impact;
    return psi;
}

std::string lag_label(const std::vector<std::string>& labels, Eigen::Index k, Eigen::Index row) {
    const Eigen::Index lag = (row - 1) / k + 1;
    const Eigen::Index series = (row - 1) % k;
    const std::string name =
        static_cast<std::size_t>(series) < labels.size() ? labels[static_cast<std::size_t>(series)]
                                                         : "y" + std::to_string(series + 1);
    return name + "(-" + std::to_string(lag) + ")";
}

}  // namespace

Eigen::Index VarFit::dof() const { return nobs - dimension() * p - 1; }

Eigen::MatrixXd VarFit::companion() const {
    const Eigen::Index k = dimension();
    if (p == 0) return {};
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(k * p, k * p);
    for (int l = 0; l < p; ++l) c.block(0, l * k, k, k) = coeff[static_cast<std::size_t>(l)];
    if (p > 1) c.block(k, 0, k * (p - 1), k * (p - 1)).setIdentity();
    return c;
}

Eigen::VectorXd VarFit::unconditional_mean() const {
    const Eigen::Index k = dimension();
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(k, k);
    for (const auto& a : coeff) m -= a;
    return m.fullPivLu().solve(intercept);
}

std::string VarFit::regressor_name(Eigen::Index row) const {
    return row == 0 ? "const" : lag_label(labels, dimension(), row);
}

Eigen::MatrixXd var_design(const Eigen::MatrixXd& data, int p, Eigen::Index first) {
    const Eigen::Index k = data.cols();
    const Eigen::Index m = data.rows() - first;
    Eigen::MatrixXd X(m, 1 + k * p);
    X.col(0).setOnes();
    for (int l = 1; l <= p; ++l) X.middleCols(1 + (l - 1) * k, k) = data.middleRows(first - l, m);
    return X;
}

VarFit fit_var(const Eigen::MatrixXd& data, int p, std::vector<std::string> labels) {
    const Eigen::Index n = data.rows();
    const Eigen::Index k = data.cols();
    if (p < 0) throw ValidationError("VAR lag order must be non-negative");
    if (k < 1) throw ValidationError("VAR needs at least one series");
    if (!data.allFinite()) throw ValidationError("VAR input contains non-finite values");
    if (n - p <= k * p + 1) {
        throw InsufficientDataError("VAR(" + std::to_string(p) + ") on " + std::to_string(k) + " series needs more than " +
                                    std::to_string(k * p + 1 + p) + " observations, got " + std::to_string(n));
    }
    if (labels.empty()) {
        for (Eigen::Index j = 0; j < k; ++j) labels.push_back("y" + std::to_string(j + 1));
    }
    if (static_cast<Eigen::Index>(labels.size()) != k) throw ValidationError("VAR: one label per series required");

    VarFit f;
    f.labels = std::move(labels);
    f.p = p;
    f.nobs = n - p;
    f.data = data;

    const Eigen::MatrixXd X = var_design(data, p, p);
    const Eigen::MatrixXd Y = data.bottomRows(f.nobs);
    if (const auto dependent = dependent_columns(X); !dependent.empty()) {
        std::string names;
        for (const auto c : dependent) {
            if (!names.empty()) names += ", ";
            names += c == 0 ? "const" : lag_label(f.labels, k, c);
        }
        throw SingularMatrixError("VAR(" + std::to_string(p) + ") regressors are collinear: " + names);
    }
    const auto ls = least_squares(X, Y);

    f.coefficients_table = ls.coef;
    f.intercept = ls.coef.row(0).transpose();
    for (int l = 1; l <= p; ++l) f.coeff.push_back(ls.coef.middleRows(1 + (l - 1) * k, k).transpose());
    f.residuals = ls.residuals;
    f.fitted = Y - ls.residuals;

    const auto dof = static_cast<double>(f.dof());
    f.residual_cov = ls.residuals.transpose() * ls.residuals / dof;
    f.residual_cov = 0.5 * (f.residual_cov + f.residual_cov.transpose()).eval();

    const Eigen::VectorXd diag_inv = ls.xtx_inv.diagonal();
    f.std_errors.resize(X.cols(), k);
    for (Eigen::Index i = 0; i < k; ++i) {
        f.std_errors.col(i) = (diag_inv * f.residual_cov(i, i)).cwiseSqrt();
    }
    f.t_stats = f.coefficients_table.cwiseQuotient(f.std_errors);

    f.r_square.resize(k);
    f.adj_r_square.resize(k);
    const auto m = static_cast<double>(f.nobs);
    for (Eigen::Index i = 0; i < k; ++i) {
        const double sst = (Y.col(i).array() - Y.col(i).mean()).square().sum();
        const double r2 = sst > 0.0 ? 1.0 - ls.residuals.col(i).squaredNorm() / sst
                                    : std::numeric_limits<double>::quiet_NaN();
        f.r_square[i] = r2;
        f.adj_r_square[i] = 1.0 - (1.0 - r2) * (m - 1.0) / dof;
    }

    if (p > 0) {
        const Eigen::EigenSolver<Eigen::MatrixXd> es(f.companion(), false);
        f.max_modulus = es.eigenvalues().cwiseAbs().maxCoeff();
    }
    f.stable = f.max_modulus < 1.0;
    return f;
}

VarFit fit_var(const Panel& panel, int p) { return fit_var(panel.values(), p, panel.labels()); }

const char* to_string(Criterion c) { return c == Criterion::Aic ? "AIC" : "BIC"; }

std::vector<LagCriteria> lag_criteria(const Eigen::MatrixXd& data, int p_max) {
    const Eigen::Index n = data.rows();
    const Eigen::Index k = data.cols();
    if (p_max < 1) throw ValidationError("lag selection needs p_max >= 1");
    const Eigen::Index m = n - p_max;
    if (m <= k * p_max + 1) {
        throw InsufficientDataError("lag selection up to " + std::to_string(p_max) + " needs more observations");
    }
    const Eigen::MatrixXd Y = data.bottomRows(m);
    const auto md = static_cast<double>(m);
    std::vector<LagCriteria> out;
    for (int p = 1; p <= p_max; ++p) {
        const Eigen::MatrixXd X = var_design(data, p, p_max);
        const auto ls = least_squares(X, Y);
        const Eigen::MatrixXd sigma = ls.residuals.transpose() * ls.residuals / md;
        const Eigen::LLT<Eigen::MatrixXd> llt(sigma);
        if (llt.info() != Eigen::Success) throw SingularMatrixError("lag selection: singular residual covariance");
        const double log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
        const auto params = static_cast<double>(k * (k * p + 1));
        out.push_back({p, log_det + 2.0 * params / md, log_det + std::log(md) * params / md});
    }
    return out;
}

int select_lag(const Eigen::MatrixXd& data, int p_max, Criterion criterion) {
    const auto rows = lag_criteria(data, p_max);
    int best = rows.front().p;
    double best_value = std::numeric_limits<double>::infinity();
    for (const auto& r : rows) {
        const double v = criterion == Criterion::Aic ? r.aic : r.bic;
        if (v < best_value) {
            best_value = v;
            best = r.p;
        }
    }
    return best;
}

int select_lag(const Panel& panel, int p_max, Criterion criterion) {
    return select_lag(panel.values(), p_max, criterion);
}

GrangerTable granger_causality(const VarFit& f) {
    const Eigen::Index k = f.dimension();
    GrangerTable g;
    g.df1 = f.p;
    g.df2 = f.dof();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    g.f_stat = Eigen::MatrixXd::Constant(k, k, nan);
    g.p_value = Eigen::MatrixXd::Constant(k, k, nan);
    if (f.p == 0 || k < 2) return g;
    if (g.df2 <= 0) throw InsufficientDataError("Granger test: no residual degrees of freedom");

    const Eigen::MatrixXd X = var_design(f.data, f.p, f.p);
    const Eigen::MatrixXd Y = f.data.bottomRows(f.nobs);
    for (Eigen::Index j = 0; j < k; ++j) {
        // Drop every lag of series j.
        std::vector<Eigen::Index> keep{0};
        for (Eigen::Index c = 1; c < X.cols(); ++c) {
            if ((c - 1) % k != j) keep.push_back(c);
        }
        const Eigen::MatrixXd Xr = X(Eigen::all, keep);
        const auto restricted = least_squares(Xr, Y);
        for (Eigen::Index i = 0; i < k; ++i) {
            if (i == j) continue;
            const double ssr_u = f.residuals.col(i).squaredNorm();
            const double ssr_r = restricted.residuals.col(i).squaredNorm();
            const double F = ((ssr_r - ssr_u) / f.p) / (ssr_u / static_cast<double>(g.df2));
            g.f_stat(i, j) = F;
            g.p_value(i, j) = special::f_sf(F, f.p, static_cast<double>(g.df2));
        }
    }
    return g;
}

std::vector<Eigen::MatrixXd> ma_coefficients(const VarFit& f, int h) {
    if (h < 0) throw ValidationError("horizon must be non-negative");
    const Eigen::Index k = f.dimension();
    std::vector<Eigen::MatrixXd> psi;
    psi.reserve(static_cast<std::size_t>(h) + 1);
    psi.push_back(Eigen::MatrixXd::Identity(k, k));
    for (int s = 1; s <= h; ++s) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(k, k);
        for (int l = 1; l <= std::min(s, f.p); ++l) {
            m.noalias() += f.coeff[static_cast<std::size_t>(l - 1)] * psi[static_cast<std::size_t>(s - l)];
        }
        psi.push_back(std::move(m));
    }
    return psi;
}

ForecastPath forecast(const VarFit& f, int h, const Eigen::MatrixXd& history) {
    const Eigen::Index k = f.dimension();
    if (h < 1) throw ValidationError("forecast horizon must be at least 1");
    if (history.cols() != k) throw ValidationError("forecast history has the wrong number of series");
    if (history.rows() < f.p) throw InsufficientDataError("forecast history is shorter than the lag order");

    ForecastPath out;
    out.horizon = h;
    out.stable = f.stable;
    out.point.resize(h, k);
    out.std_err.resize(h, k);

    // path rows: the p terminal observations followed by the forecasts.
    Eigen::MatrixXd path(f.p + h, k);
    path.topRows(f.p) = history.bottomRows(f.p);
    for (int s = 0; s < h; ++s) {
        Eigen::VectorXd y = f.intercept;
        for (int l = 1; l <= f.p; ++l) y.noalias() += f.coeff[static_cast<std::size_t>(l - 1)] * path.row(f.p + s - l).transpose();
        path.row(f.p + s) = y.transpose();
    }
    out.point = path.bottomRows(h);

    const auto psi = ma_coefficients(f, h - 1);
    Eigen::MatrixXd mse = Eigen::MatrixXd::Zero(k, k);
    for (int s = 0; s < h; ++s) {
        const auto& m = psi[static_cast<std::size_t>(s)];
        mse.noalias() += m * f.residual_cov * m.transpose();
        out.std_err.row(s) = mse.diagonal().cwiseSqrt().transpose();
    }
    return out;
}

ForecastPath forecast(const VarFit& f, int h) { return forecast(f, h, f.data); }

Eigen::MatrixXd orthogonal_impact(const Eigen::MatrixXd& covariance, const std::vector<int>& ordering_in) {
    const Eigen::Index k = covariance.rows();
    const auto ordering = checked_ordering(ordering_in, k);
    Eigen::MatrixXd permuted(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = 0; b < k; ++b) permuted(a, b) = covariance(ordering[a], ordering[b]);
    }
    const Eigen::LLT<Eigen::MatrixXd> llt(permuted);
    if (llt.info() != Eigen::Success) {
        throw DecompositionError("residual covariance is not positive definite under the requested ordering");
    }
    const Eigen::MatrixXd P = llt.matrixL();
    Eigen::MatrixXd impact(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = 0; b < k; ++b) impact(ordering[a], ordering[b]) = P(a, b);
    }
    return impact;
}

IrfResult irf(const VarFit& f, int h, std::vector<int> ordering, const IrfOptions& options) {
    const Eigen::Index k = f.dimension();
    if (h < 0) throw ValidationError("IRF horizon must be non-negative");
    if (options.n_boot < 0) throw ValidationError("bootstrap count must be non-negative");
    if (!(options.coverage > 0.0 && options.coverage < 1.0)) throw ValidationError("band coverage must lie in (0, 1)");

    IrfResult out;
    out.horizon = h;
    out.ordering = checked_ordering(std::move(ordering), k);
    out.responses = orthogonal_responses(f, h, orthogonal_impact(f.residual_cov, out.ordering));
    out.n_boot = options.n_boot;
    out.seed = options.seed;
    if (options.n_boot == 0) return out;

    const auto steps = static_cast<std::size_t>(h) + 1;
    const Eigen::Index block = k * k;
    // draws(b, s * k * k + cell): replication b of response cell at step s.
    Eigen::MatrixXd draws(options.n_boot, static_cast<Eigen::Index>(steps) * block);
    std::vector<char> failed(static_cast<std::size_t>(options.n_boot), 0);

    const Eigen::MatrixXd centered = f.residuals.rowwise() - f.residuals.colwise().mean();
    const Eigen::Index n = f.data.rows();

    const auto replicate = [&](int b) {
        Rng rng(mix_seed(options.seed, static_cast<std::uint64_t>(b)));
        Eigen::MatrixXd y(n, k);
        y.topRows(f.p) = f.data.topRows(f.p);
        for (Eigen::Index t = f.p; t < n; ++t) {
            Eigen::VectorXd v = f.intercept;
            for (int l = 1; l <= f.p; ++l) v.noalias() += f.coeff[static_cast<std::size_t>(l - 1)] * y.row(t - l).transpose();
            const auto draw = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(f.nobs)));
            y.row(t) = v.transpose() + centered.row(draw);
        }
        try {
            const VarFit refit = fit_var(y, f.p, f.labels);
            const auto theta = orthogonal_responses(refit, h, orthogonal_impact(refit.residual_cov, out.ordering));
            for (std::size_t s = 0; s < steps; ++s) {
                draws.row(b).segment(static_cast<Eigen::Index>(s) * block, block) =
                    Eigen::Map<const Eigen::RowVectorXd>(theta[s].data(), block);
            }
        } catch (const Error&) {
            failed[static_cast<std::size_t>(b)] = 1;
        }
    };

    const int workers = std::max(1, std::min(options.workers, options.n_boot));
    if (workers == 1) {
        for (int b = 0; b < options.n_boot; ++b) replicate(b);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (int b = w; b < options.n_boot; b += workers) replicate(b);
            });
        }
        for (auto& t : pool) t.join();
    }

    std::vector<Eigen::Index> ok;
    for (int b = 0; b < options.n_boot; ++b) {
        if (failed[static_cast<std::size_t>(b)]) {
            ++out.failed_replications;
        } else {
            ok.push_back(b);
        }
    }
    const double tail = 0.5 * (1.0 - options.coverage);
    out.lower.assign(steps, Eigen::MatrixXd(k, k));
    out.upper.assign(steps, Eigen::MatrixXd(k, k));
    for (std::size_t s = 0; s < steps; ++s) {
        for (Eigen::Index cell = 0; cell < block; ++cell) {
            const double point = out.responses[s].data()[cell];
            double lo = point;
            double hi = point;
            if (!ok.empty()) {
                const Eigen::VectorXd column = draws(ok, static_cast<Eigen::Index>(s) * block + cell);
                lo = std::min(lo, empirical_quantile(column, tail));
                hi = std::max(hi, empirical_quantile(column, 1.0 - tail));
            }
            out.lower[s].data()[cell] = lo;
            out.upper[s].data()[cell] = hi;
        }
    }
    return out;
}

FevdResult fevd(const VarFit& f, int h, std::vector<int> ordering) {
    const Eigen::Index k = f.dimension();
    if (h < 1) throw ValidationError("FEVD horizon must be at least 1");
    FevdResult out;
    out.horizon = h;
    out.ordering = checked_ordering(std::move(ordering), k);
    const auto theta = orthogonal_responses(f, h - 1, orthogonal_impact(f.residual_cov, out.ordering));
    Eigen::MatrixXd accumulated = Eigen::MatrixXd::Zero(k, k);
    for (int s = 0; s < h; ++s) {
        accumulated += theta[static_cast<std::size_t>(s)].cwiseAbs2();
        const Eigen::VectorXd total = accumulated.rowwise().sum();
        out.shares.push_back(total.cwiseInverse().asDiagonal() * accumulated);
    }
    return out;
}

}  // namespace rerisk
