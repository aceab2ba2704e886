#include "rerisk/garch.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rerisk/error.hpp"
#include "rerisk/least_squares.hpp"
#include "rerisk/optimize.hpp"
#include "rerisk/special.hpp"

namespace rerisk {

namespace {

const double k_log_2pi = std::log(2.0 * special::k_pi);

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

GarchParams from_unconstrained(const Eigen::VectorXd& theta) {
    const double s = logistic(theta[2]);
    const double r = logistic(theta[3]);
    return {theta[0], std::exp(theta[1]), s * r, s * (1.0 - r)};
}

Eigen::VectorXd to_unconstrained(const GarchParams& p) {
    Eigen::VectorXd theta(4);
    const double s = p.alpha + p.beta;
    theta << p.mu, std::log(p.omega), logit(s), logit(p.alpha / s);
    return theta;
}

}  // namespace

double GarchParams::unconditional_variance() const {
    const double s = persistence();
    return s < 1.0 ? omega / (1.0 - s) : std::numeric_limits<double>::infinity();
}

double garch_log_likelihood(const Eigen::Ref<const Eigen::VectorXd>& x, const GarchParams& p, double initial_variance,
                            Eigen::Vector4d* grad, Eigen::VectorXd* variance) {
    constexpr double neg_inf = -std::numeric_limits<double>::infinity();
    if (!(p.omega > 0.0) || p.alpha < 0.0 || p.beta < 0.0 || !(initial_variance > 0.0)) return neg_inf;
    const Eigen::Index n = x.size();
    if (variance) variance->resize(n);

    double h = initial_variance;
    Eigen::Vector4d dh = Eigen::Vector4d::Zero();
    Eigen::Vector4d g = Eigen::Vector4d::Zero();
    double ll = 0.0;
    double e_prev = 0.0;
    for (Eigen::Index t = 0; t < n; ++t) {
        if (t > 0) {
            const double h_prev = h;
            h = p.omega + p.alpha * e_prev * e_prev + p.beta * h_prev;
            if (grad) {
                dh = Eigen::Vector4d(-2.0 * p.alpha * e_prev, 1.0, e_prev * e_prev, h_prev) + p.beta * dh;
            }
        }
        if (!(h > 0.0) || !std::isfinite(h)) return neg_inf;
        const double e = x[t] - p.mu;
        ll -= 0.5 * (k_log_2pi + std::log(h) + e * e / h);
        if (grad) {
            g += -0.5 * (1.0 / h - e * e / (h * h)) * dh;
            g[0] += e / h;
        }
        if (variance) (*variance)[t] = h;
        e_prev = e;
    }
    if (grad) *grad = g;
    return ll;
}

Eigen::VectorXd garch_variance_path(const Eigen::Ref<const Eigen::VectorXd>& x, const GarchParams& p,
                                    double initial_variance) {
    Eigen::VectorXd h;
    if (!std::isfinite(garch_log_likelihood(x, p, initial_variance, nullptr, &h))) {
        throw ValidationError("GARCH parameters give a non-positive variance path");
    }
    return h;
}

GarchFit fit_garch11(const Eigen::Ref<const Eigen::VectorXd>& x) {
    const Eigen::Index n = x.size();
    if (n < 100) throw InsufficientDataError("GARCH(1,1) fit needs at least 100 observations");
    if (!x.allFinite()) throw ValidationError("GARCH fit: non-finite observations");
    const double mean = x.mean();
    const double var = (x.array() - mean).square().sum() / static_cast<double>(n - 1);
    if (!(var > 0.0)) throw DegenerateVarianceError("GARCH fit: constant series");

    const Eigen::VectorXd xv = x;
    const Objective negative_ll = [&xv, var](const Eigen::VectorXd& theta, Eigen::VectorXd* grad) {
        const GarchParams p = from_unconstrained(theta);
        Eigen::Vector4d g;
        const double ll = garch_log_likelihood(xv, p, var, grad ? &g : nullptr);
        if (!std::isfinite(ll)) return std::numeric_limits<double>::infinity();
        if (grad) {
            const double s = p.alpha + p.beta;
            const double r = s > 0.0 ? p.alpha / s : 0.0;
            grad->resize(4);
            (*grad)[0] = -g[0];
            (*grad)[1] = -g[1] * p.omega;
            (*grad)[2] = -(g[2] * r + g[3] * (1.0 - r)) * s * (1.0 - s);
            (*grad)[3] = -(g[2] - g[3]) * s * r * (1.0 - r);
        }
        return -ll;
    };

    MinimizeResult best;
    best.value = std::numeric_limits<double>::infinity();
    for (const auto& [a, b] : {std::pair{0.05, 0.90}, {0.10, 0.80}, {0.15, 0.60}, {0.03, 0.95}}) {
        const GarchParams start{mean, var * (1.0 - a - b), a, b};
        MinimizeResult r = minimize_bfgs(negative_ll, to_unconstrained(start),
                                         {.max_iterations = 2000, .gradient_tolerance = 1e-8});
        if (r.value < best.value) best = r;
    }
    if (!std::isfinite(best.value)) throw Error("GARCH likelihood maximisation failed");

    GarchParams params = from_unconstrained(best.x);
    int iterations = best.iterations;

    // Interior optima get a Newton polish in natural coordinates.
    const Objective natural = [&xv, var](const Eigen::VectorXd& v, Eigen::VectorXd* grad) {
        const GarchParams p = GarchParams::from_vector(v);
        if (p.alpha + p.beta >= 1.0) return std::numeric_limits<double>::infinity();
        Eigen::Vector4d g;
        const double ll = garch_log_likelihood(xv, p, var, grad ? &g : nullptr);
        if (!std::isfinite(ll)) return std::numeric_limits<double>::infinity();
        if (grad) *grad = -g;
        return -ll;
    };
    bool converged = best.converged;
    if (params.alpha > 1e-4 && params.beta > 1e-4 && params.persistence() < 0.999) {
        MinimizeResult polished = polish_newton(natural, params.as_vector(), 20, 1e-8);
        if (polished.value <= best.value) {
            params = GarchParams::from_vector(polished.x);
            iterations += polished.iterations;
            converged = converged || polished.converged;
        }
    }

    GarchFit fit;
    fit.params = params;
    fit.initial_variance = var;
    fit.log_likelihood = garch_log_likelihood(xv, params, var, nullptr, &fit.conditional_variance);
    const double e_last = xv[n - 1] - params.mu;
    fit.next_variance = params.omega + params.alpha * e_last * e_last + params.beta * fit.conditional_variance[n - 1];
    fit.iterations = iterations;
    fit.converged = converged;
    fit.integrated = params.persistence() > 0.999;
    return fit;
}

ArchLmResult arch_lm_test(const Eigen::Ref<const Eigen::VectorXd>& x, int lags) {
    const Eigen::Index n = x.size();
    if (lags < 1) throw ValidationError("ARCH-LM needs at least one lag");
    if (n <= lags + 10) throw InsufficientDataError("ARCH-LM needs more than lags + 10 observations");
    const Eigen::VectorXd sq = (x.array() - x.mean()).square().matrix();
    const Eigen::Index m = n - lags;
    Eigen::MatrixXd X(m, lags + 1);
    X.col(0).setOnes();
    for (int j = 1; j <= lags; ++j) X.col(j) = sq.segment(lags - j, m);
    const Eigen::VectorXd y = sq.tail(m);
    const auto fit = least_squares(X, y);

    ArchLmResult out;
    out.lags = lags;
    out.nobs = m;
    out.statistic = static_cast<double>(m) * r_squared(y, fit.residuals.col(0));
    out.p_value = special::chi2_sf(out.statistic, lags);
    return out;
}

}  // namespace rerisk
