#include "rerisk/gpd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "rerisk/error.hpp"
#include "rerisk/optimize.hpp"

namespace rerisk {

namespace {

constexpr double k_small_shape = 1e-6;
constexpr double k_neg_inf = -std::numeric_limits<double>::infinity();

}  // namespace

double gpd_log_likelihood(const Eigen::Ref<const Eigen::VectorXd>& y, double shape, double scale,
                          Eigen::Vector2d* grad) {
    if (!(scale > 0.0) || !(shape > -1.0) || !std::isfinite(shape)) return k_neg_inf;
    const auto m = static_cast<double>(y.size());
    const Eigen::ArrayXd a = y.array() / scale;
    const Eigen::ArrayXd t = 1.0 + shape * a;
    if ((t <= 0.0).any()) return k_neg_inf;

    double ll;
    if (std::fabs(shape) < k_small_shape) {
        // Second-order expansion in xi around the exponential limit.
        ll = -m * std::log(scale) - a.sum() - shape * (a - 0.5 * a.square()).sum() -
             shape * shape * (a.cube() / 3.0 - 0.5 * a.square()).sum();
        if (grad) {
            (*grad)[0] = (0.5 * a.square() - a).sum() + shape * (a.square() - 2.0 / 3.0 * a.cube()).sum();
        }
    } else {
        const double log_sum = t.log().sum();
        ll = -m * std::log(scale) - (1.0 + 1.0 / shape) * log_sum;
        if (grad) {
            (*grad)[0] = log_sum / (shape * shape) - (1.0 + 1.0 / shape) * (a / t).sum();
        }
    }
    if (grad) (*grad)[1] = -m / scale + (1.0 + shape) / scale * (a / t).sum();
    return ll;
}

GpdFit fit_gpd(const Eigen::Ref<const Eigen::VectorXd>& y) {
    const Eigen::Index m = y.size();
    if (m < 10) throw InsufficientDataError("GPD fit needs at least 10 exceedances, got " + std::to_string(m));
    if ((y.array() < 0.0).any() || !y.allFinite()) throw ValidationError("GPD exceedances must be finite and >= 0");
    const double mean = y.mean();
    const double var = (y.array() - mean).square().sum() / static_cast<double>(m - 1);
    if (!(mean > 0.0) || !(var > 0.0)) throw DegenerateVarianceError("GPD exceedances have no spread");

    // Minimise -logL over (xi, log beta).
    const Eigen::VectorXd yv = y;
    const Objective negative_ll = [&yv](const Eigen::VectorXd& theta, Eigen::VectorXd* grad) {
        const double scale = std::exp(theta[1]);
        Eigen::Vector2d g;
        const double ll = gpd_log_likelihood(yv, theta[0], scale, grad ? &g : nullptr);
        if (!std::isfinite(ll)) return std::numeric_limits<double>::infinity();
        if (grad) {
            grad->resize(2);
            (*grad)[0] = -g[0];
            (*grad)[1] = -g[1] * scale;
        }
        return -ll;
    };

    // Method-of-moments start, plus an exponential start as a fallback.
    const double ratio = mean * mean / var;
    const double xi0 = std::clamp(0.5 * (1.0 - ratio), -0.4, 0.8);
    const double beta0 = std::max(0.5 * mean * (ratio + 1.0), 1e-8);
    std::vector<Eigen::Vector2d> starts{{xi0, std::log(beta0)}, {0.0, std::log(mean)}, {0.3, std::log(0.7 * mean)}};

    MinimizeResult best;
    best.value = std::numeric_limits<double>::infinity();
    for (const auto& s : starts) {
        MinimizeResult r = minimize_bfgs(negative_ll, s, {.max_iterations = 500, .gradient_tolerance = 1e-10});
        if (r.value < best.value) best = r;
    }
    if (!std::isfinite(best.value)) throw Error("GPD likelihood maximisation failed");

    // Newton polish in natural (xi, beta) coordinates, where the score is reported.
    const Objective natural = [&yv](const Eigen::VectorXd& theta, Eigen::VectorXd* grad) {
        Eigen::Vector2d g;
        const double ll = gpd_log_likelihood(yv, theta[0], theta[1], grad ? &g : nullptr);
        if (!std::isfinite(ll)) return std::numeric_limits<double>::infinity();
        if (grad) *grad = -g;
        return -ll;
    };
    const Eigen::Vector2d start_natural{best.x[0], std::exp(best.x[1])};
    MinimizeResult polished = polish_newton(natural, start_natural, 30, 1e-10);

    GpdFit fit;
    fit.shape = polished.x[0];
    fit.scale = polished.x[1];
    fit.log_likelihood = -polished.value;
    fit.score_norm = polished.gradient.norm();
    fit.converged = fit.score_norm < 1e-5;
    fit.n_exceedances = m;
    fit.n = m;
    fit.exceedance_rate = 1.0;
    fit.infinite_mean = fit.shape >= 1.0;
    return fit;
}

double empirical_quantile(const Eigen::Ref<const Eigen::VectorXd>& x, double q) {
    if (x.size() == 0) throw InsufficientDataError("quantile of an empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw ValidationError("quantile level must be in [0, 1]");
    std::vector<double> sorted(x.data(), x.data() + x.size());
    std::sort(sorted.begin(), sorted.end());
    const double h = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

GpdFit fit_gpd_pot(const Eigen::Ref<const Eigen::VectorXd>& losses, double threshold_quantile) {
    if (!(threshold_quantile > 0.0 && threshold_quantile < 1.0)) {
        throw ValidationError("GPD threshold quantile must be in (0, 1)");
    }
    const double u = empirical_quantile(losses, threshold_quantile);
    std::vector<double> excess;
    for (Eigen::Index i = 0; i < losses.size(); ++i) {
        if (losses[i] > u) excess.push_back(losses[i] - u);
    }
    if (excess.size() < 10) {
        throw InsufficientDataError("only " + std::to_string(excess.size()) +
                                    " exceedances over the threshold; at least 10 are needed");
    }
    GpdFit fit = fit_gpd(Eigen::Map<const Eigen::VectorXd>(excess.data(), static_cast<Eigen::Index>(excess.size())));
    fit.threshold = u;
    fit.n = losses.size();
    fit.exceedance_rate = static_cast<double>(fit.n_exceedances) / static_cast<double>(fit.n);
    return fit;
}

}  // namespace rerisk
