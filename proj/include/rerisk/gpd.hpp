#pragma once

#include <Eigen/Core>

namespace rerisk {

/// Generalized Pareto fit to the exceedances of a loss series over a
/// threshold u (peaks over threshold).
struct GpdFit {
    double threshold = 0.0;  ///< u, loss scale
    double shape = 0.0;      ///< xi
    double scale = 0.0;      ///< beta > 0
    Eigen::Index n_exceedances = 0;
    Eigen::Index n = 0;
    double exceedance_rate = 0.0;  ///< n_exceedances / n
    double log_likelihood = 0.0;
    double score_norm = 0.0;  ///< |gradient| at the reported optimum, natural parameters
    bool converged = false;
    bool infinite_mean = false;  ///< shape >= 1
};

/// GPD log-likelihood of exceedances y >= 0. When `grad` is non-null it
/// receives (d/dxi, d/dbeta). Returns -inf outside the support.
[[nodiscard]] double gpd_log_likelihood(const Eigen::Ref<const Eigen::VectorXd>& exceedances, double shape,
                                        double scale, Eigen::Vector2d* grad = nullptr);

/// Maximum-likelihood (xi, beta) for exceedances measured from zero.
/// Requires at least 10 exceedances (InsufficientDataError otherwise).
[[nodiscard]] GpdFit fit_gpd(const Eigen::Ref<const Eigen::VectorXd>& exceedances);

/// Threshold at the empirical `threshold_quantile` of the losses (linear
/// interpolation between order statistics), then MLE on the exceedances.
[[nodiscard]] GpdFit fit_gpd_pot(const Eigen::Ref<const Eigen::VectorXd>& losses, double threshold_quantile = 0.90);

/// Linear-interpolation empirical quantile (the "type 7" definition).
[[nodiscard]] double empirical_quantile(const Eigen::Ref<const Eigen::VectorXd>& x, double q);

}  // namespace rerisk
