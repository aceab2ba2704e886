#pragma once

#include <Eigen/Core>

namespace rerisk {

/// GARCH(1,1) parameters: x_t = mu + e_t, h_t = omega + alpha e_{t-1}^2 + beta h_{t-1}.
struct GarchParams {
    double mu = 0.0;
    double omega = 0.0;
    double alpha = 0.0;
    double beta = 0.0;

    [[nodiscard]] Eigen::Vector4d as_vector() const { return {mu, omega, alpha, beta}; }
    static GarchParams from_vector(const Eigen::Vector4d& v) { return {v[0], v[1], v[2], v[3]}; }
    [[nodiscard]] double persistence() const { return alpha + beta; }
    /// omega / (1 - alpha - beta); infinite when persistence >= 1.
    [[nodiscard]] double unconditional_variance() const;
};

struct GarchFit {
    GarchParams params;
    double initial_variance = 0.0;              ///< h_1, the sample variance
    Eigen::VectorXd conditional_variance;       ///< h_1..h_n
    double next_variance = 0.0;                 ///< h_{n+1}
    double log_likelihood = 0.0;
    int iterations = 0;
    bool converged = false;
    bool integrated = false;  ///< alpha + beta numerically at 1
};

/// Gaussian quasi-log-likelihood with h_1 = `initial_variance`. Fills the
/// analytic gradient in (mu, omega, alpha, beta) order and/or the variance
/// path h_1..h_n when requested. Returns -inf for non-positive variances.
[[nodiscard]] double garch_log_likelihood(const Eigen::Ref<const Eigen::VectorXd>& x, const GarchParams& p,
                                          double initial_variance, Eigen::Vector4d* grad = nullptr,
                                          Eigen::VectorXd* variance = nullptr);

/// Replays h_1..h_n from stored parameters.
[[nodiscard]] Eigen::VectorXd garch_variance_path(const Eigen::Ref<const Eigen::VectorXd>& x, const GarchParams& p,
                                                  double initial_variance);

/// Quasi-MLE subject to omega > 0, alpha, beta >= 0, alpha + beta < 1
/// (enforced by reparameterisation). Requires n >= 100.
[[nodiscard]] GarchFit fit_garch11(const Eigen::Ref<const Eigen::VectorXd>& x);

struct ArchLmResult {
    int lags = 0;
    Eigen::Index nobs = 0;  ///< regression observations, n - lags
    double statistic = 0.0;  ///< nobs * R^2
    double p_value = 1.0;    ///< chi-square(lags) upper tail
};

/// Engle's LM test: regress squared demeaned returns on their first `lags`
/// lags. Requires n > lags + 10.
[[nodiscard]] ArchLmResult arch_lm_test(const Eigen::Ref<const Eigen::VectorXd>& x, int lags);

}  // namespace rerisk
