#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

#include "rerisk/series.hpp"

namespace rerisk {

/// Reduced-form VAR(p) with intercept, estimated equation by equation.
///
/// Regressor layout (rows of `coefficients_table`, `std_errors`, `t_stats`):
/// row 0 is the intercept, row 1 + (l-1)k + j is lag l of series j. Column i
/// is the equation of series i.
struct VarFit {
    std::vector<std::string> labels;
    int p = 0;
    Eigen::Index nobs = 0;                 ///< effective sample n - p
    Eigen::VectorXd intercept;             ///< %/month
    std::vector<Eigen::MatrixXd> coeff;    ///< A_1..A_p, each k x k, A_l(i, j) = effect of y_{j,t-l} on y_{i,t}
    Eigen::MatrixXd coefficients_table;    ///< (1 + kp) x k
    Eigen::MatrixXd std_errors;            ///< (1 + kp) x k
    Eigen::MatrixXd t_stats;               ///< (1 + kp) x k
    Eigen::MatrixXd residual_cov;          ///< E'E / (n - p - kp - 1)
    Eigen::VectorXd r_square;
    Eigen::VectorXd adj_r_square;
    Eigen::MatrixXd residuals;             ///< nobs x k
    Eigen::MatrixXd fitted;                ///< nobs x k
    Eigen::MatrixXd data;                  ///< the full n x k input
    double max_modulus = 0.0;              ///< largest companion eigenvalue modulus
    bool stable = true;

    [[nodiscard]] Eigen::Index dimension() const { return intercept.size(); }
    /// Residual degrees of freedom nobs - kp - 1.
    [[nodiscard]] Eigen::Index dof() const;
    /// kp x kp companion matrix (empty for p = 0).
    [[nodiscard]] Eigen::MatrixXd companion() const;
    /// (I - sum A_l)^{-1} c.
    [[nodiscard]] Eigen::VectorXd unconditional_mean() const;
    /// Row label of a regressor, e.g. "const" or "X(-2)".
    [[nodiscard]] std::string regressor_name(Eigen::Index row) const;
};

/// Builds [1, y_{t-1}', ..., y_{t-p}'] for t = first..n-1.
[[nodiscard]] Eigen::MatrixXd var_design(const Eigen::MatrixXd& data, int p, Eigen::Index first);

/// Requires n > kp + 1 (after losing p initial rows). Throws
/// SingularMatrixError naming the offending lag and series when the lagged
/// regressors are collinear.
[[nodiscard]] VarFit fit_var(const Eigen::MatrixXd& data, int p, std::vector<std::string> labels = {});
[[nodiscard]] VarFit fit_var(const Panel& panel, int p);

enum class Criterion { Aic, Bic };

[[nodiscard]] const char* to_string(Criterion c);

struct LagCriteria {
    int p = 0;
    double aic = 0.0;
    double bic = 0.0;
};

/// ln|Sigma_ML| + penalty k(kp + 1)/m for p = 1..p_max, every order fitted on
/// the rows left after dropping p_max initial conditions (m of them).
[[nodiscard]] std::vector<LagCriteria> lag_criteria(const Eigen::MatrixXd& data, int p_max);
/// Argmin of the criterion over lag_criteria; ties go to the smaller order.
[[nodiscard]] int select_lag(const Eigen::MatrixXd& data, int p_max, Criterion criterion);
[[nodiscard]] int select_lag(const Panel& panel, int p_max, Criterion criterion);

/// Pairwise Granger F-tests. Entry (i, j) tests whether series j helps
/// predict series i; the diagonal is NaN.
struct GrangerTable {
    Eigen::MatrixXd f_stat;
    Eigen::MatrixXd p_value;
    int df1 = 0;
    Eigen::Index df2 = 0;
};

[[nodiscard]] GrangerTable granger_causality(const VarFit& f);

/// Psi_0 = I, Psi_s = sum_{l=1}^{min(s,p)} A_l Psi_{s-l}, for s = 0..h.
[[nodiscard]] std::vector<Eigen::MatrixXd> ma_coefficients(const VarFit& f, int h);

struct ForecastPath {
    int horizon = 0;
    Eigen::MatrixXd point;    ///< horizon x k
    Eigen::MatrixXd std_err;  ///< horizon x k
    bool stable = true;       ///< copied from the fit; unstable paths are still produced
};

/// Iterated forecasts from the last p rows of `history` (columns as in the fit).
[[nodiscard]] ForecastPath forecast(const VarFit& f, int h, const Eigen::MatrixXd& history);
/// Forecast from the end of the estimation sample.
[[nodiscard]] ForecastPath forecast(const VarFit& f, int h);

/// Impact matrix of orthogonal shocks: P is the lower Cholesky factor of the
/// covariance permuted into `ordering` (ordering[0] is placed first), mapped
/// back so that rows and columns both follow the fit's series order. For
/// the identity ordering this is P itself. Throws DecompositionError when
/// the permuted covariance is not positive definite.
[[nodiscard]] Eigen::MatrixXd orthogonal_impact(const Eigen::MatrixXd& covariance, const std::vector<int>& ordering);

struct IrfOptions {
    int n_boot = 1000;
    std::uint64_t seed = 20090531;
    int workers = 1;
    double coverage = 0.95;
};

struct IrfResult {
    int horizon = 0;
    std::vector<int> ordering;
    /// responses[s](i, j): response of series i at step s to a one-sd
    /// orthogonal shock in series j.
    std::vector<Eigen::MatrixXd> responses;
    /// Percentile bands from residual-bootstrap refits (empty if n_boot = 0).
    /// Widened where needed so that they always contain the point response.
    std::vector<Eigen::MatrixXd> lower;
    std::vector<Eigen::MatrixXd> upper;
    int n_boot = 0;
    int failed_replications = 0;  ///< bootstrap samples whose refit was singular
    std::uint64_t seed = 0;
};

/// Identity ordering when `ordering` is empty. Bootstrap replication b draws
/// from Rng(mix_seed(seed, b)), so the bands do not depend on `workers`.
[[nodiscard]] IrfResult irf(const VarFit& f, int h, std::vector<int> ordering = {}, const IrfOptions& options = {});

struct FevdResult {
    int horizon = 0;
    std::vector<int> ordering;
    /// shares[s - 1](i, j): fraction of series i's s-step forecast-error
    /// variance due to shock j, s = 1..horizon. Rows sum to one.
    std::vector<Eigen::MatrixXd> shares;
};

[[nodiscard]] FevdResult fevd(const VarFit& f, int h, std::vector<int> ordering = {});

}  // namespace rerisk
