#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

#include "rerisk/series.hpp"

namespace rerisk {

/// Principal components of a panel's sample covariance matrix.
///
/// Columns of `loadings` are unit-norm eigenvectors ordered by descending
/// eigenvalue; each column is signed so that its largest-magnitude entry is
/// positive, which makes the output independent of the eigen-solver's sign
/// choices. `scores` are the demeaned returns projected on the loadings.
struct PcaResult {
    std::vector<std::string> labels;
    TimeGrid grid;
    Eigen::VectorXd means;
    Eigen::VectorXd eigenvalues;       ///< %^2/month^2, descending
    Eigen::MatrixXd loadings;          ///< series x components
    Eigen::MatrixXd scores;            ///< months x components
    Eigen::VectorXd cumulative_share;  ///< fraction of total variance
    bool rank_deficient = false;
};

/// Requires at least 2 series and more months than series.
[[nodiscard]] PcaResult pca(const Panel& p);

struct ScreeRow {
    int component = 0;  ///< 1-based
    double eigenvalue = 0.0;
    double percent = 0.0;
    double cumulative_percent = 0.0;
};

[[nodiscard]] std::vector<ScreeRow> scree(const PcaResult& r);

/// Smallest number of components whose cumulative share reaches `share`.
[[nodiscard]] int components_for_share(const PcaResult& r, double share = 0.90);

struct FactorRegression {
    int k = 0;
    double loading_pc1 = 0.0;  ///< NaN when k < 1
    double loading_pc2 = 0.0;  ///< NaN when k < 2
    double r_square = 0.0;
    double adj_r_square = 0.0;
    ReturnSeries residuals;
};

/// OLS of `s` on an intercept and the first k score columns.
[[nodiscard]] FactorRegression factor_regression(const ReturnSeries& s, const Eigen::MatrixXd& scores, int k);

/// Residuals of every series after regressing it on the panel's first k
/// principal components. Labels are unchanged.
[[nodiscard]] Panel residual_panel(const Panel& p, int k);

}  // namespace rerisk
