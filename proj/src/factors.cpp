#include "rerisk/factors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>

#include "rerisk/error.hpp"
#include "rerisk/least_squares.hpp"

namespace rerisk {

PcaResult pca(const Panel& p) {
    const Eigen::Index n = p.length();
    const Eigen::Index k = p.width();
    if (k < 2) throw ValidationError("PCA needs at least two series");
    if (n <= k) throw InsufficientDataError("PCA needs more months than series");

    PcaResult out;
    out.labels = p.labels();
    out.grid = p.grid();
    out.means = p.values().colwise().mean().transpose();
    const Eigen::MatrixXd centered = p.values().rowwise() - out.means.transpose();
    const Eigen::MatrixXd cov = (centered.adjoint() * centered) / static_cast<double>(n - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) throw SingularMatrixError("PCA eigendecomposition failed");
    // Eigen returns ascending order.
    out.eigenvalues = solver.eigenvalues().reverse();
    out.loadings = solver.eigenvectors().rowwise().reverse();
    for (Eigen::Index j = 0; j < k; ++j) {
        Eigen::Index arg = 0;
        out.loadings.col(j).cwiseAbs().maxCoeff(&arg);
        if (out.loadings(arg, j) < 0.0) out.loadings.col(j) *= -1.0;
    }
    out.scores = centered * out.loadings;

    const double total = out.eigenvalues.sum();
    out.cumulative_share.resize(k);
    double running = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) {
        running += out.eigenvalues[j];
        out.cumulative_share[j] = total > 0.0 ? running / total : 0.0;
    }
    out.cumulative_share[k - 1] = 1.0;
    out.rank_deficient = out.eigenvalues[k - 1] <= 1e-10 * std::max(out.eigenvalues[0], 1e-300);
    return out;
}

std::vector<ScreeRow> scree(const PcaResult& r) {
    std::vector<ScreeRow> rows;
    const double total = r.eigenvalues.sum();
    for (Eigen::Index j = 0; j < r.eigenvalues.size(); ++j) {
        rows.push_back({static_cast<int>(j + 1), r.eigenvalues[j], 100.0 * r.eigenvalues[j] / total,
                        100.0 * r.cumulative_share[j]});
    }
    return rows;
}

int components_for_share(const PcaResult& r, double share) {
    if (!(share > 0.0 && share <= 1.0)) throw ValidationError("explained-variance share must be in (0, 1]");
    for (Eigen::Index j = 0; j < r.cumulative_share.size(); ++j) {
        if (r.cumulative_share[j] >= share - 1e-12) return static_cast<int>(j + 1);
    }
    return static_cast<int>(r.cumulative_share.size());
}

FactorRegression factor_regression(const ReturnSeries& s, const Eigen::MatrixXd& scores, int k) {
    const Eigen::Index n = s.size();
    if (scores.rows() != n) throw AlignmentError("factor regression: scores and series lengths differ");
    if (k < 0 || k > scores.cols()) throw ValidationError("factor regression: k exceeds available components");
    if (n <= k + 1) throw InsufficientDataError("factor regression needs more than k + 1 observations");

    Eigen::MatrixXd X(n, k + 1);
    X.col(0).setOnes();
    X.rightCols(k) = scores.leftCols(k);
    LeastSquares<double> fit;
    try {
        fit = least_squares(X, s.values());
    } catch (const SingularMatrixError&) {
        throw SingularMatrixError("factor regression for '" + s.label() + "': score columns are collinear");
    }

    FactorRegression out;
    out.k = k;
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    out.loading_pc1 = k >= 1 ? fit.coef(1, 0) : nan;
    out.loading_pc2 = k >= 2 ? fit.coef(2, 0) : nan;
    const Eigen::VectorXd resid = fit.residuals.col(0);
    out.r_square = r_squared(s.values(), resid);
    out.adj_r_square =
        1.0 - (1.0 - out.r_square) * static_cast<double>(n - 1) / static_cast<double>(n - k - 1);
    out.residuals = ReturnSeries(s.label(), s.grid(), resid);
    return out;
}

Panel residual_panel(const Panel& p, int k) {
    if (k < 0 || k > p.width()) throw ValidationError("residual panel: factor count exceeds panel width");
    Eigen::MatrixXd resid(p.length(), p.width());
    if (k == 0) {
        resid = p.values().rowwise() - p.values().colwise().mean();
        return {p.grid(), p.labels(), std::move(resid)};
    }
    const PcaResult r = pca(p);
    for (Eigen::Index j = 0; j < p.width(); ++j) {
        resid.col(j) = factor_regression(p.series(j), r.scores, k).residuals.values();
    }
    return {p.grid(), p.labels(), std::move(resid)};
}

}  // namespace rerisk
