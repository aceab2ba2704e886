#include <gtest/gtest.h>

#include "oracle_values.hpp"
#include "rerisk/error.hpp"
#include "rerisk/factors.hpp"
#include "rerisk/random.hpp"
#include "support.hpp"

using namespace rerisk;

namespace {

Panel oracle_panel() { return testing_support::load_fixture("fixture.csv").select({"v1", "v2", "v3", "asset", "mkt"}); }

}  // namespace

TEST(Pca, MatchesReferenceEigenDecomposition) {
    const PcaResult r = pca(oracle_panel());
    const double eig[] = {oracle::pca_eigenvalues_0_0, oracle::pca_eigenvalues_0_1, oracle::pca_eigenvalues_0_2,
                          oracle::pca_eigenvalues_0_3, oracle::pca_eigenvalues_0_4};
    const double load[5][5] = {
        {oracle::pca_loadings_0_0, oracle::pca_loadings_0_1, oracle::pca_loadings_0_2, oracle::pca_loadings_0_3, oracle::pca_loadings_0_4},
        {oracle::pca_loadings_1_0, oracle::pca_loadings_1_1, oracle::pca_loadings_1_2, oracle::pca_loadings_1_3, oracle::pca_loadings_1_4},
        {oracle::pca_loadings_2_0, oracle::pca_loadings_2_1, oracle::pca_loadings_2_2, oracle::pca_loadings_2_3, oracle::pca_loadings_2_4},
        {oracle::pca_loadings_3_0, oracle::pca_loadings_3_1, oracle::pca_loadings_3_2, oracle::pca_loadings_3_3, oracle::pca_loadings_3_4},
        {oracle::pca_loadings_4_0, oracle::pca_loadings_4_1, oracle::pca_loadings_4_2, oracle::pca_loadings_4_3, oracle::pca_loadings_4_4}};
    for (int j = 0; j < 5; ++j) {
        EXPECT_NEAR(r.eigenvalues[j], eig[j], 1e-10 * eig[0]);
        for (int i = 0; i < 5; ++i) EXPECT_NEAR(r.loadings(i, j), load[i][j], 1e-9) << i << "," << j;
    }
    EXPECT_NEAR(r.cumulative_share[4], 1.0, 1e-14);
    EXPECT_FALSE(r.rank_deficient);
}

TEST(Pca, ScoresAreUncorrelatedWithEigenvalueVariances) {
    const PcaResult r = pca(oracle_panel());
    const Eigen::MatrixXd centered = r.scores.rowwise() - r.scores.colwise().mean();
    const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(r.scores.rows() - 1);
    EXPECT_TRUE(cov.isApprox(Eigen::MatrixXd(r.eigenvalues.asDiagonal()), 1e-9));
    EXPECT_TRUE((r.loadings.transpose() * r.loadings).isIdentity(1e-12));
}

TEST(Pca, ScreeAndComponentCount) {
    const PcaResult r = pca(oracle_panel());
    const auto rows = scree(r);
    ASSERT_EQ(rows.size(), 5u);
    double previous = 0.0;
    for (const auto& row : rows) {
        EXPECT_GE(row.cumulative_percent, previous);
        previous = row.cumulative_percent;
    }
    EXPECT_EQ(rows[0].component, 1);
    EXPECT_NEAR(rows[4].cumulative_percent, 100.0, 1e-10);
    const int k = components_for_share(r, 0.9);
    EXPECT_GE(r.cumulative_share[k - 1], 0.9);
    if (k > 1) EXPECT_LT(r.cumulative_share[k - 2], 0.9);
    EXPECT_EQ(components_for_share(r, 1.0), 5);
}

TEST(Pca, RejectsTooFewSeriesOrMonths) {
    const Panel one(TimeGrid(YearMonth(2000, 1), 10), {"a"}, Eigen::MatrixXd::Random(10, 1));
    EXPECT_THROW((void)pca(one), ValidationError);
    const Panel wide(TimeGrid(YearMonth(2000, 1), 3), {"a", "b", "c"}, Eigen::MatrixXd::Random(3, 3));
    EXPECT_THROW((void)pca(wide), InsufficientDataError);
}

TEST(FactorRegression, FirstScoreExplainsItself) {
    const PcaResult r = pca(oracle_panel());
    const ReturnSeries s("pc1", r.grid, r.scores.col(0));
    const FactorRegression fr = factor_regression(s, r.scores, 1);
    EXPECT_NEAR(fr.adj_r_square, 1.0, 1e-12);
    EXPECT_LT(fr.residuals.values().cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_NEAR(fr.loading_pc1, 1.0, 1e-12);
    EXPECT_TRUE(std::isnan(fr.loading_pc2));
}

TEST(FactorRegression, IndependentSeriesHasNoExplanatoryPower) {
    Rng rng(31);
    const Eigen::Index n = 100000;
    Eigen::MatrixXd v(n, 4);
    for (Eigen::Index i = 0; i < v.size(); ++i) v.data()[i] = rng.normal();
    v.col(1) += v.col(0);
    const Panel p(TimeGrid(YearMonth(1900, 1), n), {"a", "b", "c", "d"}, v);
    const PcaResult r = pca(p);
    Eigen::VectorXd y(n);
    for (auto& x : y) x = rng.normal();
    const FactorRegression fr = factor_regression(ReturnSeries("y", r.grid, y), r.scores, 3);
    EXPECT_NEAR(fr.adj_r_square, 0.0, 0.01);
}

TEST(ResidualPanel, ResidualsHaveZeroMeanAndAreOrthogonalToFactors) {
    const Panel p = oracle_panel();
    const Panel res = residual_panel(p, 2);
    EXPECT_EQ(res.labels(), p.labels());
    EXPECT_EQ(res.grid(), p.grid());
    const PcaResult r = pca(p);
    for (Eigen::Index j = 0; j < res.width(); ++j) {
        EXPECT_NEAR(res.values().col(j).mean(), 0.0, 1e-10);
        EXPECT_NEAR(res.values().col(j).dot(r.scores.col(0)), 0.0, 1e-7);
    }
    EXPECT_LT(res.values().squaredNorm(), (p.values().rowwise() - p.values().colwise().mean()).squaredNorm());
}
