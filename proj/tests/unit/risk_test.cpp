#include <gtest/gtest.h>

#include <cmath>

#include "oracle_values.hpp"
#include "rerisk/error.hpp"
#include "rerisk/random.hpp"
#include "rerisk/risk.hpp"
#include "rerisk/special.hpp"
#include "rerisk/synth.hpp"
#include "support.hpp"

using namespace rerisk;

namespace {

MixtureFit mixture(std::vector<double> w, std::vector<double> m, std::vector<double> s) {
    MixtureFit f;
    f.k = static_cast<int>(w.size());
    f.weights = Eigen::Map<Eigen::VectorXd>(w.data(), f.k);
    f.means = Eigen::Map<Eigen::VectorXd>(m.data(), f.k);
    f.sds = Eigen::Map<Eigen::VectorXd>(s.data(), f.k);
    return f;
}

}  // namespace

TEST(Risk, StandardNormalFractileAndShortfall) {
    const MixtureFit n01 = mixture({1.0}, {0.0}, {1.0});
    EXPECT_NEAR(loss_fractile(n01, 0.95), 1.6449, 1e-4);
    EXPECT_NEAR(average_loss(n01, 0.95), 2.0627, 1e-3);
    EXPECT_NEAR(loss_fractile(n01, 0.999), special::normal_quantile(0.999), 1e-9);
}

TEST(Risk, TwoComponentMixtureMatchesReference) {
    // Reference values describe returns; the fit is on losses.
    const MixtureFit m = mixture({0.9, 0.1}, {-1.2, 2.0}, {4.0, 12.0});
    EXPECT_NEAR(loss_fractile(m, 0.95), oracle::mix_var_095, 1e-8);
    EXPECT_NEAR(loss_fractile(m, 0.99), oracle::mix_var_099, 1e-8);
    EXPECT_NEAR(loss_fractile(m, 0.999), oracle::mix_var_0999, 1e-8);
    EXPECT_NEAR(average_loss(m, 0.95), oracle::mix_es_095, 1e-7);
    EXPECT_NEAR(average_loss(m, 0.99), oracle::mix_es_099, 1e-7);
    EXPECT_NEAR(average_loss(m, 0.999), oracle::mix_es_0999, 1e-7);
}

TEST(Risk, GpdClosedForms) {
    GpdFit g;
    g.threshold = 5.0;
    g.shape = 0.3;
    g.scale = 2.0;
    g.exceedance_rate = 0.1;
    const double var = 5.0 + (2.0 / 0.3) * (std::pow(0.01 / 0.1, -0.3) - 1.0);
    EXPECT_NEAR(loss_fractile(g, 0.99), var, 1e-12);
    EXPECT_NEAR(average_loss(g, 0.99), (var + 2.0 - 0.3 * 5.0) / 0.7, 1e-12);
    EXPECT_THROW((void)loss_fractile(g, 0.85), OutOfTailError);
    g.shape = 0.0;
    EXPECT_NEAR(loss_fractile(g, 0.99), 5.0 + 2.0 * std::log(10.0), 1e-12);
    EXPECT_NEAR(average_loss(g, 0.99), 5.0 + 2.0 * std::log(10.0) + 2.0, 1e-12);
    g.shape = 1.2;
    EXPECT_TRUE(std::isfinite(loss_fractile(g, 0.99)));
    EXPECT_THROW((void)average_loss(g, 0.99), InfiniteMeanError);
}

TEST(Risk, GpdShortfallMatchesSimulation) {
    GpdFit g;
    g.threshold = 0.0;
    g.shape = 0.25;
    g.scale = 1.5;
    g.exceedance_rate = 1.0;
    Rng rng(12);
    const Eigen::VectorXd y = simulate_gpd_excesses(0.25, 1.5, 2000000, rng);
    const double v = loss_fractile(g, 0.95);
    double sum = 0.0;
    long count = 0;
    for (const double e : y)
        if (e >= v) {
            sum += e;
            ++count;
        }
    EXPECT_NEAR(sum / static_cast<double>(count), average_loss(g, 0.95), 0.05);
}

TEST(Risk, GarchUsesTheChosenVariance) {
    // Fitted on losses, so mu is the mean loss.
    GarchFit g;
    g.params = {0.5, 0.2, 0.1, 0.8};
    g.next_variance = 4.0;
    const double z = special::normal_quantile(0.99);
    EXPECT_NEAR(loss_fractile(g, 0.99), 0.5 + 2.0 * z, 1e-12);
    EXPECT_NEAR(loss_fractile(g, 0.99, GarchConditioning::Unconditional), 0.5 + std::sqrt(2.0) * z, 1e-12);
    EXPECT_NEAR(average_loss(g, 0.99), 0.5 + 2.0 * special::normal_pdf(z) / 0.01, 1e-10);
    g.params.beta = 0.9;
    EXPECT_THROW((void)loss_fractile(g, 0.99, GarchConditioning::Unconditional), InfiniteMeanError);
}

TEST(Risk, FractileDomain) {
    EXPECT_THROW(check_fractile(0.5), ValidationError);
    EXPECT_THROW(check_fractile(1.0), ValidationError);
    EXPECT_NO_THROW(check_fractile(0.999));
}

TEST(RiskReport, GaussianDataModelsAgreeAndAreMonotone) {
    Rng rng(606);
    Eigen::VectorXd x(3000);
    for (auto& v : x) v = rng.normal();
    const RiskReport r = risk_report(testing_support::make_series(x, "N01"), Basis::RawReturns);
    EXPECT_TRUE(r.errors.empty());
    ASSERT_EQ(r.cells.size(), 9u);
    const double em = *r.cell(LossModel::Mixture, 0.95).loss;
    const double gpd = *r.cell(LossModel::Gpd, 0.95).loss;
    const double garch = *r.cell(LossModel::Garch, 0.95).loss;
    EXPECT_NEAR(em, gpd, 0.15);
    EXPECT_NEAR(em, garch, 0.15);
    for (auto model : {LossModel::Mixture, LossModel::Gpd, LossModel::Garch}) {
        const auto& a = r.cell(model, 0.95);
        const auto& b = r.cell(model, 0.99);
        const auto& c = r.cell(model, 0.999);
        EXPECT_LT(*a.loss, *b.loss);
        EXPECT_LT(*b.loss, *c.loss);
        for (const auto* cell : {&a, &b, &c}) EXPECT_GE(*cell->average_loss, *cell->loss);
    }
}

TEST(RiskReport, FitterFailureIsIsolated) {
    // 99 points: EM and GPD run, GARCH needs 100.
    Rng rng(1);
    Eigen::VectorXd x(99);
    for (auto& v : x) v = rng.normal();
    const RiskReport r = risk_report(testing_support::make_series(x, "short"), Basis::RawReturns);
    ASSERT_EQ(r.errors.size(), 1u);
    EXPECT_NE(r.errors[0].find("GARCH"), std::string::npos) << r.errors[0];
    EXPECT_FALSE(r.cell(LossModel::Garch, 0.99).loss.has_value());
    EXPECT_FALSE(r.cell(LossModel::Garch, 0.99).error.empty());
    EXPECT_TRUE(r.cell(LossModel::Mixture, 0.99).loss.has_value());
}

TEST(RiskReport, ResidualBasisUsesFactorResiduals) {
    Rng rng(9);
    FactorPanelSpec spec;
    spec.loadings = Eigen::MatrixXd::Constant(4, 1, 1.0);
    spec.factor_sds = Eigen::VectorXd::Constant(1, 4.0);
    spec.idio_sds = Eigen::VectorXd::Constant(4, 1.0);
    const Panel p(TimeGrid(YearMonth(1990, 1), 400), {"a", "b", "c", "d"}, simulate_factor_panel(spec, 400, rng));
    const auto raw = risk_reports(p, Basis::RawReturns, 1);
    const auto res = risk_reports(p, Basis::Residuals, 1);
    ASSERT_EQ(res.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(res[i].basis, Basis::Residuals);
        EXPECT_LT(*res[i].cell(LossModel::Mixture, 0.99).loss, *raw[i].cell(LossModel::Mixture, 0.99).loss);
    }
}
