#include <gtest/gtest.h>

#include <cmath>

#include "oracle_values.hpp"
#include "rerisk/error.hpp"
#include "rerisk/mixture.hpp"
#include "rerisk/random.hpp"
#include "rerisk/synth.hpp"
#include "support.hpp"

using namespace rerisk;

TEST(Mixture, SingleComponentIsTheGaussianMle) {
    const Eigen::VectorXd x = testing_support::fixture_column("fixture.csv", "white");
    const MixtureFit f = fit_mixture(x, 1);
    const double mean = x.mean();
    const double sd = std::sqrt((x.array() - mean).square().mean());
    EXPECT_DOUBLE_EQ(f.weights[0], 1.0);
    EXPECT_NEAR(f.means[0], mean, 1e-12);
    EXPECT_NEAR(f.sds[0], sd, 1e-12);
    EXPECT_NEAR(f.bic, -2.0 * f.log_likelihood + 2.0 * std::log(240.0), 1e-9);
}

TEST(Mixture, TwoComponentFitMatchesReferenceMaximum) {
    const Eigen::VectorXd x = testing_support::fixture_column("mixture.csv", "x");
    const MixtureFit f = fit_mixture(x, 2);
    EXPECT_TRUE(f.converged);
    EXPECT_FALSE(f.sd_floor_hit);
    EXPECT_NEAR(f.log_likelihood, oracle::mixture_loglik, 1e-6 * std::abs(oracle::mixture_loglik));
    EXPECT_NEAR(mixture_log_likelihood(f, x), f.log_likelihood, 1e-9);
    // The likelihood is flat along one ridge here, so the default stopping
    // rule leaves the means a few hundredths short of the maximum.
    EXPECT_NEAR(f.weights[0], oracle::mixture_weights_0_0, 2e-3);
    EXPECT_NEAR(f.means[1], oracle::mixture_means_0_1, 5e-2);

    EmOptions tight;
    tight.tolerance = 1e-14;
    tight.max_iterations = 200000;
    const MixtureFit g = fit_mixture(x, 2, tight);
    EXPECT_NEAR(g.log_likelihood, oracle::mixture_loglik, 1e-8);
    EXPECT_NEAR(g.weights[0], oracle::mixture_weights_0_0, 1e-5);
    EXPECT_NEAR(g.means[0], oracle::mixture_means_0_0, 1e-4);
    EXPECT_NEAR(g.means[1], oracle::mixture_means_0_1, 1e-4);
    EXPECT_NEAR(g.sds[0], oracle::mixture_sds_0_0, 1e-4);
    EXPECT_NEAR(g.sds[1], oracle::mixture_sds_0_1, 1e-4);
}

TEST(Mixture, BicSelectionMatchesReferenceCriteria) {
    const Eigen::VectorXd x = testing_support::fixture_column("mixture.csv", "x");
    const double bic[] = {oracle::mixture_bic_1, oracle::mixture_bic_2, oracle::mixture_bic_3};
    int expected_k = 1;
    for (int k = 2; k <= 3; ++k)
        if (bic[k - 1] < bic[expected_k - 1]) expected_k = k;
    const MixtureFit best = fit_mixture_em(x, 3);
    EXPECT_EQ(best.k, expected_k);
    EXPECT_NEAR(best.bic, bic[expected_k - 1], 1e-5 * std::abs(bic[expected_k - 1]));
    for (int k = 1; k <= 2; ++k) EXPECT_NEAR(fit_mixture(x, k).bic, bic[k - 1], 1e-5 * std::abs(bic[k - 1]));
}

TEST(Mixture, EmLogLikelihoodNeverDecreases) {
    const Eigen::VectorXd x = testing_support::fixture_column("mixture.csv", "x");
    for (const auto& start : em_initialisations(x, 3)) {
        std::vector<double> trace;
        (void)run_em(x, start, EmOptions{}, 300, &trace);
        ASSERT_GT(trace.size(), 1u);
        for (std::size_t i = 1; i < trace.size(); ++i) EXPECT_GE(trace[i], trace[i - 1] - 1e-9 * std::abs(trace[i]));
    }
}

TEST(Mixture, InitialisationsAreDeterministicAndValid) {
    const Eigen::VectorXd x = testing_support::fixture_column("mixture.csv", "x");
    const auto a = em_initialisations(x, 2), b = em_initialisations(x, 2);
    ASSERT_EQ(a.size(), 10u);
    for (std::size_t r = 0; r < a.size(); ++r) {
        EXPECT_EQ(a[r].means, b[r].means);
        EXPECT_NEAR(a[r].weights.sum(), 1.0, 1e-12);
        EXPECT_GT(a[r].sds.minCoeff(), 0.0);
    }
    const MixtureFit f1 = fit_mixture_em(x), f2 = fit_mixture_em(x);
    EXPECT_EQ(f1.means, f2.means);
    EXPECT_EQ(f1.sds, f2.sds);
}

TEST(Mixture, DensityIntegratesToOneAndCdfIsConsistent) {
    const Eigen::VectorXd x = testing_support::fixture_column("mixture.csv", "x");
    const MixtureFit f = fit_mixture(x, 2);
    const double sd = std::sqrt((x.array() - x.mean()).square().mean());
    const double lo = x.mean() - 12 * sd, hi = x.mean() + 12 * sd;
    const int steps = 20000;
    const double h = (hi - lo) / steps;
    double integral = mixture_pdf(f, lo) + mixture_pdf(f, hi);
    for (int i = 1; i < steps; ++i) integral += (i % 2 ? 4.0 : 2.0) * mixture_pdf(f, lo + i * h);
    integral *= h / 3.0;
    EXPECT_NEAR(integral, 1.0, 1e-6);
    EXPECT_NEAR(mixture_cdf(f, hi) - mixture_cdf(f, lo), 1.0, 1e-9);
    EXPECT_NEAR(mixture_mean(f), f.weights.dot(f.means), 1e-14);
}

TEST(Mixture, SdsAreSortedAscending) {
    Rng rng(2);
    const Eigen::VectorXd x = simulate_mixture({{0.5, 0.3, 0.2}, {0, 2, -4}, {6, 1, 3}}, 3000, rng);
    const MixtureFit f = fit_mixture(x, 3);
    EXPECT_LE(f.sds[0], f.sds[1]);
    EXPECT_LE(f.sds[1], f.sds[2]);
}

TEST(Mixture, RecoversPlantedRegimes) {
    Rng rng(20090531);
    const Eigen::VectorXd x = simulate_mixture({{0.9, 0.1}, {0.0, 0.0}, {1.0, 5.0}}, 20000, rng);
    const MixtureFit f = fit_mixture_em(x, 3);
    EXPECT_EQ(f.k, 2);
    EXPECT_NEAR(f.weights[0], 0.9, 0.03);
    EXPECT_NEAR(f.sds[0], 1.0, 0.08);
    EXPECT_NEAR(f.sds[1], 5.0, 0.4);
}

TEST(Mixture, Preconditions) {
    EXPECT_THROW((void)fit_mixture_em(Eigen::VectorXd::LinSpaced(20, 0, 1)), InsufficientDataError);
    EXPECT_THROW((void)fit_mixture_em(Eigen::VectorXd::LinSpaced(100, 0, 1), 4), ValidationError);
    EXPECT_THROW((void)fit_mixture_em(Eigen::VectorXd::Constant(100, 1.0)), DegenerateVarianceError);
}
