#include <gtest/gtest.h>

#include <cmath>

#include "rerisk/descriptive.hpp"
#include "rerisk/error.hpp"
#include "rerisk/synth.hpp"

using namespace rerisk;

namespace {

GeneratorSpec section_spec(const char* text) {
    const Config cfg = Config::parse(text);
    return parse_generator_spec(*cfg.find("synth", "x"));
}

}  // namespace

TEST(Synth, SameSpecAndSeedGiveIdenticalOutput) {
    const GeneratorSpec spec = section_spec("[synth x]\nkind = garch\nn = 500\nseed = 7\nomega = 0.1\n");
    const auto a = std::get<ReturnSeries>(generate(spec));
    const auto b = std::get<ReturnSeries>(generate(spec));
    EXPECT_EQ(a.values(), b.values());
    EXPECT_EQ(a.size(), 500);
    EXPECT_EQ(a.label(), "synthetic");
    GeneratorSpec other = spec;
    other.seed = 8;
    EXPECT_NE(std::get<ReturnSeries>(generate(other)).values(), a.values());
}

TEST(Synth, ParsesEveryKind) {
    EXPECT_EQ(section_spec("[synth x]\nkind = mixture\nweights = 0.9, 0.1\nmeans = 0, 0\nsds = 1, 5\n").kind(),
              GeneratorKind::Mixture);
    EXPECT_EQ(section_spec("[synth x]\nkind = gpd-tail\nshape = 0.2\n").kind(), GeneratorKind::GpdTail);
    const GeneratorSpec var =
        section_spec("[synth x]\nkind = var\nk = 2\np = 1\nA1 = 0.5, 0.1, 0, 0.3\nlabels = a, b\nstart = 1990-06\n");
    EXPECT_EQ(var.kind(), GeneratorKind::Var);
    const Panel p = std::get<Panel>(generate(var));
    EXPECT_EQ(p.labels(), (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(p.grid().start(), YearMonth(1990, 6));
    const GeneratorSpec fp = section_spec(
        "[synth x]\nkind = factor-panel\nseries = 3\nfactors = 1\nloadings = 1, 0.5, 0.2\ninclude_factors = true\n");
    EXPECT_EQ(std::get<Panel>(generate(fp)).width(), 4);
    EXPECT_EQ(std::get<Panel>(generate(fp)).labels().back(), "F1");
}

TEST(Synth, ValidationRejectsImpossibleSpecs) {
    EXPECT_THROW(section_spec("[synth x]\nkind = mixture\nweights = 0.5, 0.2\nmeans = 0, 0\nsds = 1, 1\n"),
                 ValidationError);
    EXPECT_THROW(section_spec("[synth x]\nkind = garch\nalpha = 0.3\nbeta = 0.7\n"), ValidationError);
    EXPECT_THROW(section_spec("[synth x]\nkind = var\nk = 1\np = 1\nA1 = 1.01\n"), ValidationError);
    EXPECT_THROW(section_spec("[synth x]\nkind = var\nk = 2\np = 0\ncovariance = 1, 2, 2, 1\n"), ValidationError);
    EXPECT_THROW(section_spec("[synth x]\nkind = copula\n"), ValidationError);
    EXPECT_THROW(section_spec("[synth x]\nkind = mixture\nsds = -1\n"), ValidationError);
}

TEST(Synth, GarchVariancePathFollowsTheRecursion) {
    GarchSpec spec;
    Rng rng(4);
    Eigen::VectorXd h;
    const Eigen::VectorXd x = simulate_garch(spec, 200, rng, &h);
    for (Eigen::Index t = 1; t < 200; ++t) {
        const double e = x[t - 1] - spec.params.mu;
        EXPECT_NEAR(h[t], spec.params.omega + spec.params.alpha * e * e + spec.params.beta * h[t - 1], 1e-12);
    }
}

TEST(Synth, GpdTailLossesExceedThresholdAtTheTailRate) {
    Rng rng(6);
    const GpdTailSpec spec;
    const Eigen::VectorXd l = simulate_gpd_losses(spec, 100000, rng);
    const double rate = (l.array() > spec.threshold).cast<double>().mean();
    EXPECT_NEAR(rate, spec.tail_rate, 0.003);
}

TEST(Synth, SmoothingByThreeMonthAverage) {
    // White noise: sd falls by 1/sqrt(3), lag-one autocorrelation rises to 2/3.
    FactorPanelSpec spec;
    spec.loadings = Eigen::MatrixXd::Zero(1, 1);
    spec.factor_sds = Eigen::VectorXd::Ones(1);
    spec.idio_sds = Eigen::VectorXd::Ones(1);
    Rng a(10), b(10);
    const Eigen::VectorXd raw = simulate_factor_panel(spec, 100000, a).col(0);
    spec.smooth_window = 3;
    const Eigen::VectorXd smooth = simulate_factor_panel(spec, 100000, b).col(0);
    EXPECT_NEAR(sample_sd(smooth) / sample_sd(raw), 1.0 / std::sqrt(3.0), 0.01);
    EXPECT_NEAR(describe(smooth).autocorr1, 2.0 / 3.0, 0.01);
}
