#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "rerisk/calendar.hpp"
#include "rerisk/config.hpp"
#include "rerisk/garch.hpp"
#include "rerisk/random.hpp"
#include "rerisk/series.hpp"

namespace rerisk {

// Seeded generators. Every draw comes from one Rng (mt19937_64 behind the
// transforms documented in random.hpp), so a (spec, seed) pair fixes the
// output bit for bit.

/// x_t ~ N(mean_j, sd_j^2) with probability weight_j.
struct MixtureSpec {
    std::vector<double> weights{1.0};
    std::vector<double> means{0.0};
    std::vector<double> sds{1.0};
};

/// Loss model with a GPD tail above `threshold`: with probability
/// `tail_rate` the loss is threshold + GPD(shape, scale), otherwise
/// threshold - |N(0, body_sd^2)|. Returns are the negated losses.
struct GpdTailSpec {
    double threshold = 5.0;
    double shape = 0.3;
    double scale = 2.0;
    double tail_rate = 0.1;
    double body_sd = 4.0;
};

/// x_t = mu + sqrt(h_t) z_t, h_t = omega + alpha e_{t-1}^2 + beta h_{t-1},
/// started at the unconditional variance and run `burn_in` steps before
/// the first kept value.
struct GarchSpec {
    GarchParams params{0.0, 0.1, 0.1, 0.8};
    int burn_in = 500;
};

/// y_t = c + sum_l A_l y_{t-l} + L z_t with L L' = covariance, started at
/// the unconditional mean and run `burn_in` steps before the first kept row.
struct VarSpec {
    Eigen::VectorXd intercept;
    std::vector<Eigen::MatrixXd> coeff;
    Eigen::MatrixXd covariance;
    int burn_in = 200;
};

/// r_{it} = mean_i + sum_f loading(i, f) F_{ft} + idio_sd_i e_{it} with iid
/// N(0, factor_sd_f^2) factors. A smoothing window w > 1 replaces each
/// series (not the factors) by its trailing w-month mean, the way a
/// three-month-average price index is reported.
struct FactorPanelSpec {
    Eigen::MatrixXd loadings;  ///< series x factors
    Eigen::VectorXd factor_sds;
    Eigen::VectorXd idio_sds;
    Eigen::VectorXd means;  ///< empty means zero
    int smooth_window = 1;
    bool include_factors = false;  ///< append the factors as columns F1..Fm
};

enum class GeneratorKind { Mixture, GpdTail, Garch, Var, FactorPanel };

[[nodiscard]] const char* to_string(GeneratorKind k);

struct GeneratorSpec {
    Eigen::Index n = 1000;
    std::uint64_t seed = 1;
    YearMonth start = YearMonth(2000, 1);
    std::vector<std::string> labels;  ///< defaults: "synthetic" or y1..yk / s1..sk
    std::variant<MixtureSpec, GpdTailSpec, GarchSpec, VarSpec, FactorPanelSpec> params;

    [[nodiscard]] GeneratorKind kind() const { return static_cast<GeneratorKind>(params.index()); }
};

/// Throws ValidationError for parameters the matching fitter would reject
/// (weights not summing to one, non-positive sds, alpha + beta >= 1, an
/// unstable VAR, a covariance that is not positive definite...).
void validate(const GeneratorSpec& spec);

/// Univariate kinds give a ReturnSeries, var and factor-panel a Panel.
[[nodiscard]] std::variant<ReturnSeries, Panel> generate(const GeneratorSpec& spec);

[[nodiscard]] Eigen::VectorXd simulate_mixture(const MixtureSpec& s, Eigen::Index n, Rng& rng);
[[nodiscard]] Eigen::VectorXd simulate_gpd_losses(const GpdTailSpec& s, Eigen::Index n, Rng& rng);
/// GPD(shape, scale) excesses by inversion.
[[nodiscard]] Eigen::VectorXd simulate_gpd_excesses(double shape, double scale, Eigen::Index n, Rng& rng);
/// Fills `variance` with the h_t of the kept observations when given.
[[nodiscard]] Eigen::VectorXd simulate_garch(const GarchSpec& s, Eigen::Index n, Rng& rng,
                                             Eigen::VectorXd* variance = nullptr);
[[nodiscard]] Eigen::MatrixXd simulate_var(const VarSpec& s, Eigen::Index n, Rng& rng);
[[nodiscard]] Eigen::MatrixXd simulate_factor_panel(const FactorPanelSpec& s, Eigen::Index n, Rng& rng);

/// Reads a generator spec from a config section, e.g.
///
///   [synth]
///   kind = garch
///   n = 5000
///   seed = 7
///   omega = 0.1
///   alpha = 0.1
///   beta = 0.8
///
/// Matrices are given row-major as comma lists (A1, A2, ..., covariance,
/// loadings).
[[nodiscard]] GeneratorSpec parse_generator_spec(const Config::Section& section);

}  // namespace rerisk
