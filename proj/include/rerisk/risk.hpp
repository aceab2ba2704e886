#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rerisk/garch.hpp"
#include "rerisk/gpd.hpp"
#include "rerisk/mixture.hpp"
#include "rerisk/series.hpp"

namespace rerisk {

// All quantities here live on the loss scale: losses are negated returns,
// so a loss fractile of 21.7 means a monthly return of -21.7%.

enum class LossModel { Mixture, Gpd, Garch };
enum class Basis { RawReturns, Residuals };

/// Which variance a GARCH loss quantile conditions on.
enum class GarchConditioning { OneStepAhead, Unconditional };

[[nodiscard]] const char* to_string(LossModel m);
[[nodiscard]] const char* to_string(Basis b);

/// Throws ValidationError unless 0.5 < p < 1.
void check_fractile(double p);

/// Loss exceeded with probability 1 - p; every fit describes losses.
/// Mixture: bisection on the CDF to 1e-10. GPD: u + (beta/xi)(((1-p)/rate)^-xi - 1), with the xi = 0 limit;
/// throws OutOfTailError when p lies below the threshold's coverage.
/// GARCH: Gaussian quantile of the chosen conditional variance.
[[nodiscard]] double loss_fractile(const MixtureFit& m, double p);
[[nodiscard]] double loss_fractile(const GpdFit& g, double p);
[[nodiscard]] double loss_fractile(const GarchFit& g, double p,
                                   GarchConditioning conditioning = GarchConditioning::OneStepAhead);

/// Mean loss given the p-fractile is breached (expected shortfall).
/// GPD throws InfiniteMeanError for xi >= 1.
[[nodiscard]] double average_loss(const MixtureFit& m, double p);
[[nodiscard]] double average_loss(const GpdFit& g, double p);
[[nodiscard]] double average_loss(const GarchFit& g, double p,
                                  GarchConditioning conditioning = GarchConditioning::OneStepAhead);

struct RiskConfig {
    std::vector<double> fractiles{0.95, 0.99, 0.999};
    int mixture_k_max = 3;
    double threshold_quantile = 0.90;
    GarchConditioning garch_conditioning = GarchConditioning::OneStepAhead;
};

struct RiskCell {
    LossModel model = LossModel::Mixture;
    double fractile = 0.0;
    std::optional<double> loss;
    std::optional<double> average_loss;
    std::string error;  ///< empty when both values were produced
};

/// One risk block: three models x configured fractiles.
struct RiskReport {
    std::string label;
    Basis basis = Basis::RawReturns;
    std::vector<RiskCell> cells;  ///< model-major, fractiles in configured order
    std::optional<MixtureFit> mixture;
    std::optional<GpdFit> gpd;
    std::optional<GarchFit> garch;
    std::vector<std::string> errors;    ///< fitter failures
    std::vector<std::string> warnings;  ///< e.g. GPD shape >= 1, integrated GARCH

    [[nodiscard]] const RiskCell& cell(LossModel model, double fractile) const;
};

/// Fits all three models to the negated returns and evaluates every cell.
/// A fitter failure is recorded in `errors` and its cells; the remaining
/// cells are still produced.
[[nodiscard]] RiskReport risk_report(const ReturnSeries& s, Basis basis, const RiskConfig& config = {});

/// Per-series reports for a panel. For the residual basis every series is
/// first replaced by its residual on the panel's first `factors` principal
/// components.
[[nodiscard]] std::vector<RiskReport> risk_reports(const Panel& p, Basis basis, int factors,
                                                   const RiskConfig& config = {});

}  // namespace rerisk
