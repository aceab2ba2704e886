#include "rerisk/risk.hpp"

#include <cmath>

#include "rerisk/error.hpp"
#include "rerisk/factors.hpp"
#include "rerisk/special.hpp"

namespace rerisk {

namespace {

double garch_sd(const GarchFit& g, GarchConditioning conditioning) {
    const double v = conditioning == GarchConditioning::OneStepAhead ? g.next_variance
                                                                     : g.params.unconditional_variance();
    if (!std::isfinite(v) || !(v > 0.0)) {
        throw InfiniteMeanError("GARCH unconditional variance is infinite (alpha + beta >= 1)");
    }
    return std::sqrt(v);
}

}  // namespace

const char* to_string(LossModel m) {
    switch (m) {
        case LossModel::Mixture: return "EM";
        case LossModel::Gpd: return "GPD";
        case LossModel::Garch: return "GARCH";
    }
    return "?";
}

const char* to_string(Basis b) { return b == Basis::RawReturns ? "raw" : "residual"; }

void check_fractile(double p) {
    if (!(p > 0.5 && p < 1.0)) throw ValidationError("loss fractile must lie in (0.5, 1), got " + std::to_string(p));
}

double loss_fractile(const MixtureFit& m, double p) {
    check_fractile(p);
    double lo = m.means[0] - 40.0 * m.sds[0];
    double hi = m.means[0] + 40.0 * m.sds[0];
    for (int j = 1; j < m.k; ++j) {
        lo = std::min(lo, m.means[j] - 40.0 * m.sds[j]);
        hi = std::max(hi, m.means[j] + 40.0 * m.sds[j]);
    }
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (mixture_cdf(m, mid) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double average_loss(const MixtureFit& m, double p) {
    const double q = loss_fractile(m, p);
    // E[L 1{L > q}] summed over components: w (mu (1 - Phi(z)) + sd phi(z)).
    double tail_mass = 0.0;
    double tail_sum = 0.0;
    for (int j = 0; j < m.k; ++j) {
        const double z = (q - m.means[j]) / m.sds[j];
        const double survival = special::normal_cdf(-z);
        tail_mass += m.weights[j] * survival;
        tail_sum += m.weights[j] * (m.means[j] * survival + m.sds[j] * special::normal_pdf(z));
    }
    return tail_sum / tail_mass;
}

double loss_fractile(const GpdFit& g, double p) {
    check_fractile(p);
    const double tail = (1.0 - p) / g.exceedance_rate;
    if (tail > 1.0 + 1e-12) {
        throw OutOfTailError("fractile " + std::to_string(p) + " lies below the GPD threshold (exceedance rate " +
                             std::to_string(g.exceedance_rate) + ")");
    }
    if (std::fabs(g.shape) < 1e-12) return g.threshold - g.scale * std::log(tail);
    return g.threshold + g.scale / g.shape * (std::pow(tail, -g.shape) - 1.0);
}

double average_loss(const GpdFit& g, double p) {
    if (g.shape >= 1.0) {
        throw InfiniteMeanError("GPD shape " + std::to_string(g.shape) + " >= 1: average loss is infinite");
    }
    const double var = loss_fractile(g, p);
    return var / (1.0 - g.shape) + (g.scale - g.shape * g.threshold) / (1.0 - g.shape);
}

double loss_fractile(const GarchFit& g, double p, GarchConditioning conditioning) {
    check_fractile(p);
    return g.params.mu + garch_sd(g, conditioning) * special::normal_quantile(p);
}

double average_loss(const GarchFit& g, double p, GarchConditioning conditioning) {
    check_fractile(p);
    const double z = special::normal_quantile(p);
    return g.params.mu + garch_sd(g, conditioning) * special::normal_pdf(z) / (1.0 - p);
}

const RiskCell& RiskReport::cell(LossModel model, double fractile) const {
    for (const auto& c : cells) {
        if (c.model == model && std::fabs(c.fractile - fractile) < 1e-12) return c;
    }
    throw ValidationError("no risk cell for " + std::string(to_string(model)) + " at " + std::to_string(fractile));
}

RiskReport risk_report(const ReturnSeries& s, Basis basis, const RiskConfig& config) {
    for (double p : config.fractiles) check_fractile(p);
    RiskReport report;
    report.label = s.label();
    report.basis = basis;
    const Eigen::VectorXd losses = -s.values();

    const auto stage_error = [&](const char* stage, const std::exception& e) {
        report.errors.push_back(s.label() + " [" + to_string(basis) + "] " + stage + ": " + e.what());
    };
    try {
        report.mixture = fit_mixture_em(losses, config.mixture_k_max);
        if (!report.mixture->converged) report.warnings.push_back(s.label() + ": EM hit the iteration limit");
    } catch (const std::exception& e) {
        stage_error("EM", e);
    }
    try {
        report.gpd = fit_gpd_pot(losses, config.threshold_quantile);
        if (report.gpd->infinite_mean) report.warnings.push_back(s.label() + ": GPD shape >= 1 (infinite mean)");
        if (!report.gpd->converged) report.warnings.push_back(s.label() + ": GPD score not below 1e-5");
    } catch (const std::exception& e) {
        stage_error("GPD", e);
    }
    try {
        report.garch = fit_garch11(losses);
        if (report.garch->integrated) report.warnings.push_back(s.label() + ": GARCH persistence near 1");
    } catch (const std::exception& e) {
        stage_error("GARCH", e);
    }

    const auto evaluate = [&](LossModel model, double p, auto&& fractile, auto&& shortfall) {
        RiskCell cell{model, p, std::nullopt, std::nullopt, {}};
        try {
            cell.loss = fractile(p);
            cell.average_loss = shortfall(p);
        } catch (const std::exception& e) {
            cell.error = e.what();
        }
        report.cells.push_back(std::move(cell));
    };
    const auto missing = [](const char* what) {
        return [what](double) -> double { throw Error(std::string(what) + " fit unavailable"); };
    };

    for (double p : config.fractiles) {
        if (report.mixture) {
            evaluate(LossModel::Mixture, p, [&](double q) { return loss_fractile(*report.mixture, q); },
                     [&](double q) { return average_loss(*report.mixture, q); });
        } else {
            evaluate(LossModel::Mixture, p, missing("EM"), missing("EM"));
        }
    }
    for (double p : config.fractiles) {
        if (report.gpd) {
            evaluate(LossModel::Gpd, p, [&](double q) { return loss_fractile(*report.gpd, q); },
                     [&](double q) { return average_loss(*report.gpd, q); });
        } else {
            evaluate(LossModel::Gpd, p, missing("GPD"), missing("GPD"));
        }
    }
    for (double p : config.fractiles) {
        if (report.garch) {
            evaluate(LossModel::Garch, p,
                     [&](double q) { return loss_fractile(*report.garch, q, config.garch_conditioning); },
                     [&](double q) { return average_loss(*report.garch, q, config.garch_conditioning); });
        } else {
            evaluate(LossModel::Garch, p, missing("GARCH"), missing("GARCH"));
        }
    }
    return report;
}

std::vector<RiskReport> risk_reports(const Panel& p, Basis basis, int factors, const RiskConfig& config) {
    const Panel source = basis == Basis::Residuals ? residual_panel(p, factors) : p;
    std::vector<RiskReport> out;
    out.reserve(static_cast<std::size_t>(source.width()));
    for (Eigen::Index j = 0; j < source.width(); ++j) out.push_back(risk_report(source.series(j), basis, config));
    return out;
}

}  // namespace rerisk
