#include "rerisk/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "rerisk/error.hpp"
#include "rerisk/special.hpp"

namespace rerisk {

namespace {

const double k_log_sqrt_2pi = 0.5 * std::log(2.0 * special::k_pi);

double population_sd(const Eigen::ArrayXd& v) {
    if (v.size() == 0) return 0.0;
    return std::sqrt((v - v.mean()).square().mean());
}

MixtureParams group_params(const Eigen::VectorXd& x, const std::vector<Eigen::Index>& order,
                           const std::vector<double>& shares, double sd_fallback) {
    const auto n = static_cast<Eigen::Index>(order.size());
    const auto k = static_cast<Eigen::Index>(shares.size());
    MixtureParams p{Eigen::VectorXd(k), Eigen::VectorXd(k), Eigen::VectorXd(k)};
    Eigen::Index begin = 0;
    double cumulative = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) {
        cumulative += shares[static_cast<std::size_t>(j)];
        Eigen::Index end = j + 1 == k ? n : static_cast<Eigen::Index>(std::llround(cumulative * static_cast<double>(n)));
        end = std::clamp(end, begin + 1, n - (k - 1 - j));
        Eigen::ArrayXd members(end - begin);
        for (Eigen::Index i = begin; i < end; ++i) members[i - begin] = x[order[static_cast<std::size_t>(i)]];
        p.weights[j] = static_cast<double>(end - begin) / static_cast<double>(n);
        p.means[j] = members.mean();
        p.sds[j] = std::max(population_sd(members), sd_fallback);
        begin = end;
    }
    return p;
}

// Fills `resp` with responsibilities and returns the log-likelihood.
double expectation(const Eigen::ArrayXd& x, const MixtureParams& p, Eigen::ArrayXXd& resp) {
    const Eigen::Index n = x.size();
    const Eigen::Index k = p.weights.size();
    resp.resize(n, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        const double c = std::log(p.weights[j]) - std::log(p.sds[j]) - k_log_sqrt_2pi;
        resp.col(j) = c - 0.5 * ((x - p.means[j]) / p.sds[j]).square();
    }
    const Eigen::ArrayXd row_max = resp.rowwise().maxCoeff();
    resp.colwise() -= row_max;
    resp = resp.exp();
    const Eigen::ArrayXd row_sum = resp.rowwise().sum();
    resp.colwise() /= row_sum;
    return (row_max + row_sum.log()).sum();
}

void maximisation(const Eigen::ArrayXd& x, const Eigen::ArrayXXd& resp, double sd_floor, MixtureParams& p,
                  bool& floor_hit) {
    const Eigen::Index n = x.size();
    const Eigen::Index k = resp.cols();
    for (Eigen::Index j = 0; j < k; ++j) {
        const double mass = resp.col(j).sum();
        if (!(mass > 1e-10 * static_cast<double>(n))) {
            p.weights[j] = 1e-12;
            continue;
        }
        p.weights[j] = mass / static_cast<double>(n);
        p.means[j] = (resp.col(j) * x).sum() / mass;
        const double var = (resp.col(j) * (x - p.means[j]).square()).sum() / mass;
        double sd = std::sqrt(var);
        if (!(sd > sd_floor)) {
            sd = sd_floor;
            floor_hit = true;
        }
        p.sds[j] = sd;
    }
    p.weights /= p.weights.sum();
}

MixtureFit finish(const MixtureParams& p, double log_likelihood, Eigen::Index n) {
    const Eigen::Index k = p.weights.size();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return p.sds[a] < p.sds[b]; });
    MixtureFit fit;
    fit.k = static_cast<int>(k);
    fit.weights.resize(k);
    fit.means.resize(k);
    fit.sds.resize(k);
    for (Eigen::Index j = 0; j < k; ++j) {
        const auto src = order[static_cast<std::size_t>(j)];
        fit.weights[j] = p.weights[src];
        fit.means[j] = p.means[src];
        fit.sds[j] = p.sds[src];
    }
    fit.log_likelihood = log_likelihood;
    fit.n = n;
    fit.bic = -2.0 * log_likelihood + static_cast<double>(3 * k - 1) * std::log(static_cast<double>(n));
    return fit;
}

}  // namespace

std::vector<MixtureParams> em_initialisations(const Eigen::VectorXd& x, int k, int restarts) {
    const Eigen::Index n = x.size();
    if (k < 1) throw ValidationError("mixture needs at least one component");
    if (n < 2 * k) throw InsufficientDataError("too few observations for a mixture initialisation");
    const double sd_all = population_sd(x.array());
    const double fallback = 0.05 * std::max(sd_all, 1e-12);

    std::vector<MixtureParams> out;
    if (k == 1) {
        out.push_back({Eigen::VectorXd::Ones(1), Eigen::VectorXd::Constant(1, x.mean()),
                       Eigen::VectorXd::Constant(1, std::max(sd_all, fallback))});
        return out;
    }

    std::vector<Eigen::Index> by_value(static_cast<std::size_t>(n));
    std::iota(by_value.begin(), by_value.end(), 0);
    std::stable_sort(by_value.begin(), by_value.end(), [&](auto a, auto b) { return x[a] < x[b]; });
    const double median = n % 2 ? x[by_value[static_cast<std::size_t>(n / 2)]]
                                : 0.5 * (x[by_value[static_cast<std::size_t>(n / 2 - 1)]] +
                                         x[by_value[static_cast<std::size_t>(n / 2)]]);
    std::vector<Eigen::Index> by_distance = by_value;
    std::stable_sort(by_distance.begin(), by_distance.end(),
                     [&](auto a, auto b) { return std::fabs(x[a] - median) < std::fabs(x[b] - median); });

    for (double f : {0.05, 0.10, 0.20, 0.30, 0.45}) {
        std::vector<double> shares{1.0 - f};
        // Outer tail mass is split geometrically across the remaining components.
        double rest = f;
        for (int j = 1; j < k; ++j) {
            const double share = j + 1 == k ? rest : 0.7 * rest;
            shares.push_back(share);
            rest -= share;
        }
        out.push_back(group_params(x, by_distance, shares, fallback));
    }
    for (double shift : {0.0, 0.1, -0.1, 0.2, -0.2}) {
        std::vector<double> shares;
        double previous = 0.0;
        for (int j = 1; j <= k; ++j) {
            const double boundary = j == k ? 1.0 : std::clamp((j + shift) / k, 0.02, 0.98);
            shares.push_back(boundary - previous);
            previous = boundary;
        }
        out.push_back(group_params(x, by_value, shares, fallback));
    }
    if (restarts < static_cast<int>(out.size())) out.resize(static_cast<std::size_t>(std::max(restarts, 1)));
    return out;
}

MixtureFit run_em(const Eigen::VectorXd& x, const MixtureParams& start, const EmOptions& options, int max_iterations,
                  std::vector<double>* trace) {
    const Eigen::ArrayXd xa = x.array();
    const double sd_floor = options.sd_floor_fraction * population_sd(xa);
    MixtureParams p = start;
    bool floor_hit = false;
    for (Eigen::Index j = 0; j < p.sds.size(); ++j) p.sds[j] = std::max(p.sds[j], sd_floor);

    Eigen::ArrayXXd resp;
    double ll = expectation(xa, p, resp);
    if (trace) trace->push_back(ll);
    int iterations = 0;
    bool converged = false;
    for (int it = 1; it <= max_iterations; ++it) {
        maximisation(xa, resp, sd_floor, p, floor_hit);
        const double next = expectation(xa, p, resp);
        if (trace) trace->push_back(next);
        iterations = it;
        const double change = std::fabs(next - ll);
        ll = next;
        if (change < options.tolerance * std::max(1.0, std::fabs(next))) {
            converged = true;
            break;
        }
    }
    MixtureFit fit = finish(p, ll, x.size());
    fit.iterations = iterations;
    fit.converged = converged;
    fit.sd_floor_hit = floor_hit;
    return fit;
}

MixtureFit fit_mixture(const Eigen::VectorXd& x, int k, const EmOptions& options) {
    const Eigen::Index n = x.size();
    if (!x.allFinite()) throw ValidationError("mixture fit: non-finite observations");
    if (k == 1) {
        const double mean = x.mean();
        const double sd = population_sd(x.array());
        if (!(sd > 0.0)) throw DegenerateVarianceError("mixture fit: constant series");
        MixtureParams p{Eigen::VectorXd::Ones(1), Eigen::VectorXd::Constant(1, mean), Eigen::VectorXd::Constant(1, sd)};
        Eigen::ArrayXXd resp;
        MixtureFit fit = finish(p, expectation(x.array(), p, resp), n);
        fit.iterations = 0;
        return fit;
    }

    const auto starts = em_initialisations(x, k, options.restarts);
    std::vector<MixtureFit> screened;
    for (std::size_t r = 0; r < starts.size(); ++r) {
        screened.push_back(run_em(x, starts[r], options, options.screening_iterations));
        screened.back().restart = static_cast<int>(r);
    }
    std::stable_sort(screened.begin(), screened.end(),
                     [](const auto& a, const auto& b) { return a.log_likelihood > b.log_likelihood; });

    // Continue restarts in screening order until one converges without a
    // component collapsing onto the sd floor; a collapsed fit is a spike on
    // a handful of points, not a density estimate.
    std::optional<MixtureFit> collapsed;
    for (const auto& start : screened) {
        MixtureFit fit = start;
        if (!start.converged) {
            const MixtureParams resume{start.weights, start.means, start.sds};
            fit = run_em(x, resume, options, std::max(0, options.max_iterations - start.iterations));
            fit.iterations += start.iterations;
            fit.restart = start.restart;
            fit.sd_floor_hit = fit.sd_floor_hit || start.sd_floor_hit;
        }
        if (!fit.sd_floor_hit) return fit;
        if (!collapsed) collapsed = std::move(fit);
    }
    return *collapsed;
}

MixtureFit fit_mixture_em(const Eigen::VectorXd& x, int k_max, const EmOptions& options) {
    if (x.size() < 30) throw InsufficientDataError("mixture fit needs at least 30 observations");
    if (k_max < 1 || k_max > 3) throw ValidationError("mixture k_max must be 1, 2 or 3");
    MixtureFit best = fit_mixture(x, 1, options);
    for (int k = 2; k <= k_max; ++k) {
        MixtureFit candidate = fit_mixture(x, k, options);
        if (!candidate.sd_floor_hit && candidate.bic < best.bic) best = std::move(candidate);
    }
    return best;
}

double mixture_log_likelihood(const MixtureFit& m, const Eigen::VectorXd& x) {
    Eigen::ArrayXXd resp;
    return expectation(x.array(), MixtureParams{m.weights, m.means, m.sds}, resp);
}

double mixture_pdf(const MixtureFit& m, double x) {
    double total = 0.0;
    for (int j = 0; j < m.k; ++j) total += m.weights[j] * special::normal_pdf((x - m.means[j]) / m.sds[j]) / m.sds[j];
    return total;
}

double mixture_cdf(const MixtureFit& m, double x) {
    double total = 0.0;
    for (int j = 0; j < m.k; ++j) total += m.weights[j] * special::normal_cdf((x - m.means[j]) / m.sds[j]);
    return total;
}

double mixture_mean(const MixtureFit& m) { return m.weights.dot(m.means); }

}  // namespace rerisk
