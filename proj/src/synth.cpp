#include "rerisk/synth.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <cmath>
#include <numeric>

#include "rerisk/error.hpp"

namespace rerisk {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw ValidationError("generator: " + message);
}

Eigen::MatrixXd lower_factor(const Eigen::MatrixXd& covariance) {
    const Eigen::LLT<Eigen::MatrixXd> llt(covariance);
    if (llt.info() != Eigen::Success) throw ValidationError("generator: covariance is not positive definite");
    return llt.matrixL();
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::MatrixXd row_major(const std::vector<double>& v, Eigen::Index rows, Eigen::Index cols,
                          const std::string& what) {
    require(static_cast<Eigen::Index>(v.size()) == rows * cols,
            what + " needs " + std::to_string(rows * cols) + " values, got " + std::to_string(v.size()));
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = v[static_cast<std::size_t>(i * cols + j)];
    }
    return m;
}

std::vector<std::string> default_labels(const std::string& stem, Eigen::Index k) {
    std::vector<std::string> out;
    for (Eigen::Index j = 0; j < k; ++j) out.push_back(stem + std::to_string(j + 1));
    return out;
}

void validate_params(const MixtureSpec& s) {
    const auto k = s.weights.size();
    require(k >= 1 && s.means.size() == k && s.sds.size() == k, "mixture weights, means and sds differ in length");
    double total = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        require(s.weights[j] >= 0.0, "mixture weights must be non-negative");
        require(s.sds[j] > 0.0 && std::isfinite(s.sds[j]), "mixture sds must be positive");
        require(std::isfinite(s.means[j]), "mixture means must be finite");
        total += s.weights[j];
    }
    require(std::fabs(total - 1.0) < 1e-9, "mixture weights must sum to 1");
}

void validate_params(const GpdTailSpec& s) {
    require(s.scale > 0.0, "GPD scale must be positive");
    require(s.shape > -1.0 && std::isfinite(s.shape), "GPD shape must exceed -1");
    require(s.tail_rate > 0.0 && s.tail_rate < 1.0, "tail rate must lie in (0, 1)");
    require(s.body_sd > 0.0, "body sd must be positive");
}

void validate_params(const GarchSpec& s) {
    const auto& p = s.params;
    require(p.omega > 0.0 && p.alpha >= 0.0 && p.beta >= 0.0, "GARCH needs omega > 0 and alpha, beta >= 0");
    require(p.persistence() < 1.0, "GARCH alpha + beta must be below 1");
    require(s.burn_in >= 0, "burn-in must be non-negative");
}

void validate_params(const VarSpec& s) {
    const Eigen::Index k = s.intercept.size();
    require(k >= 1, "VAR needs at least one series");
    require(s.covariance.rows() == k && s.covariance.cols() == k, "VAR covariance must be k x k");
    (void)lower_factor(s.covariance);
    const auto p = static_cast<Eigen::Index>(s.coeff.size());
    for (const auto& a : s.coeff) require(a.rows() == k && a.cols() == k, "VAR coefficient matrices must be k x k");
    if (p > 0) {
        Eigen::MatrixXd c = Eigen::MatrixXd::Zero(k * p, k * p);
        for (Eigen::Index l = 0; l < p; ++l) c.block(0, l * k, k, k) = s.coeff[static_cast<std::size_t>(l)];
        if (p > 1) c.block(k, 0, k * (p - 1), k * (p - 1)).setIdentity();
        const Eigen::EigenSolver<Eigen::MatrixXd> es(c, false);
        require(es.eigenvalues().cwiseAbs().maxCoeff() < 1.0, "VAR is not stable");
    }
    require(s.burn_in >= 0, "burn-in must be non-negative");
}

void validate_params(const FactorPanelSpec& s) {
    const Eigen::Index k = s.loadings.rows();
    const Eigen::Index m = s.loadings.cols();
    require(k >= 1, "factor panel needs at least one series");
    require(s.factor_sds.size() == m, "one factor sd per loading column");
    require(s.idio_sds.size() == k, "one idiosyncratic sd per series");
    require(s.means.size() == 0 || s.means.size() == k, "one mean per series");
    require((s.factor_sds.array() > 0.0).all(), "factor sds must be positive");
    require((s.idio_sds.array() >= 0.0).all(), "idiosyncratic sds must be non-negative");
    require(s.smooth_window >= 1, "smoothing window must be at least 1");
}

}  // namespace

const char* to_string(GeneratorKind k) {
    switch (k) {
        case GeneratorKind::Mixture: return "mixture";
        case GeneratorKind::GpdTail: return "gpd-tail";
        case GeneratorKind::Garch: return "garch";
        case GeneratorKind::Var: return "var";
        case GeneratorKind::FactorPanel: return "factor-panel";
    }
    return "?";
}

void validate(const GeneratorSpec& spec) {
    require(spec.n >= 1, "length must be positive");
    std::visit([](const auto& p) { validate_params(p); }, spec.params);
}

Eigen::VectorXd simulate_mixture(const MixtureSpec& s, Eigen::Index n, Rng& rng) {
    std::vector<double> cumulative(s.weights.size());
    std::partial_sum(s.weights.begin(), s.weights.end(), cumulative.begin());
    Eigen::VectorXd x(n);
    for (Eigen::Index t = 0; t < n; ++t) {
        const double u = rng.uniform() * cumulative.back();
        std::size_t j = 0;
        while (j + 1 < cumulative.size() && u >= cumulative[j]) ++j;
        x[t] = rng.normal(s.means[j], s.sds[j]);
    }
    return x;
}

Eigen::VectorXd simulate_gpd_excesses(double shape, double scale, Eigen::Index n, Rng& rng) {
    Eigen::VectorXd y(n);
    for (Eigen::Index t = 0; t < n; ++t) {
        const double u = rng.uniform_open();
        y[t] = std::fabs(shape) < 1e-12 ? -scale * std::log(u) : scale / shape * (std::pow(u, -shape) - 1.0);
    }
    return y;
}

Eigen::VectorXd simulate_gpd_losses(const GpdTailSpec& s, Eigen::Index n, Rng& rng) {
    Eigen::VectorXd loss(n);
    for (Eigen::Index t = 0; t < n; ++t) {
        if (rng.uniform() < s.tail_rate) {
            loss[t] = s.threshold + simulate_gpd_excesses(s.shape, s.scale, 1, rng)[0];
        } else {
            loss[t] = s.threshold - std::fabs(rng.normal(0.0, s.body_sd));
        }
    }
    return loss;
}

Eigen::VectorXd simulate_garch(const GarchSpec& s, Eigen::Index n, Rng& rng, Eigen::VectorXd* variance) {
    const auto& p = s.params;
    Eigen::VectorXd x(n);
    if (variance) variance->resize(n);
    double h = p.unconditional_variance();
    double e = 0.0;
    for (Eigen::Index t = -s.burn_in; t < n; ++t) {
        if (t > -s.burn_in) h = p.omega + p.alpha * e * e + p.beta * h;
        e = std::sqrt(h) * rng.normal();
        if (t >= 0) {
            x[t] = p.mu + e;
            if (variance) (*variance)[t] = h;
        }
    }
    return x;
}

Eigen::MatrixXd simulate_var(const VarSpec& s, Eigen::Index n, Rng& rng) {
    const Eigen::Index k = s.intercept.size();
    const auto p = static_cast<Eigen::Index>(s.coeff.size());
    const Eigen::MatrixXd L = lower_factor(s.covariance);
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(k, k);
    for (const auto& a : s.coeff) m -= a;
    const Eigen::VectorXd mean = m.fullPivLu().solve(s.intercept);

    const Eigen::Index total = p + s.burn_in + n;
    Eigen::MatrixXd y(total, k);
    for (Eigen::Index t = 0; t < p; ++t) y.row(t) = mean.transpose();
    Eigen::VectorXd z(k);
    for (Eigen::Index t = p; t < total; ++t) {
        Eigen::VectorXd v = s.intercept;
        for (Eigen::Index l = 1; l <= p; ++l) v.noalias() += s.coeff[static_cast<std::size_t>(l - 1)] * y.row(t - l).transpose();
        for (Eigen::Index j = 0; j < k; ++j) z[j] = rng.normal();
        y.row(t) = (v + L * z).transpose();
    }
    return y.bottomRows(n);
}

Eigen::MatrixXd simulate_factor_panel(const FactorPanelSpec& s, Eigen::Index n, Rng& rng) {
    const Eigen::Index k = s.loadings.rows();
    const Eigen::Index m = s.loadings.cols();
    const Eigen::Index w = s.smooth_window;
    const Eigen::Index latent_n = n + w - 1;
    Eigen::MatrixXd factors(latent_n, m);
    Eigen::MatrixXd latent(latent_n, k);
    for (Eigen::Index t = 0; t < latent_n; ++t) {
        for (Eigen::Index f = 0; f < m; ++f) factors(t, f) = rng.normal(0.0, s.factor_sds[f]);
        for (Eigen::Index i = 0; i < k; ++i) {
            latent(t, i) = (s.means.size() ? s.means[i] : 0.0) + s.loadings.row(i).dot(factors.row(t)) +
                           s.idio_sds[i] * rng.normal();
        }
    }
    Eigen::MatrixXd out(n, k + (s.include_factors ? m : 0));
    for (Eigen::Index t = 0; t < n; ++t) {
        out.row(t).head(k) = latent.middleRows(t, w).colwise().mean();
        if (s.include_factors) out.row(t).tail(m) = factors.row(t + w - 1);
    }
    return out;
}

std::variant<ReturnSeries, Panel> generate(const GeneratorSpec& spec) {
    validate(spec);
    Rng rng(spec.seed);
    const TimeGrid grid(spec.start, spec.n);
    const auto single_label = [&] { return spec.labels.empty() ? std::string("synthetic") : spec.labels.front(); };
    const auto panel_labels = [&](std::vector<std::string> fallback) {
        if (spec.labels.empty()) return fallback;
        require(spec.labels.size() == fallback.size(), "expected " + std::to_string(fallback.size()) + " labels");
        return spec.labels;
    };

    switch (spec.kind()) {
        case GeneratorKind::Mixture:
            return ReturnSeries(single_label(), grid, simulate_mixture(std::get<MixtureSpec>(spec.params), spec.n, rng));
        case GeneratorKind::GpdTail:
            return ReturnSeries(single_label(), grid,
                                -simulate_gpd_losses(std::get<GpdTailSpec>(spec.params), spec.n, rng));
        case GeneratorKind::Garch:
            return ReturnSeries(single_label(), grid, simulate_garch(std::get<GarchSpec>(spec.params), spec.n, rng));
        case GeneratorKind::Var: {
            const auto& v = std::get<VarSpec>(spec.params);
            return Panel(grid, panel_labels(default_labels("y", v.intercept.size())), simulate_var(v, spec.n, rng));
        }
        case GeneratorKind::FactorPanel: {
            const auto& f = std::get<FactorPanelSpec>(spec.params);
            auto labels = default_labels("s", f.loadings.rows());
            if (f.include_factors) {
                for (auto& l : default_labels("F", f.loadings.cols())) labels.push_back(std::move(l));
            }
            return Panel(grid, panel_labels(std::move(labels)), simulate_factor_panel(f, spec.n, rng));
        }
    }
    throw ValidationError("generator: unknown kind");
}

GeneratorSpec parse_generator_spec(const Config::Section& section) {
    GeneratorSpec spec;
    spec.n = section.get_int_or("n", spec.n);
    spec.seed = section.get_u64_or("seed", spec.seed);
    if (section.has("start")) {
        const auto ym = YearMonth::parse(section.get("start"));
        require(ym.has_value(), "start must be YYYY-MM");
        spec.start = *ym;
    }
    if (section.has("labels")) spec.labels = section.get_list("labels");

    const std::string kind = section.get("kind");
    if (kind == "mixture") {
        MixtureSpec m;
        m.weights = section.get_doubles_or("weights", m.weights);
        m.means = section.get_doubles_or("means", m.means);
        m.sds = section.get_doubles_or("sds", m.sds);
        spec.params = m;
    } else if (kind == "gpd-tail") {
        GpdTailSpec g;
        g.threshold = section.get_double_or("threshold", g.threshold);
        g.shape = section.get_double_or("shape", g.shape);
        g.scale = section.get_double_or("scale", g.scale);
        g.tail_rate = section.get_double_or("tail_rate", g.tail_rate);
        g.body_sd = section.get_double_or("body_sd", g.body_sd);
        spec.params = g;
    } else if (kind == "garch") {
        GarchSpec g;
        g.params.mu = section.get_double_or("mu", g.params.mu);
        g.params.omega = section.get_double_or("omega", g.params.omega);
        g.params.alpha = section.get_double_or("alpha", g.params.alpha);
        g.params.beta = section.get_double_or("beta", g.params.beta);
        g.burn_in = static_cast<int>(section.get_int_or("burn_in", g.burn_in));
        spec.params = g;
    } else if (kind == "var") {
        VarSpec v;
        const auto k = static_cast<Eigen::Index>(section.get_int("k"));
        const auto p = section.get_int("p");
        require(k >= 1 && p >= 0, "VAR needs k >= 1 and p >= 0");
        v.intercept = section.has("intercept") ? to_vector(section.get_doubles("intercept")) : Eigen::VectorXd::Zero(k);
        require(v.intercept.size() == k, "VAR intercept needs k values");
        for (long long l = 1; l <= p; ++l) {
            const std::string key = "A" + std::to_string(l);
            v.coeff.push_back(row_major(section.get_doubles(key), k, k, key));
        }
        v.covariance = section.has("covariance") ? row_major(section.get_doubles("covariance"), k, k, "covariance")
                                                 : Eigen::MatrixXd::Identity(k, k);
        v.burn_in = static_cast<int>(section.get_int_or("burn_in", v.burn_in));
        spec.params = v;
    } else if (kind == "factor-panel") {
        FactorPanelSpec f;
        const auto k = static_cast<Eigen::Index>(section.get_int("series"));
        const auto m = static_cast<Eigen::Index>(section.get_int_or("factors", 1));
        require(k >= 1 && m >= 1, "factor panel needs series >= 1 and factors >= 1");
        f.loadings = row_major(section.get_doubles("loadings"), k, m, "loadings");
        f.factor_sds = to_vector(section.get_doubles_or("factor_sd", std::vector<double>(static_cast<std::size_t>(m), 1.0)));
        f.idio_sds = to_vector(section.get_doubles_or("idio_sd", std::vector<double>(static_cast<std::size_t>(k), 1.0)));
        if (section.has("means")) f.means = to_vector(section.get_doubles("means"));
        f.smooth_window = static_cast<int>(section.get_int_or("smooth_window", 1));
        f.include_factors = section.get_bool_or("include_factors", false);
        spec.params = f;
    } else {
        throw ValidationError(section.describe() + ": unknown generator kind '" + kind +
                              "' (expected mixture, gpd-tail, garch, var or factor-panel)");
    }
    validate(spec);
    return spec;
}

}  // namespace rerisk
