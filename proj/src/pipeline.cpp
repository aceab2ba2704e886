#include "rerisk/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <set>

#include "json.hpp"
#include "rerisk/descriptive.hpp"
#include "rerisk/error.hpp"
#include "rerisk/factors.hpp"
#include "rerisk/synth.hpp"
#include "rerisk/unit_root.hpp"

namespace rerisk {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Json matrix_json(const Eigen::MatrixXd& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(to_std(m.row(i).transpose()));
    return rows;
}

std::string resolve(const fs::path& base, const std::string& path) {
    if (path.empty()) return path;
    const fs::path p(path);
    return (p.is_absolute() ? p : base / p).lexically_normal().string();
}

std::vector<std::string> list_or_empty(const Config::Section* s, std::string_view key) {
    return s && s->has(key) ? s->get_list(key) : std::vector<std::string>{};
}

// Loaded series plus the constituent records they came from.
class Dataset {
public:
    void add(ReturnSeries s) {
        if (find(s.label())) throw ValidationError("series '" + s.label() + "' is defined twice");
        series_.push_back(std::move(s));
    }

    [[nodiscard]] const ReturnSeries* find(const std::string& label) const {
        for (const auto& s : series_) {
            if (s.label() == label) return &s;
        }
        return nullptr;
    }

    [[nodiscard]] const ReturnSeries& get(const std::string& label) const {
        if (const auto* s = find(label)) return *s;
        throw ValidationError("unknown series '" + label + "'");
    }

    [[nodiscard]] std::vector<std::string> labels() const {
        std::vector<std::string> out;
        for (const auto& s : series_) out.push_back(s.label());
        return out;
    }

    /// The named series truncated to their common months.
    [[nodiscard]] Panel panel(const std::vector<std::string>& labels) const {
        if (labels.empty()) throw ValidationError("empty series list");
        std::vector<ReturnSeries> picked;
        for (const auto& l : labels) picked.push_back(get(l));
        return align(picked);
    }

    std::vector<ConstituentRecord> constituents;

private:
    std::vector<ReturnSeries> series_;
};

// Splits each constituent's records into runs of consecutive months.
std::vector<ReturnSeries> constituent_series(std::vector<ConstituentRecord> records) {
    std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
        return a.id != b.id ? a.id < b.id : a.month < b.month;
    });
    std::vector<ReturnSeries> out;
    std::size_t i = 0;
    while (i < records.size()) {
        std::size_t j = i + 1;
        while (j < records.size() && records[j].id == records[i].id &&
               records[j].month.serial() == records[j - 1].month.serial() + 1) {
            ++j;
        }
        Eigen::VectorXd v(static_cast<Eigen::Index>(j - i));
        for (std::size_t t = i; t < j; ++t) v[static_cast<Eigen::Index>(t - i)] = records[t].return_pct;
        out.emplace_back(records[i].id, TimeGrid(records[i].month, v.size()), std::move(v));
        i = j;
    }
    return out;
}

class Runner {
public:
    Runner(const RunConfig& config) : cfg_(config), out_(config.output_dir) {}

    RunResult run(Command command) {
        summary_["command"] = to_string(command);
        summary_["config"] = cfg_.source;
        summary_["seed"] = cfg_.seed;

        if (command == Command::Synth) {
            stage("synth", [&] { synth(); });
        } else {
            bool loaded = false;
            stage("input", [&] {
                load();
                loaded = true;
            });
            if (loaded) {
                const bool all = command == Command::Report;
                if (all || command == Command::Describe) stage("describe", [&] { describe(); });
                if (all || command == Command::Pca) stage("pca", [&] { principal_components(); });
                if (all || command == Command::Risk) stage("risk", [&] { risk(); });
                if (all || command == Command::UnitRoot) stage("unitroot", [&] { unit_roots(); });
                if (all || command == Command::Predict) stage("predict", [&] { predict(); });
            }
        }
        if (command == Command::Report && !report_text_.empty()) write("report.txt", report_text_);

        write("summary.json", summary_.dump(2) + "\n");
        result_.exit_status = result_.errors.empty() ? 0 : 1;
        Json manifest;
        manifest["command"] = to_string(command);
        manifest["config"] = cfg_.source;
        manifest["seed"] = cfg_.seed;
        manifest["status"] = result_.errors.empty() ? "ok" : "failed";
        manifest["exit_status"] = result_.exit_status;
        manifest["errors"] = result_.errors;
        manifest["warnings"] = result_.warnings;
        result_.files.push_back("manifest.json");
        std::sort(result_.files.begin(), result_.files.end());
        manifest["files"] = result_.files;
        write_text_file((out_ / "manifest.json").string(), manifest.dump(2) + "\n");
        return result_;
    }

private:
    template <typename F>
    void stage(const std::string& name, F&& body) {
        try {
            body();
        } catch (const std::exception& e) {
            error(name, "", e.what());
        }
    }

    template <typename F>
    void per_series(const std::string& stage_name, const std::string& label, F&& body) {
        try {
            body();
        } catch (const std::exception& e) {
            error(stage_name, label, e.what());
        }
    }

    void error(const std::string& stage_name, const std::string& label, const std::string& what) {
        result_.errors.push_back(stage_name + (label.empty() ? "" : " [" + label + "]") + ": " + what);
    }

    void warning(const std::string& stage_name, const std::string& label, const std::string& what) {
        result_.warnings.push_back(stage_name + (label.empty() ? "" : " [" + label + "]") + ": " + what);
    }

    void write(const std::string& relative, const std::string& content) {
        write_text_file((out_ / relative).string(), content);
        result_.files.push_back(relative);
    }

    void table(const std::string& name, const Table& t) {
        write("tables/" + name + ".csv", t.to_csv());
        const std::string text = t.to_text(3);
        write("tables/" + name + ".txt", text);
        report_text_ += text + "\n";
    }

    void plot(const std::string& name, const Table& t) { write("plots/" + name + ".csv", t.to_csv()); }

    std::vector<std::string> or_all(const std::vector<std::string>& labels) const {
        return labels.empty() ? data_.labels() : labels;
    }

    // ---- input -----------------------------------------------------------

    void load() {
        Json inputs;
        if (!cfg_.returns_path.empty()) {
            const std::string text = read_text_file(cfg_.returns_path);
            if (cfg_.layout == Layout::Wide) {
                for (auto& s : read_wide_csv(text, cfg_.returns_path).to_series()) data_.add(std::move(s));
            } else if (cfg_.layout == Layout::Long) {
                for (auto& s : read_long_csv(text, cfg_.returns_path)) data_.add(std::move(s));
            } else {
                throw ValidationError("[input] returns must use the wide or long layout");
            }
            inputs["returns"] = cfg_.returns_path;
        }
        if (!cfg_.constituents_path.empty()) {
            data_.constituents = read_constituents_csv(read_text_file(cfg_.constituents_path), cfg_.constituents_path);
            data_.add(build_value_weighted_index(data_.constituents, cfg_.index_label));
            inputs["constituents"] = cfg_.constituents_path;
            inputs["index_label"] = cfg_.index_label;
        }
        for (const auto& rule : cfg_.smoothing) {
            ReturnSeries smoothed = moving_average(data_.get(rule.series), rule.window);
            if (!rule.label.empty()) smoothed = smoothed.relabeled(rule.label);
            data_.add(std::move(smoothed));
        }
        if (data_.labels().empty()) throw ValidationError("no input series (set [input] returns or constituents)");
        Json series = Json::array();
        for (const auto& l : data_.labels()) {
            const auto& s = data_.get(l);
            series.push_back({{"label", l}, {"start", s.grid().start().to_string()},
                              {"end", s.grid().last().to_string()}, {"n", s.size()}});
        }
        inputs["series"] = series;
        summary_["input"] = inputs;
    }

    // ---- describe --------------------------------------------------------

    void describe() {
        const auto labels = or_all(cfg_.describe_series);
        const ReturnSeries* market = cfg_.market.empty() ? nullptr : &data_.get(cfg_.market);

        Table stats("Descriptive statistics (monthly returns, percent)",
                    {"series", "mean", "sd", "skewness", "excess_kurtosis", "jarque_bera", "autocorr_1", "beta"});
        Table betas("Market betas against " + (market ? market->label() : std::string("(none)")),
                    {"series", "n", "ols_beta", "scholes_williams_beta", "lag_beta", "contemporaneous_beta",
                     "lead_beta"});
        Table returns("returns", {"date", "series", "return"});
        Table prices("log prices", {"date", "series", "log_price"});
        Table corr("correlograms", {"series", "against", "lag", "correlation", "band"});
        Json out = Json::array();

        for (const auto& label : labels) {
            per_series("describe", label, [&] {
                const auto& s = data_.get(label);
                const StatSummary st = describe_series(s);
                double beta = std::numeric_limits<double>::quiet_NaN();
                Json entry{{"series", label}, {"n", st.n}, {"mean", st.mean}, {"sd", st.sd},
                           {"skewness", st.skewness}, {"excess_kurtosis", st.excess_kurtosis},
                           {"jarque_bera", st.jarque_bera}, {"autocorr_1", st.autocorr1}};
                if (market && label != market->label()) {
                    const Panel pair = align({s, *market});
                    const auto a = pair.series(0);
                    const auto m = pair.series(1);
                    beta = ols_beta(a, m);
                    const ScholesWilliams sw = scholes_williams(a, m);
                    betas.add_row({Table::str(label), Table::count(static_cast<double>(a.size())), Table::num(beta),
                                   Table::num(sw.beta), Table::num(sw.lag_beta),
                                   Table::num(sw.contemporaneous_beta), Table::num(sw.lead_beta)});
                    entry["beta"] = beta;
                    entry["scholes_williams_beta"] = sw.beta;
                    const int lags = std::min<int>(cfg_.correlogram_lags, static_cast<int>((a.size() - 1) / 2));
                    for (const auto& c : correlogram(a, m, lags)) {
                        corr.add_row({Table::str(label), Table::str(m.label()), Table::count(c.lag),
                                      Table::num(c.value), Table::num(c.band)});
                    }
                }
                stats.add_row({Table::str(label), Table::num(st.mean), Table::num(st.sd), Table::num(st.skewness),
                               Table::num(st.excess_kurtosis), Table::num(st.jarque_bera), Table::num(st.autocorr1),
                               Table::num(beta)});
                if (st.jarque_bera > k_jarque_bera_critical_5pct) entry["normality_rejected_5pct"] = true;
                out.push_back(entry);

                const int lags = std::min<int>(cfg_.correlogram_lags, static_cast<int>(s.size() - 1));
                for (const auto& c : autocorrelogram(s, lags)) {
                    corr.add_row({Table::str(label), Table::str(label), Table::count(c.lag), Table::num(c.value),
                                  Table::num(c.band)});
                }
                for (Eigen::Index t = 0; t < s.size(); ++t) {
                    returns.add_row({Table::str(s.grid().at(t).to_string()), Table::str(label), Table::num(s[t])});
                }
                const LogPriceSeries lp = cumulate_log_price(s);
                for (Eigen::Index t = 0; t < lp.size(); ++t) {
                    prices.add_row({Table::str(lp.grid().at(t).to_string()), Table::str(label),
                                    Table::num(lp.values()[t])});
                }
            });
        }
        table("descriptive_statistics", stats);
        if (market) table("market_betas", betas);
        plot("returns", returns);
        plot("log_prices", prices);
        plot("correlograms", corr);
        summary_["describe"] = out;

        if (market && !data_.constituents.empty()) {
            const auto rows = cross_sectional_summary(constituent_series(data_.constituents), *market);
            Table cs("Cross-sectional summary of constituents by year",
                     {"year", "n_assets", "mean_of_means", "mean_of_sds", "mean_beta", "sd_beta"});
            for (const auto& r : rows) {
                cs.add_row({Table::count(r.year), Table::count(r.n_assets), Table::num(r.mean_of_means),
                            Table::num(r.mean_of_sds), Table::num(r.mean_beta), Table::num(r.sd_beta)});
            }
            table("cross_section_by_year", cs);
        }
    }

    static StatSummary describe_series(const ReturnSeries& s) { return rerisk::describe(s); }

    // ---- pca -------------------------------------------------------------

    int factor_count(const PanelGroup& g, const PcaResult& r) const {
        const auto width = static_cast<int>(r.eigenvalues.size());
        if (g.factors > width) {
            throw ValidationError("panel '" + g.name + "' asks for " + std::to_string(g.factors) +
                                  " factors but has only " + std::to_string(width) + " series");
        }
        return g.factors > 0 ? g.factors : components_for_share(r, 0.90);
    }

    const PanelGroup& group(const std::string& name) const {
        for (const auto& g : cfg_.panels) {
            if (g.name == name) return g;
        }
        throw ValidationError("unknown panel '" + name + "'");
    }

    void principal_components() {
        if (cfg_.panels.empty()) {
            warning("pca", "", "no [panel NAME] sections configured");
            return;
        }
        Table scree_table("Variance explained by principal components",
                          {"panel", "component", "eigenvalue", "percent", "cumulative_percent"});
        Json out = Json::array();
        for (const auto& g : cfg_.panels) {
            per_series("pca", g.name, [&] {
                const Panel p = data_.panel(g.series);
                const PcaResult r = pca(p);
                if (r.rank_deficient) warning("pca", g.name, "covariance matrix is rank deficient");
                const int k = factor_count(g, r);
                for (const auto& row : scree(r)) {
                    scree_table.add_row({Table::str(g.name), Table::count(row.component), Table::num(row.eigenvalue),
                                         Table::num(row.percent), Table::num(row.cumulative_percent)});
                }
                std::vector<std::string> columns{"series", "loading_pc1", "loading_pc2"};
                for (int j = 1; j <= k; ++j) columns.push_back("adj_r2_pc1_to_" + std::to_string(j));
                Table loadings("Factor loadings and regression fit, panel " + g.name + " (" +
                                   p.grid().describe() + ")",
                               columns);
                for (Eigen::Index i = 0; i < p.width(); ++i) {
                    std::vector<Table::Cell> row{Table::str(p.labels()[static_cast<std::size_t>(i)]),
                                                 Table::num(r.loadings(i, 0)),
                                                 Table::num(r.loadings.cols() > 1
                                                                ? r.loadings(i, 1)
                                                                : std::numeric_limits<double>::quiet_NaN())};
                    for (int j = 1; j <= k; ++j) {
                        row.push_back(Table::num(factor_regression(p.series(i), r.scores, j).adj_r_square));
                    }
                    loadings.add_row(std::move(row));
                }
                table("pca_loadings_" + g.name, loadings);
                out.push_back({{"panel", g.name},
                               {"series", p.labels()},
                               {"start", p.grid().start().to_string()},
                               {"end", p.grid().last().to_string()},
                               {"factors", k},
                               {"eigenvalues", to_std(r.eigenvalues)},
                               {"cumulative_share", to_std(r.cumulative_share)},
                               {"loadings", matrix_json(r.loadings)}});
            });
        }
        table("pca_scree", scree_table);
        plot("scree", scree_table);
        summary_["pca"] = out;
    }

    // ---- risk ------------------------------------------------------------

    Json fit_json(const RiskReport& r) const {
        Json j;
        if (r.mixture) {
            const auto& m = *r.mixture;
            j["mixture"] = {{"k", m.k},           {"weights", to_std(m.weights)},
                            {"means", to_std(m.means)}, {"sds", to_std(m.sds)},
                            {"log_likelihood", m.log_likelihood}, {"bic", m.bic},
                            {"iterations", m.iterations}, {"converged", m.converged}};
        }
        if (r.gpd) {
            const auto& g = *r.gpd;
            j["gpd"] = {{"threshold", g.threshold}, {"shape", g.shape}, {"scale", g.scale},
                        {"exceedances", g.n_exceedances}, {"exceedance_rate", g.exceedance_rate},
                        {"log_likelihood", g.log_likelihood}, {"converged", g.converged}};
        }
        if (r.garch) {
            const auto& g = *r.garch;
            j["garch"] = {{"mu", g.params.mu}, {"omega", g.params.omega}, {"alpha", g.params.alpha},
                          {"beta", g.params.beta}, {"next_variance", g.next_variance},
                          {"log_likelihood", g.log_likelihood}, {"converged", g.converged}};
        }
        return j;
    }

    void risk() {
        Json out = Json::array();
        Table volatility("conditional volatility", {"date", "series", "basis", "conditional_sd"});
        for (const Basis basis : cfg_.bases) {
            std::vector<ReturnSeries> targets;
            if (basis == Basis::RawReturns) {
                for (const auto& l : or_all(cfg_.risk_series)) {
                    per_series("risk", l, [&] { targets.push_back(data_.get(l)); });
                }
            } else {
                if (cfg_.residual_panel.empty()) throw ValidationError("[risk] residual basis needs residual_panel");
                const PanelGroup& g = group(cfg_.residual_panel);
                const Panel p = data_.panel(g.series);
                const int k = factor_count(g, pca(p));
                const Panel residuals = residual_panel(p, k);
                for (const auto& s : residuals.to_series()) {
                    const bool wanted = cfg_.risk_series.empty() ||
                                        std::find(cfg_.risk_series.begin(), cfg_.risk_series.end(), s.label()) !=
                                            cfg_.risk_series.end();
                    if (wanted) targets.push_back(s);
                }
            }

            const std::string basis_name = to_string(basis);
            Table t("Risk of loss, " + basis_name + " basis (loss = negated monthly return, percent)",
                    {"series", "model", "fractile", "loss_fractile", "average_loss", "note"});
            for (const auto& s : targets) {
                const RiskReport r = risk_report(s, basis, cfg_.risk);
                for (const auto& e : r.errors) error("risk", "", e);
                for (const auto& w : r.warnings) warning("risk", "", w);
                for (const auto& c : r.cells) {
                    const double nan = std::numeric_limits<double>::quiet_NaN();
                    t.add_row({Table::str(s.label()), Table::str(to_string(c.model)), Table::num(c.fractile),
                               Table::num(c.loss.value_or(nan)), Table::num(c.average_loss.value_or(nan)),
                               Table::str(c.error)});
                    if (!c.error.empty() && r.errors.empty()) {
                        warning("risk", s.label(), std::string(to_string(c.model)) + " at " +
                                                       format_fixed(c.fractile) + ": " + c.error);
                    }
                }
                if (r.garch) {
                    for (Eigen::Index i = 0; i < s.size(); ++i) {
                        volatility.add_row({Table::str(s.grid().at(i).to_string()), Table::str(s.label()),
                                            Table::str(basis_name),
                                            Table::num(std::sqrt(r.garch->conditional_variance[i]))});
                    }
                }
                Json entry = fit_json(r);
                entry["series"] = s.label();
                entry["basis"] = basis_name;
                out.push_back(entry);
            }
            table("risk_" + basis_name, t);
        }
        plot("conditional_volatility", volatility);
        summary_["risk"] = {{"fractiles", cfg_.risk.fractiles},
                            {"threshold_quantile", cfg_.risk.threshold_quantile},
                            {"mixture_k_max", cfg_.risk.mixture_k_max},
                            {"garch_conditioning", cfg_.risk.garch_conditioning == GarchConditioning::OneStepAhead
                                                       ? "one-step"
                                                       : "unconditional"},
                            {"fits", out}};
    }

    // ---- unit roots --------------------------------------------------------

    void unit_roots() {
        const auto labels = cfg_.unitroot_series.empty() ? cfg_.var_series : cfg_.unitroot_series;
        if (labels.empty()) {
            warning("unitroot", "", "no series configured");
            return;
        }
        Table t("Unit-root and stationarity tests (constant, no trend)",
                {"series", "transform", "n", "adf", "adf_p", "adf_lags", "pp", "pp_p", "kpss", "kpss_p",
                 "kpss_reject_5pct", "kpss_reject_1pct"});
        Json out = Json::array();
        for (const auto& label : labels) {
            per_series("unitroot", label, [&] {
                const LogPriceSeries lp = cumulate_log_price(data_.get(label));
                const Eigen::VectorXd level = lp.values();
                const Eigen::VectorXd diff = log_differences(lp);
                for (const auto& [name, y] : {std::pair<std::string, const Eigen::VectorXd*>{"log_price", &level},
                                              {"log_return", &diff}}) {
                    const UnitRootReport u = unit_root_tests(*y);
                    t.add_row({Table::str(label), Table::str(name), Table::count(static_cast<double>(y->size())),
                               Table::num(u.adf.statistic), Table::num(u.adf.p_value), Table::count(u.adf.lags),
                               Table::num(u.pp.statistic), Table::num(u.pp.p_value), Table::num(u.kpss.statistic),
                               Table::num(u.kpss.p_value), Table::str(u.kpss.reject_5pct ? "yes" : "no"),
                               Table::str(u.kpss.reject_1pct ? "yes" : "no")});
                    out.push_back({{"series", label},
                                   {"transform", name},
                                   {"adf", u.adf.statistic},
                                   {"adf_p", u.adf.p_value},
                                   {"adf_lags", u.adf.lags},
                                   {"pp", u.pp.statistic},
                                   {"pp_p", u.pp.p_value},
                                   {"bandwidth", u.pp.bandwidth},
                                   {"kpss", u.kpss.statistic},
                                   {"kpss_p", u.kpss.p_value}});
                }
            });
        }
        table("unit_root_tests", t);
        summary_["unitroot"] = out;
    }

    // ---- predict -----------------------------------------------------------

    void predict() {
        if (cfg_.var_series.size() < 2) throw ValidationError("[predict] series needs at least two labels");
        const Panel p = data_.panel(cfg_.var_series);
        const auto& labels = p.labels();
        const auto k = static_cast<Eigen::Index>(labels.size());
        Json out;
        out["series"] = labels;
        out["start"] = p.grid().start().to_string();
        out["end"] = p.grid().last().to_string();

        int lag = cfg_.p_fixed;
        if (cfg_.lag_policy != "fixed") {
            const auto criteria = lag_criteria(p.values(), cfg_.p_max);
            Table t("VAR lag-order criteria (common sample)", {"p", "aic", "bic"});
            Json crit = Json::array();
            for (const auto& c : criteria) {
                t.add_row({Table::count(c.p), Table::num(c.aic), Table::num(c.bic)});
                crit.push_back({{"p", c.p}, {"aic", c.aic}, {"bic", c.bic}});
            }
            table("var_lag_criteria", t);
            const int by_aic = select_lag(p.values(), cfg_.p_max, Criterion::Aic);
            const int by_bic = select_lag(p.values(), cfg_.p_max, Criterion::Bic);
            lag = cfg_.lag_policy == "aic" ? by_aic : by_bic;
            out["lag_criteria"] = crit;
            out["aic_choice"] = by_aic;
            out["bic_choice"] = by_bic;
        }
        out["lag_policy"] = cfg_.lag_policy;
        out["p"] = lag;

        const VarFit fit = fit_var(p, lag);
        if (!fit.stable) {
            warning("predict", "", "VAR(" + std::to_string(lag) + ") is not stable (max companion modulus " +
                                       format_fixed(fit.max_modulus, 4) + ")");
        }

        std::vector<std::string> columns{"regressor"};
        for (const auto& l : labels) {
            columns.push_back(l);
            columns.push_back(l + "_t");
        }
        Table coef("VAR(" + std::to_string(lag) + ") coefficients with t-statistics, " + p.grid().describe(), columns);
        for (Eigen::Index r = 0; r < fit.coefficients_table.rows(); ++r) {
            std::vector<Table::Cell> row{Table::str(fit.regressor_name(r))};
            for (Eigen::Index i = 0; i < k; ++i) {
                row.push_back(Table::num(fit.coefficients_table(r, i)));
                row.push_back(Table::num(fit.t_stats(r, i)));
            }
            coef.add_row(std::move(row));
        }
        table("var_coefficients", coef);

        Table eq("VAR equation fit", {"equation", "r_square", "adj_r_square", "residual_sd"});
        for (Eigen::Index i = 0; i < k; ++i) {
            eq.add_row({Table::str(labels[static_cast<std::size_t>(i)]), Table::num(fit.r_square[i]),
                        Table::num(fit.adj_r_square[i]), Table::num(std::sqrt(fit.residual_cov(i, i)))});
        }
        table("var_equation_fit", eq);

        Table granger("Granger causality F-tests", {"cause", "effect", "f_stat", "df1", "df2", "p_value"});
        if (lag > 0) {
            const GrangerTable g = granger_causality(fit);
            for (Eigen::Index j = 0; j < k; ++j) {
                for (Eigen::Index i = 0; i < k; ++i) {
                    if (i == j) continue;
                    granger.add_row({Table::str(labels[static_cast<std::size_t>(j)]),
                                     Table::str(labels[static_cast<std::size_t>(i)]), Table::num(g.f_stat(i, j)),
                                     Table::count(g.df1), Table::count(static_cast<double>(g.df2)),
                                     Table::num(g.p_value(i, j))});
                }
            }
        }
        table("var_granger", granger);

        const ForecastPath path = forecast(fit, cfg_.forecast_horizon);
        Table fc("VAR forecasts with standard errors", {"step", "month", "series", "forecast", "std_err"});
        for (int s = 0; s < path.horizon; ++s) {
            for (Eigen::Index i = 0; i < k; ++i) {
                fc.add_row({Table::count(s + 1), Table::str(p.grid().last().plus(s + 1).to_string()),
                            Table::str(labels[static_cast<std::size_t>(i)]), Table::num(path.point(s, i)),
                            Table::num(path.std_err(s, i))});
            }
        }
        table("var_forecast", fc);

        Table fitted("fitted vs actual", {"date", "series", "actual", "fitted"});
        for (Eigen::Index t = 0; t < fit.nobs; ++t) {
            for (Eigen::Index i = 0; i < k; ++i) {
                fitted.add_row({Table::str(p.grid().at(lag + t).to_string()),
                                Table::str(labels[static_cast<std::size_t>(i)]),
                                Table::num(p.values()(lag + t, i)), Table::num(fit.fitted(t, i))});
            }
        }
        plot("var_fitted", fitted);

        std::vector<int> ordering;
        for (const auto& name : cfg_.ordering.empty() ? labels : cfg_.ordering) {
            const auto it = std::find(labels.begin(), labels.end(), name);
            if (it == labels.end()) throw ValidationError("[predict] ordering names unknown series '" + name + "'");
            ordering.push_back(static_cast<int>(it - labels.begin()));
        }
        IrfOptions options;
        options.n_boot = cfg_.n_boot;
        options.seed = mix_seed(cfg_.seed, 1);
        options.workers = cfg_.workers;
        const IrfResult ir = irf(fit, cfg_.irf_horizon, ordering, options);
        if (ir.failed_replications > 0) {
            warning("predict", "", std::to_string(ir.failed_replications) + " bootstrap refits were singular");
        }
        Table irf_plot("impulse responses", {"step", "response", "shock", "value", "lower", "upper"});
        for (int s = 0; s <= ir.horizon; ++s) {
            for (Eigen::Index i = 0; i < k; ++i) {
                for (Eigen::Index j = 0; j < k; ++j) {
                    const auto su = static_cast<std::size_t>(s);
                    const double nan = std::numeric_limits<double>::quiet_NaN();
                    irf_plot.add_row({Table::count(s), Table::str(labels[static_cast<std::size_t>(i)]),
                                      Table::str(labels[static_cast<std::size_t>(j)]),
                                      Table::num(ir.responses[su](i, j)),
                                      Table::num(ir.lower.empty() ? nan : ir.lower[su](i, j)),
                                      Table::num(ir.upper.empty() ? nan : ir.upper[su](i, j))});
                }
            }
        }
        plot("impulse_responses", irf_plot);

        const FevdResult fv = fevd(fit, std::max(1, cfg_.irf_horizon), ordering);
        Table fevd_plot("forecast error variance decomposition", {"step", "series", "shock", "share"});
        std::vector<std::string> fevd_cols{"step", "series"};
        for (const auto& l : labels) fevd_cols.push_back(l);
        Table fevd_table("Forecast error variance shares by shock", fevd_cols);
        const std::set<int> shown{1, 6, 12, fv.horizon};
        for (int s = 1; s <= fv.horizon; ++s) {
            const auto& share = fv.shares[static_cast<std::size_t>(s - 1)];
            for (Eigen::Index i = 0; i < k; ++i) {
                std::vector<Table::Cell> row{Table::count(s), Table::str(labels[static_cast<std::size_t>(i)])};
                for (Eigen::Index j = 0; j < k; ++j) {
                    fevd_plot.add_row({Table::count(s), Table::str(labels[static_cast<std::size_t>(i)]),
                                       Table::str(labels[static_cast<std::size_t>(j)]), Table::num(share(i, j))});
                    row.push_back(Table::num(share(i, j)));
                }
                if (shown.count(s)) fevd_table.add_row(std::move(row));
            }
        }
        plot("variance_decomposition", fevd_plot);
        table("var_fevd", fevd_table);

        std::vector<std::string> order_names;
        for (const int o : ordering) order_names.push_back(labels[static_cast<std::size_t>(o)]);
        out["nobs"] = fit.nobs;
        out["intercept"] = to_std(fit.intercept);
        Json coeff = Json::array();
        for (const auto& a : fit.coeff) coeff.push_back(matrix_json(a));
        out["coefficients"] = coeff;
        out["residual_cov"] = matrix_json(fit.residual_cov);
        out["stable"] = fit.stable;
        out["max_modulus"] = fit.max_modulus;
        out["ordering"] = order_names;
        out["bootstrap"] = {{"replications", ir.n_boot}, {"failed", ir.failed_replications}, {"seed", ir.seed}};
        summary_["predict"] = out;
    }

    // ---- synth -------------------------------------------------------------

    void synth() {
        if (cfg_.synth.empty()) throw ValidationError("no [synth NAME] sections configured");
        Json out = Json::array();
        std::uint64_t index = 0;
        for (const auto& section : cfg_.synth) {
            const std::string name = section.tag.empty() ? "synthetic" : section.tag;
            per_series("synth", name, [&] {
                GeneratorSpec spec = parse_generator_spec(section);
                if (!section.has("seed")) spec.seed = mix_seed(cfg_.seed, index);
                if (spec.labels.empty() && spec.kind() != GeneratorKind::Var &&
                    spec.kind() != GeneratorKind::FactorPanel) {
                    spec.labels = {name};
                }
                const auto generated = generate(spec);
                const Panel panel = std::holds_alternative<Panel>(generated)
                                        ? std::get<Panel>(generated)
                                        : Panel(std::vector<ReturnSeries>{std::get<ReturnSeries>(generated)});
                write("data/synth_" + name + ".csv", to_wide_csv(panel));
                out.push_back({{"name", name},
                               {"kind", to_string(spec.kind())},
                               {"n", spec.n},
                               {"seed", spec.seed},
                               {"series", panel.labels()}});
            });
            ++index;
        }
        summary_["synth"] = out;
    }

    const RunConfig& cfg_;
    fs::path out_;
    Dataset data_;
    RunResult result_;
    Json summary_;
    std::string report_text_;
};

}  // namespace

Command parse_command(std::string_view name) {
    if (name == "describe") return Command::Describe;
    if (name == "pca") return Command::Pca;
    if (name == "risk") return Command::Risk;
    if (name == "predict") return Command::Predict;
    if (name == "unitroot") return Command::UnitRoot;
    if (name == "synth") return Command::Synth;
    if (name == "report") return Command::Report;
    throw ValidationError("unknown command '" + std::string(name) + "'");
}

const char* to_string(Command c) {
    switch (c) {
        case Command::Describe: return "describe";
        case Command::Pca: return "pca";
        case Command::Risk: return "risk";
        case Command::Predict: return "predict";
        case Command::UnitRoot: return "unitroot";
        case Command::Synth: return "synth";
        case Command::Report: return "report";
    }
    return "?";
}

RunConfig RunConfig::from_config(const Config& cfg) {
    RunConfig rc;
    rc.source = cfg.source();
    const fs::path base = fs::path(cfg.source()).parent_path();

    if (const auto* s = cfg.find("input")) {
        rc.returns_path = resolve(base, s->get_or("returns", ""));
        rc.layout = parse_layout(s->get_or("layout", "wide"));
        rc.constituents_path = resolve(base, s->get_or("constituents", ""));
        rc.index_label = s->get_or("index_label", rc.index_label);
        rc.market = s->get_or("market", "");
    }
    for (const auto* s : cfg.all("smooth")) {
        const int window = static_cast<int>(s->get_int_or("window", 3));
        if (window < 1) throw ValidationError(s->describe() + ": window must be at least 1");
        const auto series = s->get_list("series");
        const std::string label = s->get_or("label", "");
        if (!label.empty() && series.size() != 1) {
            throw ValidationError(s->describe() + ": 'label' needs exactly one series");
        }
        for (const auto& name : series) rc.smoothing.push_back({name, window, label});
    }
    if (const auto* s = cfg.find("describe")) {
        rc.describe_series = list_or_empty(s, "series");
        rc.correlogram_lags = static_cast<int>(s->get_int_or("correlogram_lags", rc.correlogram_lags));
        if (rc.correlogram_lags < 1) throw ValidationError("[describe] correlogram_lags must be positive");
    }
    for (const auto* s : cfg.all("panel")) {
        if (s->tag.empty()) throw ValidationError(s->describe() + ": panel sections need a name, e.g. [panel reits]");
        PanelGroup g{s->tag, s->get_list("series"), static_cast<int>(s->get_int_or("factors", 0))};
        if (g.factors < 0) throw ValidationError(s->describe() + ": factors must be non-negative");
        if (g.factors > static_cast<int>(g.series.size())) {
            throw ValidationError(s->describe() + ": factors exceed the panel width");
        }
        rc.panels.push_back(std::move(g));
    }
    if (const auto* s = cfg.find("risk")) {
        rc.risk_series = list_or_empty(s, "series");
        rc.risk.fractiles = s->get_doubles_or("fractiles", rc.risk.fractiles);
        for (const double p : rc.risk.fractiles) check_fractile(p);
        rc.risk.threshold_quantile = s->get_double_or("threshold_quantile", rc.risk.threshold_quantile);
        if (!(rc.risk.threshold_quantile > 0.0 && rc.risk.threshold_quantile < 1.0)) {
            throw ValidationError("[risk] threshold_quantile must lie in (0, 1)");
        }
        rc.risk.mixture_k_max = static_cast<int>(s->get_int_or("mixture_k_max", rc.risk.mixture_k_max));
        const std::string conditioning = s->get_or("garch_conditioning", "one-step");
        if (conditioning == "one-step") {
            rc.risk.garch_conditioning = GarchConditioning::OneStepAhead;
        } else if (conditioning == "unconditional") {
            rc.risk.garch_conditioning = GarchConditioning::Unconditional;
        } else {
            throw ValidationError("[risk] garch_conditioning must be one-step or unconditional");
        }
        if (s->has("bases")) {
            rc.bases.clear();
            for (const auto& b : s->get_list("bases")) {
                if (b == "raw") {
                    rc.bases.push_back(Basis::RawReturns);
                } else if (b == "residual") {
                    rc.bases.push_back(Basis::Residuals);
                } else {
                    throw ValidationError("[risk] unknown basis '" + b + "' (expected raw or residual)");
                }
            }
        }
        rc.residual_panel = s->get_or("residual_panel", "");
    }
    if (const auto* s = cfg.find("unitroot")) rc.unitroot_series = list_or_empty(s, "series");
    if (const auto* s = cfg.find("predict")) {
        rc.var_series = list_or_empty(s, "series");
        rc.lag_policy = s->get_or("lag_policy", rc.lag_policy);
        if (rc.lag_policy != "aic" && rc.lag_policy != "bic" && rc.lag_policy != "fixed") {
            throw ValidationError("[predict] lag_policy must be aic, bic or fixed");
        }
        rc.p_max = static_cast<int>(s->get_int_or("p_max", rc.p_max));
        rc.p_fixed = static_cast<int>(s->get_int_or("p", rc.p_fixed));
        if (rc.lag_policy == "fixed" && !s->has("p")) throw ValidationError("[predict] lag_policy = fixed needs p");
        rc.forecast_horizon = static_cast<int>(s->get_int_or("horizon", rc.forecast_horizon));
        rc.irf_horizon = static_cast<int>(s->get_int_or("irf_horizon", rc.irf_horizon));
        rc.n_boot = static_cast<int>(s->get_int_or("bootstrap", rc.n_boot));
        rc.workers = static_cast<int>(s->get_int_or("workers", rc.workers));
        if (s->has("ordering")) rc.ordering = s->get_list("ordering");
        if (rc.p_max < 1 || rc.p_fixed < 0 || rc.forecast_horizon < 1 || rc.irf_horizon < 0 || rc.n_boot < 0 ||
            rc.workers < 1) {
            throw ValidationError("[predict] counts must be positive (p_max, horizon, workers) or non-negative");
        }
    }
    for (const auto* s : cfg.all("synth")) rc.synth.push_back(*s);
    if (const auto* s = cfg.find("output")) {
        rc.output_dir = s->get_or("dir", rc.output_dir);
        rc.seed = s->get_u64_or("seed", rc.seed);
    }
    rc.output_dir = resolve(base, rc.output_dir);

    for (const auto& path : {rc.returns_path, rc.constituents_path}) {
        if (!path.empty() && !fs::exists(path)) throw ValidationError("input file not found: " + path);
    }
    return rc;
}

RunConfig RunConfig::load(const std::string& path) { return from_config(Config::load(path)); }

RunResult run(Command command, const RunConfig& config) { return Runner(config).run(command); }

}  // namespace rerisk
