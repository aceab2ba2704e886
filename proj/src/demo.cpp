#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "rerisk/io.hpp"
#include "rerisk/pipeline.hpp"
#include "rerisk/random.hpp"

namespace rerisk {

namespace {

constexpr int k_months = 276;  // 1987-01 .. 2009-12
constexpr int k_firms = 24;
const std::array<const char*, 6> k_sectors{"EQUITY", "MORTGAGE", "HYBRID", "OFFICE", "RETAIL", "RESIDENTIAL"};

constexpr const char* k_demo_config = R"(# Demo run over the bundled synthetic dataset.
[input]
returns = returns.csv
layout = wide
constituents = constituents.csv
index_label = REIT_VW
market = MKT

[smooth]
series = HOUSING
window = 3

[describe]
correlogram_lags = 12

[panel reits]
series = EQUITY, MORTGAGE, HYBRID, OFFICE, RETAIL, RESIDENTIAL
factors = 3

[risk]
series = REIT_VW, EQUITY, MORTGAGE, HYBRID, OFFICE, RETAIL, RESIDENTIAL
bases = raw, residual
residual_panel = reits
fractiles = 0.95, 0.99, 0.999

[unitroot]
series = HOUSING_MA3, REIT_VW, RESIDENTIAL

[predict]
series = HOUSING_MA3, REIT_VW, RESIDENTIAL
lag_policy = bic
p_max = 6
horizon = 6
irf_horizon = 24
bootstrap = 500

[output]
dir = out
seed = 20090531
)";

}  // namespace

void write_demo(const std::string& dir, std::uint64_t seed) {
    Rng rng(seed);
    const YearMonth start(1987, 1);

    // Market, a GARCH-driven property factor, then sector returns with
    // occasional large idiosyncratic moves.
    std::vector<double> market(k_months), property(k_months);
    double h = 0.5 / (1.0 - 0.1 - 0.85);
    double e = 0.0;
    for (int t = 0; t < k_months; ++t) {
        market[static_cast<std::size_t>(t)] = rng.normal(0.9, 4.3);
        if (t > 0) h = 0.5 + 0.1 * e * e + 0.85 * h;
        e = std::sqrt(h) * rng.normal();
        property[static_cast<std::size_t>(t)] = e;
    }
    const std::array<double, 6> mean{0.9, 0.6, 0.7, 0.8, 0.9, 1.0};
    const std::array<double, 6> market_beta{0.55, 0.7, 0.6, 0.6, 0.5, 0.5};
    const std::array<double, 6> property_beta{1.0, 1.3, 1.1, 0.9, 0.8, 1.0};
    const std::array<double, 6> idio{1.5, 3.0, 2.5, 1.8, 1.8, 1.6};
    Eigen::MatrixXd sectors(k_months, 6);
    for (int t = 0; t < k_months; ++t) {
        for (int j = 0; j < 6; ++j) {
            const double scale = rng.uniform() < 0.08 ? 3.0 : 1.0;
            sectors(t, j) = mean[static_cast<std::size_t>(j)] +
                            market_beta[static_cast<std::size_t>(j)] * market[static_cast<std::size_t>(t)] +
                            property_beta[static_cast<std::size_t>(j)] * property[static_cast<std::size_t>(t)] +
                            scale * idio[static_cast<std::size_t>(j)] * rng.normal();
        }
    }
    // Persistent house-price returns that lag equity REITs by a month.
    std::vector<double> housing(k_months);
    double previous = 0.4;
    for (int t = 0; t < k_months; ++t) {
        const double lagged_equity = t > 0 ? sectors(t - 1, 0) : 0.9;
        previous = 0.15 + 0.5 * previous + 0.04 * lagged_equity + rng.normal(0.0, 0.6);
        housing[static_cast<std::size_t>(t)] = previous;
    }

    std::string returns = "date,MKT,HOUSING";
    for (const auto* s : k_sectors) returns += std::string(",") + s;
    returns += '\n';
    for (int t = 0; t < k_months; ++t) {
        returns += start.plus(t).to_string() + "," + format_fixed(market[static_cast<std::size_t>(t)], 4) + "," +
                   format_fixed(housing[static_cast<std::size_t>(t)], 4);
        for (int j = 0; j < 6; ++j) returns += "," + format_fixed(sectors(t, j), 4);
        returns += '\n';
    }

    // Constituents: firm i belongs to sector i % 6. Firms 20-23 list two
    // years late and firm 0 delists after month 200.
    std::string constituents = "date,id,return,market_cap\n";
    std::vector<double> cap(k_firms);
    for (int i = 0; i < k_firms; ++i) cap[static_cast<std::size_t>(i)] = 200.0 + 1800.0 * rng.uniform();
    for (int t = 0; t < k_months; ++t) {
        for (int i = 0; i < k_firms; ++i) {
            const double r = std::max(-95.0, sectors(t, i % 6) + rng.normal(0.0, 5.0));
            const bool listed = (i < 20 || t >= 24) && !(i == 0 && t > 200);
            if (listed) {
                char id[16];
                std::snprintf(id, sizeof id, "R%02d", i + 1);
                constituents += start.plus(t).to_string() + "," + id + "," + format_fixed(r, 4) + "," +
                                format_fixed(cap[static_cast<std::size_t>(i)], 2) + "\n";
            }
            cap[static_cast<std::size_t>(i)] *= 1.0 + r / 100.0;
        }
    }

    const std::filesystem::path root(dir);
    write_text_file((root / "returns.csv").string(), returns);
    write_text_file((root / "constituents.csv").string(), constituents);
    write_text_file((root / "rerisk.ini").string(), k_demo_config);
}

}  // namespace rerisk
