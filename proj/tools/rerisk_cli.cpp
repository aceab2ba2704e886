// rerisk: command-line front end over the analysis pipeline.
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "rerisk/error.hpp"
#include "rerisk/pipeline.hpp"

namespace {

constexpr int k_exit_stage_errors = 1;
constexpr int k_exit_bad_config = 2;

int run_command(rerisk::Command command, const std::string& config_path, const std::string& out_dir,
                const std::string& seed, int workers) {
    rerisk::RunConfig cfg = rerisk::RunConfig::load(config_path);
    // Seed precedence: --seed, then RERISK_SEED, then [output] seed.
    std::string seed_text = seed;
    if (seed_text.empty()) {
        if (const char* env = std::getenv("RERISK_SEED")) seed_text = env;
    }
    if (!seed_text.empty()) {
        std::size_t used = 0;
        cfg.seed = std::stoull(seed_text, &used);
        if (used != seed_text.size()) throw rerisk::ValidationError("seed must be an unsigned integer");
    }
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (workers > 0) cfg.workers = workers;

    const rerisk::RunResult result = rerisk::run(command, cfg);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
    for (const auto& e : result.errors) std::cerr << "error: " << e << '\n';
    std::cout << rerisk::to_string(command) << ": " << result.files.size() << " files written to " << cfg.output_dir
              << (result.errors.empty() ? "" : " (with errors, see manifest.json)") << '\n';
    return result.exit_status == 0 ? 0 : k_exit_stage_errors;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rerisk: return-series risk, factor and VAR analysis"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string seed;
    int workers = 0;
    std::string demo_dir;

    const auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* opt = sub->add_option("-c,--config", config_path, "Run configuration file")->check(CLI::ExistingFile);
        if (config_required) opt->required();
        sub->add_option("-o,--out", out_dir, "Output directory (overrides [output] dir)");
        sub->add_option("-s,--seed", seed, "Root seed (overrides RERISK_SEED and [output] seed)");
        sub->add_option("-w,--workers", workers, "Bootstrap worker threads")->check(CLI::PositiveNumber);
    };

    for (const char* name : {"describe", "pca", "risk", "predict", "unitroot", "report"}) {
        add_common(app.add_subcommand(name, std::string("Run the ") + name + " stage"), true);
    }
    auto* synth = app.add_subcommand("synth", "Generate synthetic series from [synth NAME] sections");
    add_common(synth, false);
    synth->add_option("--demo", demo_dir, "Write the bundled demo dataset and config into DIR");

    CLI11_PARSE(app, argc, argv);

    try {
        auto* sub = app.get_subcommands().front();
        const auto command = rerisk::parse_command(sub->get_name());
        if (command == rerisk::Command::Synth && !demo_dir.empty()) {
            rerisk::write_demo(demo_dir);
            std::cout << "demo dataset written to " << demo_dir << '\n';
            return 0;
        }
        if (config_path.empty()) {
            std::cerr << "error: --config is required\n";
            return k_exit_bad_config;
        }
        return run_command(command, config_path, out_dir, seed, workers);
    } catch (const rerisk::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return k_exit_bad_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return k_exit_bad_config;
    }
}
