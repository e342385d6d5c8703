#include "dynrbn/experiment.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace dynrbn;

namespace {

struct RunOptions
{
    std::string config;
    std::string preset;
    std::string preset_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> workers;
    std::string out;
    std::vector<std::string> overrides;
};

fs::path preset_directory(const RunOptions &opt)
{
    if (!opt.preset_dir.empty())
        return opt.preset_dir;
    if (const char *env = std::getenv("DYNRBN_PRESETS"))
        return env;
    return DYNRBN_PRESET_DIR;
}

ExperimentConfig resolve(const RunOptions &opt, ExperimentKind expected)
{
    if (opt.config.empty() == opt.preset.empty())
        throw std::invalid_argument("give exactly one of --config or --preset");
    ExperimentConfig cfg =
        opt.config.empty() ? load_config(preset_directory(opt) / (opt.preset + ".conf")) : load_config(opt.config);
    for (const auto &kv : opt.overrides)
    {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (opt.seed)
        cfg.seed = *opt.seed;
    if (opt.workers)
        cfg.workers = *opt.workers;
    if (cfg.kind != expected)
        throw std::invalid_argument("configuration is a '" + std::string(to_string(cfg.kind)) +
                                    "' experiment; use that subcommand");
    cfg.validate();
    return cfg;
}

void add_run_options(CLI::App *cmd, RunOptions &opt)
{
    cmd->add_option("--config", opt.config, "Experiment configuration file");
    cmd->add_option("--preset", opt.preset, "Named preset from the presets directory");
    cmd->add_option("--preset-dir", opt.preset_dir, "Directory holding <preset>.conf files");
    cmd->add_option("--seed", opt.seed, "Master seed (overrides the configuration)");
    cmd->add_option("--workers", opt.workers, "Worker threads for replicates");
    cmd->add_option("--set", opt.overrides, "Override a configuration key (key=value), repeatable");
    cmd->add_option("--out", opt.out, "Output directory")->required();
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Structurally dynamic random Boolean networks on NK landscapes"};
    app.require_subcommand(1);

    RunOptions dyn_opt;
    auto *dynamics = app.add_subcommand("dynamics", "Changed-fraction statistics over (B, dynamic%) cells");
    add_run_options(dynamics, dyn_opt);

    RunOptions evo_opt;
    auto *evolve = app.add_subcommand("evolve", "Hillclimber sweep over (B, K) cells");
    add_run_options(evolve, evo_opt);

    std::string arm_a, arm_b, report_out;
    auto *report = app.add_subcommand("report", "Welch tests between two evolve output directories");
    report->add_option("arm_a", arm_a, "First evolve output directory")->required()->check(CLI::ExistingDirectory);
    report->add_option("arm_b", arm_b, "Second evolve output directory")->required()->check(CLI::ExistingDirectory);
    report->add_option("--out", report_out, "Output directory for significance.csv (stdout if omitted)");

    std::string list_dir;
    auto *presets = app.add_subcommand("presets", "List available presets");
    presets->add_option("--preset-dir", list_dir, "Directory holding <preset>.conf files");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*dynamics)
        {
            const auto cfg = resolve(dyn_opt, ExperimentKind::dynamics);
            run_experiment(cfg, dyn_opt.out);
            std::cout << "wrote " << dyn_opt.out << '\n';
        }
        else if (*evolve)
        {
            const auto cfg = resolve(evo_opt, ExperimentKind::evolve);
            run_experiment(cfg, evo_opt.out);
            std::cout << "wrote " << evo_opt.out << '\n';
        }
        else if (*report)
        {
            const auto rows = significance_report(read_arm_finals(arm_a), read_arm_finals(arm_b));
            if (report_out.empty())
            {
                write_significance_csv(std::cout, rows);
            }
            else
            {
                fs::create_directories(report_out);
                const auto path = fs::path(report_out) / "significance.csv";
                std::ofstream out(path, std::ios::binary);
                write_significance_csv(out, rows);
                if (!out)
                    throw std::runtime_error("failed writing '" + path.string() + "'");
                std::cout << "wrote " << path.string() << '\n';
            }
        }
        else if (*presets)
        {
            RunOptions opt;
            opt.preset_dir = list_dir;
            std::vector<std::string> names;
            for (const auto &entry : fs::directory_iterator(preset_directory(opt)))
                if (entry.path().extension() == ".conf")
                    names.push_back(entry.path().stem().string());
            std::sort(names.begin(), names.end());
            for (const auto &n : names)
                std::cout << n << '\n';
        }
    }
    catch (const std::exception &e)
    {
        std::cerr << "dynrbn: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
