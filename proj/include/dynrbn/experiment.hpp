#pragma once

#include "dynrbn/evolution.hpp"
#include "dynrbn/stats.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace dynrbn {

enum class ExperimentKind
{
    dynamics,
    evolve,
};

enum class ScheduleKind
{
    stationary, // all-0 inputs on one landscape
    switching,  // all-0 inputs on landscape A, then all-1 inputs on landscape B
};

/// Everything needed to reproduce one experiment. Read from a flat
/// `key = value` text file; '#' starts a comment.
struct ExperimentConfig
{
    std::string name = "unnamed";
    ExperimentKind kind = ExperimentKind::evolve;
    std::vector<std::size_t> b_values{2};
    std::vector<std::size_t> k_values{2};
    std::vector<double> dynamic_percents{0.0};
    std::size_t nodes = 100;
    std::size_t traits = 10;
    std::size_t cycles = 100;
    ScheduleKind schedule = ScheduleKind::stationary;
    std::size_t landscapes = 10;
    std::size_t runs_per_landscape = 10;
    std::size_t networks = 100; // per dynamics cell
    VariantConfig variant;
    std::uint64_t seed = 1;
    std::size_t workers = 1;
    bool write_traces = true;
    bool write_genomes = true;

    /// Applies one `key = value` setting; throws std::invalid_argument on an
    /// unknown key or malformed value.
    void set(std::string_view key, std::string_view value);
    void validate() const;

    /// Canonical `key = value` listing of every setting.
    std::string to_text() const;
    EnvironmentSchedule make_schedule() const;
};

ExperimentConfig parse_config(std::istream &in);
ExperimentConfig load_config(const std::filesystem::path &path);

std::string_view to_string(ExperimentKind kind);
std::string_view to_string(ScheduleKind kind);

/// Seed-tree tags; every stream is derive_seed(master, {tag, ...}).
enum SeedTag : std::uint64_t
{
    seed_tag_landscape = 1,
    seed_tag_traits = 2,
    seed_tag_run = 3,
    seed_tag_network = 4,
};

/// Landscapes for replicate `index` at epistasis K. Depends only on
/// (master seed, N, K, index), so every arm and every B shares them.
std::vector<NkLandscape> replicate_landscapes(const ExperimentConfig &cfg, std::size_t k, std::size_t index,
                                              std::size_t count);
std::vector<NodeId> replicate_trait_nodes(const ExperimentConfig &cfg, std::size_t k, std::size_t index);

/// Runs job(i) for i in [0, count) on `workers` threads. The first exception
/// thrown by any job is rethrown after all workers finish.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)> &job);

struct DynamicsCell
{
    std::size_t b = 0;
    double dynamic_percent = 0.0;
    std::vector<double> finals; // changed fraction at the last cycle, per network
    Summary stats;
    double p_vs_static = 1.0; // Welch p against the 0% cell of the same B (if present)
};

struct DynamicsResult
{
    std::vector<DynamicsCell> cells;
};

DynamicsResult run_dynamics(const ExperimentConfig &cfg);

struct ReplicateOutcome
{
    std::size_t landscape = 0;
    std::size_t run = 0;
    RunRecord record;
};

struct EvolutionCell
{
    std::size_t b = 0;
    std::size_t k = 0;
    std::vector<ReplicateOutcome> replicates; // ordered by (landscape, run)
    Summary fitness;
    Summary dynamic_percent;

    std::vector<double> final_fitness() const;
    std::vector<double> final_dynamic_percent() const;
};

struct EvolutionResult
{
    std::vector<EvolutionCell> cells;
    // (K, landscape index) -> checksums of the landscapes used
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::uint64_t>> landscape_checksums;
};

EvolutionResult run_evolution_sweep(const ExperimentConfig &cfg);

inline constexpr int csv_schema_version = 1;

void write_dynamics_outputs(const std::filesystem::path &dir, const ExperimentConfig &cfg, const DynamicsResult &r);
void write_evolution_outputs(const std::filesystem::path &dir, const ExperimentConfig &cfg,
                             const EvolutionResult &r);

/// Runs whichever kind cfg names and writes its output directory.
void run_experiment(const ExperimentConfig &cfg, const std::filesystem::path &dir);

/// Per-cell final values read back from an evolve output directory.
struct ArmFinals
{
    std::map<std::pair<std::size_t, std::size_t>, std::vector<double>> fitness;
    std::map<std::pair<std::size_t, std::size_t>, std::vector<double>> dynamic_percent;
};

ArmFinals arm_finals(const EvolutionResult &r);
ArmFinals read_arm_finals(const std::filesystem::path &dir);

struct SignificanceRow
{
    std::size_t b = 0;
    std::size_t k = 0;
    std::size_t n_a = 0;
    std::size_t n_b = 0;
    double fitness_mean_a = 0.0;
    double fitness_mean_b = 0.0;
    double fitness_p = 1.0;
    double dynamic_mean_a = 0.0;
    double dynamic_mean_b = 0.0;
    double dynamic_p = 1.0;
};

inline constexpr double significance_alpha = 0.05;

/// Welch tests between two arms for every (B, K) cell present in both.
std::vector<SignificanceRow> significance_report(const ArmFinals &a, const ArmFinals &b);
void write_significance_csv(std::ostream &out, const std::vector<SignificanceRow> &rows);

} // namespace dynrbn
