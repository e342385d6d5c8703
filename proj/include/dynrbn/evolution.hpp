#pragma once

#include "dynrbn/rbnk.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace dynrbn {

enum class Inheritance
{
    genome_restart, // offspring start from the parent's genome
    inherit_final,  // offspring start from the parent's end-of-life structure and states
};

enum class TableInheritance
{
    inherit,
    rerandomize, // dynamic nodes' rewiring tables are redrawn in every offspring
};

enum class MutationSet
{
    full6,
    reduced4, // no B-connection or start-state mutation
    reduced3, // additionally no B'-connection mutation
};

enum class MutationClass
{
    function_bit,
    b_connection,
    start_state,
    dynamic_toggle,
    table_entry,
    bp_connection,
};

std::string_view to_string(Inheritance v);
std::string_view to_string(TableInheritance v);
std::string_view to_string(MutationSet v);
std::string_view to_string(MutationClass v);
Inheritance parse_inheritance(std::string_view text);
TableInheritance parse_table_inheritance(std::string_view text);
MutationSet parse_mutation_set(std::string_view text);

struct VariantConfig
{
    Inheritance inheritance = Inheritance::genome_restart;
    TableInheritance table_inheritance = TableInheritance::inherit;
    DynamismMode mode = DynamismMode::standard;
    Addressing addressing = Addressing::absolute;
    MutationSet mutation_set = MutationSet::full6;
    double p_dynamic_init = 0.5;
    std::size_t generations = 50000;
    std::size_t trace_interval = 50;
    // Replace a node's whole truth table instead of flipping one bit.
    bool whole_function_mutation = false;

    void validate() const;
};

std::span<const MutationClass> mutation_classes(MutationSet set);

/// The evolvable description of a network.
struct Genome
{
    StateVector start;
    BooleanFunctions functions;
    Topology b_sources;
    Topology bp_sources;
    RewireTables tables;
    std::vector<std::uint8_t> dynamic;

    std::size_t nodes() const noexcept { return start.size(); }
    std::size_t dynamic_count() const noexcept;

    bool operator==(const Genome &) const = default;
};

Genome init_genome(const RbnConfig &config, const VariantConfig &variant, Rng &rng);
Genome init_genome(const RbnConfig &config, const VariantConfig &variant, std::uint64_t seed);

LiveNetwork instantiate(const Genome &g, const VariantConfig &variant);

/// Applies exactly one mutation drawn uniformly from the variant's classes
/// that can change the genome; returns the class applied.
MutationClass mutate(Genome &g, const VariantConfig &variant, Rng &rng);

/// The child genome before mutation: the parent's genome, with end-of-life
/// structure and states copied in for inherit_final and dynamic nodes'
/// tables redrawn for rerandomize. parent_result is required for
/// inherit_final.
Genome inherit(const Genome &parent, const LifecycleResult *parent_result, const VariantConfig &variant, Rng &rng);

/// inherit() followed by a single mutate().
Genome make_offspring(const Genome &parent, const LifecycleResult *parent_result, const VariantConfig &variant,
                      Rng &rng);

/// Strictly fitter wins; a fitness tie goes to fewer dynamic nodes; a full
/// tie is a fair coin.
bool accept(double parent_fitness, double child_fitness, std::size_t parent_dynamic, std::size_t child_dynamic,
            Rng &rng);

struct TracePoint
{
    std::size_t generation = 0;
    double fitness = 0.0;
    double dynamic_fraction = 0.0;

    bool operator==(const TracePoint &) const = default;
};

struct RunRecord
{
    std::vector<TracePoint> trace; // every trace_interval generations, plus 0 and the last
    Genome final_genome;
    double final_fitness = 0.0;
    double final_dynamic_fraction = 0.0;
    std::size_t generations = 0;
    std::uint64_t seed = 0;
};

RunRecord hillclimb(const VariantConfig &variant, const RbnConfig &rbn, const EvalConfig &eval,
                    const EnvironmentSchedule &schedule, std::span<const NkLandscape> landscapes, std::uint64_t seed);

void write_trace_csv(std::ostream &out, const RunRecord &record);
void write_genome(std::ostream &out, const Genome &g);

} // namespace dynrbn
