#include "dynrbn/evolution.hpp"

#include "text_util.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <string>

namespace dynrbn {

std::string_view to_string(Inheritance v)
{
    return v == Inheritance::inherit_final ? "inherit_final" : "genome_restart";
}

std::string_view to_string(TableInheritance v)
{
    return v == TableInheritance::rerandomize ? "rerandomize" : "inherit";
}

std::string_view to_string(MutationSet v)
{
    switch (v)
    {
    case MutationSet::full6:
        return "full6";
    case MutationSet::reduced4:
        return "reduced4";
    case MutationSet::reduced3:
        return "reduced3";
    }
    return "?";
}

std::string_view to_string(MutationClass v)
{
    switch (v)
    {
    case MutationClass::function_bit:
        return "function_bit";
    case MutationClass::b_connection:
        return "b_connection";
    case MutationClass::start_state:
        return "start_state";
    case MutationClass::dynamic_toggle:
        return "dynamic_toggle";
    case MutationClass::table_entry:
        return "table_entry";
    case MutationClass::bp_connection:
        return "bp_connection";
    }
    return "?";
}

Inheritance parse_inheritance(std::string_view text)
{
    if (text == "genome_restart")
        return Inheritance::genome_restart;
    if (text == "inherit_final")
        return Inheritance::inherit_final;
    throw std::invalid_argument("unknown inheritance '" + std::string(text) + "'");
}

TableInheritance parse_table_inheritance(std::string_view text)
{
    if (text == "inherit")
        return TableInheritance::inherit;
    if (text == "rerandomize")
        return TableInheritance::rerandomize;
    throw std::invalid_argument("unknown table inheritance '" + std::string(text) + "'");
}

MutationSet parse_mutation_set(std::string_view text)
{
    if (text == "full6")
        return MutationSet::full6;
    if (text == "reduced4")
        return MutationSet::reduced4;
    if (text == "reduced3")
        return MutationSet::reduced3;
    throw std::invalid_argument("unknown mutation set '" + std::string(text) + "'");
}

void VariantConfig::validate() const
{
    if (mutation_set == MutationSet::reduced3 && mode != DynamismMode::full)
        throw std::invalid_argument("mutation set reduced3 requires full dynamism mode");
    if (table_inheritance == TableInheritance::rerandomize && inheritance != Inheritance::genome_restart)
        throw std::invalid_argument("table rerandomization requires genome_restart inheritance");
    if (!(p_dynamic_init >= 0.0 && p_dynamic_init <= 1.0))
        throw std::invalid_argument("p_dynamic_init must lie in [0,1]");
    if (trace_interval == 0)
        throw std::invalid_argument("trace interval must be positive");
}

std::span<const MutationClass> mutation_classes(MutationSet set)
{
    using M = MutationClass;
    static constexpr std::array<M, 6> full6{M::function_bit,   M::b_connection, M::start_state,
                                            M::dynamic_toggle, M::table_entry,  M::bp_connection};
    static constexpr std::array<M, 4> reduced4{M::function_bit, M::dynamic_toggle, M::table_entry,
                                               M::bp_connection};
    static constexpr std::array<M, 3> reduced3{M::function_bit, M::dynamic_toggle, M::table_entry};
    switch (set)
    {
    case MutationSet::reduced4:
        return reduced4;
    case MutationSet::reduced3:
        return reduced3;
    default:
        return full6;
    }
}

std::size_t Genome::dynamic_count() const noexcept
{
    return static_cast<std::size_t>(std::count(dynamic.begin(), dynamic.end(), std::uint8_t{1}));
}

Genome init_genome(const RbnConfig &config, const VariantConfig &variant, Rng &rng)
{
    config.validate();
    variant.validate();
    const std::size_t n = config.nodes;
    Genome g{StateVector(n),
             BooleanFunctions(n, config.in_degree),
             Topology(n, config.in_degree),
             Topology(n, config.structure_in_degree),
             RewireTables(n, config.in_degree, config.structure_in_degree),
             std::vector<std::uint8_t>(n, 0)};
    randomize_states(g.start, rng);
    randomize_functions(g.functions, rng);
    randomize_topology(g.b_sources, rng);
    randomize_topology(g.bp_sources, rng);
    g.tables.randomize(variant.addressing, rng);
    for (auto &d : g.dynamic)
        d = rng.bernoulli(variant.p_dynamic_init) ? 1 : 0;
    return g;
}

Genome init_genome(const RbnConfig &config, const VariantConfig &variant, std::uint64_t seed)
{
    Rng rng(seed);
    return init_genome(config, variant, rng);
}

LiveNetwork instantiate(const Genome &g, const VariantConfig &variant)
{
    return LiveNetwork{g.functions, g.b_sources, g.bp_sources,
                       DynamismSpec{g.dynamic, g.tables, variant.mode, variant.addressing}, g.start};
}

namespace {

// Uniform over [0, count) excluding `current`.
std::uint64_t draw_other(Rng &rng, std::uint64_t count, std::uint64_t current)
{
    std::uint64_t v = rng.below(count - 1);
    return v >= current ? v + 1 : v;
}

std::size_t pick_dynamic_node(const Genome &g, Rng &rng)
{
    std::size_t target = rng.below(g.dynamic_count());
    for (std::size_t i = 0; i < g.dynamic.size(); ++i)
        if (g.dynamic[i] && target-- == 0)
            return i;
    return 0; // unreachable
}

bool applicable(MutationClass c, const Genome &g, const VariantConfig &variant)
{
    const bool multi = g.nodes() > 1;
    switch (c)
    {
    case MutationClass::b_connection:
        return multi;
    case MutationClass::table_entry:
        return g.dynamic_count() > 0 && (multi || variant.addressing == Addressing::relative);
    case MutationClass::bp_connection:
        return g.dynamic_count() > 0 && multi;
    default:
        return true;
    }
}

} // namespace

MutationClass mutate(Genome &g, const VariantConfig &variant, Rng &rng)
{
    const auto classes = mutation_classes(variant.mutation_set);
    MutationClass c;
    do
        c = classes[rng.below(classes.size())];
    while (!applicable(c, g, variant));

    const std::size_t n = g.nodes();
    switch (c)
    {
    case MutationClass::function_bit: {
        const std::size_t node = rng.below(n);
        if (variant.whole_function_mutation)
        {
            auto table = g.functions.table(node);
            const std::vector<std::uint8_t> before(table.begin(), table.end());
            do
                for (auto &b : table)
                    b = rng.coin() ? 1 : 0;
            while (std::equal(table.begin(), table.end(), before.begin()));
        }
        else
        {
            g.functions.flip(node, rng.below(g.functions.rows()));
        }
        break;
    }
    case MutationClass::b_connection: {
        auto src = g.b_sources.sources(rng.below(n));
        auto &slot = src[rng.below(src.size())];
        slot = static_cast<NodeId>(draw_other(rng, n, slot));
        break;
    }
    case MutationClass::start_state:
        g.start[rng.below(n)] ^= 1;
        break;
    case MutationClass::dynamic_toggle:
        g.dynamic[rng.below(n)] ^= 1;
        break;
    case MutationClass::table_entry: {
        const std::size_t node = pick_dynamic_node(g, rng);
        // In standard mode the structure part of a row is never read, so
        // only the transcription slots are eligible.
        const std::size_t slots = variant.mode == DynamismMode::full ? g.tables.row_width() : g.tables.in_degree();
        auto row = g.tables.row(node, rng.below(g.tables.rows()));
        auto &slot = row[rng.below(slots)];
        if (variant.addressing == Addressing::absolute)
        {
            slot = static_cast<std::int32_t>(draw_other(rng, n, static_cast<std::uint64_t>(slot)));
        }
        else
        {
            const auto span = static_cast<std::uint64_t>(2 * relative_offset_limit + 1);
            const auto cur = static_cast<std::uint64_t>(slot + relative_offset_limit);
            slot = static_cast<std::int32_t>(draw_other(rng, span, cur)) - relative_offset_limit;
        }
        break;
    }
    case MutationClass::bp_connection: {
        auto src = g.bp_sources.sources(pick_dynamic_node(g, rng));
        auto &slot = src[rng.below(src.size())];
        slot = static_cast<NodeId>(draw_other(rng, n, slot));
        break;
    }
    }
    return c;
}

Genome inherit(const Genome &parent, const LifecycleResult *parent_result, const VariantConfig &variant, Rng &rng)
{
    Genome child = parent;
    if (variant.inheritance == Inheritance::inherit_final)
    {
        if (!parent_result)
            throw std::invalid_argument("inherit_final offspring need the parent's lifecycle result");
        child.b_sources = parent_result->final_topology;
        child.bp_sources = parent_result->final_structure_topology;
        child.start = parent_result->final_state;
    }
    if (variant.table_inheritance == TableInheritance::rerandomize)
    {
        for (std::size_t i = 0; i < child.nodes(); ++i)
            if (child.dynamic[i])
                child.tables.randomize_node(i, variant.addressing, rng);
    }
    return child;
}

Genome make_offspring(const Genome &parent, const LifecycleResult *parent_result, const VariantConfig &variant,
                      Rng &rng)
{
    Genome child = inherit(parent, parent_result, variant, rng);
    mutate(child, variant, rng);
    return child;
}

bool accept(double parent_fitness, double child_fitness, std::size_t parent_dynamic, std::size_t child_dynamic,
            Rng &rng)
{
    if (child_fitness != parent_fitness)
        return child_fitness > parent_fitness;
    if (child_dynamic != parent_dynamic)
        return child_dynamic < parent_dynamic;
    return rng.coin();
}

RunRecord hillclimb(const VariantConfig &variant, const RbnConfig &rbn, const EvalConfig &eval,
                    const EnvironmentSchedule &schedule, std::span<const NkLandscape> landscapes, std::uint64_t seed)
{
    variant.validate();
    rbn.validate();
    eval.validate(rbn.nodes);
    schedule.validate(eval.cycles, eval.inputs, landscapes.size());

    Rng rng(seed);
    RunRecord rec;
    rec.seed = seed;
    rec.generations = variant.generations;

    Genome parent = init_genome(rbn, variant, rng);
    LifecycleResult parent_result = evaluate(instantiate(parent, variant), eval, schedule, landscapes);
    const double nodes = static_cast<double>(rbn.nodes);

    auto record = [&](std::size_t gen) {
        rec.trace.push_back({gen, parent_result.mean_fitness, static_cast<double>(parent.dynamic_count()) / nodes});
    };
    record(0);

    // Evaluation is deterministic, so the parent's cached lifecycle result
    // stands in for re-evaluating it each generation.
    for (std::size_t gen = 1; gen <= variant.generations; ++gen)
    {
        Genome child = make_offspring(parent, &parent_result, variant, rng);
        LifecycleResult child_result = evaluate(instantiate(child, variant), eval, schedule, landscapes);
        if (accept(parent_result.mean_fitness, child_result.mean_fitness, parent.dynamic_count(),
                   child.dynamic_count(), rng))
        {
            parent = std::move(child);
            parent_result = std::move(child_result);
        }
        if (gen % variant.trace_interval == 0 || gen == variant.generations)
            record(gen);
    }

    rec.final_fitness = parent_result.mean_fitness;
    rec.final_dynamic_fraction = static_cast<double>(parent.dynamic_count()) / nodes;
    rec.final_genome = std::move(parent);
    return rec;
}

void write_trace_csv(std::ostream &out, const RunRecord &record)
{
    out << "generation,fitness,dynamic_fraction\n";
    for (const auto &p : record.trace)
        out << p.generation << ',' << detail::format_double(p.fitness) << ','
            << detail::format_double(p.dynamic_fraction) << '\n';
}

void write_genome(std::ostream &out, const Genome &g)
{
    out << "dynrbn-genome 1\n";
    out << "nodes " << g.nodes() << " b " << g.b_sources.degree() << " bprime " << g.bp_sources.degree() << '\n';
    for (std::size_t i = 0; i < g.nodes(); ++i)
    {
        out << "node " << i << " start " << int(g.start[i]) << " dynamic " << int(g.dynamic[i]) << " function ";
        for (auto b : g.functions.table(i))
            out << int(b);
        out << " sources";
        for (auto s : g.b_sources.sources(i))
            out << ' ' << s;
        out << " structure";
        for (auto s : g.bp_sources.sources(i))
            out << ' ' << s;
        out << " table";
        for (std::size_t r = 0; r < g.tables.rows(); ++r)
        {
            out << " |";
            for (auto e : g.tables.row(i, r))
                out << ' ' << e;
        }
        out << '\n';
    }
}

} // namespace dynrbn
