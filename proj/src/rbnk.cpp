#include "dynrbn/rbnk.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace dynrbn {

void EvalConfig::validate(std::size_t nodes) const
{
    if (cycles == 0)
        throw std::invalid_argument("lifecycle needs at least one cycle");
    if (inputs > nodes)
        throw std::invalid_argument("more input loci than nodes");
    std::vector<std::uint8_t> used(nodes, 0);
    for (NodeId t : trait_nodes)
    {
        if (t >= nodes)
            throw std::invalid_argument("trait node " + std::to_string(t) + " out of bounds");
        if (t < inputs)
            throw std::invalid_argument("trait node " + std::to_string(t) + " overlaps the input loci");
        if (used[t]++)
            throw std::invalid_argument("trait node " + std::to_string(t) + " listed twice");
    }
}

std::vector<NodeId> choose_trait_nodes(std::size_t nodes, std::size_t traits, std::size_t inputs, Rng &rng)
{
    if (inputs > nodes || nodes - inputs < traits)
        throw std::invalid_argument("not enough non-input nodes to host " + std::to_string(traits) + " traits");
    std::vector<NodeId> pool(nodes - inputs);
    std::iota(pool.begin(), pool.end(), static_cast<NodeId>(inputs));
    for (std::size_t a = 0; a < traits; ++a)
        std::swap(pool[a], pool[a + rng.below(pool.size() - a)]);
    pool.resize(traits);
    return pool;
}

EnvironmentSchedule EnvironmentSchedule::stationary(std::size_t inputs, std::size_t cycles)
{
    return {{Phase{TraitVector(inputs, 0), 0, cycles}}};
}

EnvironmentSchedule EnvironmentSchedule::switching(std::size_t inputs, std::size_t cycles)
{
    const std::size_t first = cycles / 2;
    return {{Phase{TraitVector(inputs, 0), 0, first}, Phase{TraitVector(inputs, 1), 1, cycles - first}}};
}

void EnvironmentSchedule::validate(std::size_t cycles, std::size_t inputs, std::size_t landscapes) const
{
    if (phases.empty())
        throw std::invalid_argument("schedule has no phases");
    std::size_t total = 0;
    for (const auto &p : phases)
    {
        if (p.duration == 0)
            throw std::invalid_argument("schedule phase with zero duration");
        if (p.inputs.size() != inputs)
            throw std::invalid_argument("schedule phase input width " + std::to_string(p.inputs.size()) +
                                        " does not match " + std::to_string(inputs) + " input loci");
        if (p.landscape >= landscapes)
            throw std::invalid_argument("schedule refers to landscape " + std::to_string(p.landscape) + " but only " +
                                        std::to_string(landscapes) + " supplied");
        total += p.duration;
    }
    if (total != cycles)
        throw std::invalid_argument("schedule durations sum to " + std::to_string(total) + ", lifecycle is " +
                                    std::to_string(cycles));
}

std::size_t EnvironmentSchedule::landscapes_required() const
{
    std::size_t n = 0;
    for (const auto &p : phases)
        n = std::max(n, p.landscape + 1);
    return n;
}

std::string EnvironmentSchedule::describe() const
{
    std::ostringstream os;
    for (std::size_t i = 0; i < phases.size(); ++i)
    {
        if (i)
            os << ';';
        os << "landscape=" << phases[i].landscape << ",cycles=" << phases[i].duration << ",input=";
        for (auto b : phases[i].inputs)
            os << int(b);
    }
    return os.str();
}

LifecycleResult evaluate(LiveNetwork net, const EvalConfig &cfg, const EnvironmentSchedule &sched,
                         std::span<const NkLandscape> landscapes)
{
    const std::size_t nodes = net.state.size();
    cfg.validate(nodes);
    sched.validate(cfg.cycles, cfg.inputs, landscapes.size());
    for (const auto &p : sched.phases)
        if (landscapes[p.landscape].n() != cfg.trait_nodes.size())
            throw std::invalid_argument("landscape N does not match the number of trait nodes");

    LifecycleResult out;
    out.rewire_events.reserve(cfg.cycles);
    StateVector scratch(nodes);
    TraitVector traits(cfg.trait_nodes.size());
    double total = 0.0;

    auto clamp = [&](const TraitVector &inputs) {
        for (std::size_t i = 0; i < cfg.inputs; ++i)
            net.state[i] = inputs[i];
    };

    for (const auto &phase : sched.phases)
    {
        const NkLandscape &land = landscapes[phase.landscape];
        for (std::size_t c = 0; c < phase.duration; ++c)
        {
            clamp(phase.inputs);
            out.rewire_events.push_back(static_cast<std::uint32_t>(lifecycle_step(net, scratch)));
            clamp(phase.inputs);
            for (std::size_t j = 0; j < traits.size(); ++j)
                traits[j] = net.state[cfg.trait_nodes[j]];
            total += fitness_unchecked(land, traits);
        }
    }

    out.mean_fitness = total / static_cast<double>(cfg.cycles);
    out.final_state = std::move(net.state);
    out.final_topology = std::move(net.topology);
    out.final_structure_topology = std::move(net.structure_topology);
    return out;
}

DynamicsProfile dynamics_profile(LiveNetwork net, std::size_t cycles)
{
    if (cycles < 2)
        throw std::invalid_argument("dynamics profile needs at least two cycles");
    DynamicsProfile out;
    out.series.reserve(cycles);
    StateVector scratch(net.state.size());
    for (std::size_t t = 0; t < cycles; ++t)
    {
        const StateVector prev = net.state;
        lifecycle_step(net, scratch);
        out.series.push_back(changed_fraction(prev, net.state));
    }
    out.final_value = out.series.back();
    return out;
}

} // namespace dynrbn
