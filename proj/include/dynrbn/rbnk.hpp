#pragma once

#include "dynrbn/nk.hpp"
#include "dynrbn/rewiring.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace dynrbn {

/// Lifecycle length, the number of clamped input loci (nodes 0..inputs-1)
/// and the nodes read out as NK traits.
struct EvalConfig
{
    std::size_t cycles = 100;
    std::size_t inputs = 10;
    std::vector<NodeId> trait_nodes;

    /// Throws std::invalid_argument unless trait nodes are distinct and in
    /// [inputs, nodes).
    void validate(std::size_t nodes) const;
};

/// Trait nodes drawn uniformly without replacement from [inputs, nodes).
std::vector<NodeId> choose_trait_nodes(std::size_t nodes, std::size_t traits, std::size_t inputs, Rng &rng);

struct Phase
{
    TraitVector inputs;
    std::size_t landscape = 0;
    std::size_t duration = 0;

    bool operator==(const Phase &) const = default;
};

struct EnvironmentSchedule
{
    std::vector<Phase> phases;

    /// One phase, all-0 inputs, landscape 0.
    static EnvironmentSchedule stationary(std::size_t inputs, std::size_t cycles);
    /// First half all-0 inputs on landscape 0, second half all-1 inputs on
    /// landscape 1.
    static EnvironmentSchedule switching(std::size_t inputs, std::size_t cycles);

    void validate(std::size_t cycles, std::size_t inputs, std::size_t landscapes) const;
    std::size_t landscapes_required() const;
    std::string describe() const;

    bool operator==(const EnvironmentSchedule &) const = default;
};

struct LifecycleResult
{
    double mean_fitness = 0.0;
    StateVector final_state;
    Topology final_topology;
    Topology final_structure_topology;
    std::vector<std::uint32_t> rewire_events; // one entry per cycle
};

/// Runs one lifecycle from net.state. Each cycle clamps the inputs, steps
/// the network (state update then rewiring), re-clamps, and scores the
/// trait nodes on the active phase's landscape. Fitness is the mean over
/// all cycles.
LifecycleResult evaluate(LiveNetwork net, const EvalConfig &cfg, const EnvironmentSchedule &sched,
                         std::span<const NkLandscape> landscapes);

struct DynamicsProfile
{
    std::vector<double> series; // changed fraction between s(t-1) and s(t), t = 1..cycles
    double final_value = 0.0;
};

/// Unclamped lifecycle for studying network dynamics alone.
DynamicsProfile dynamics_profile(LiveNetwork net, std::size_t cycles);

} // namespace dynrbn
